#include "sburg/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "sburg/field_io.hpp"

namespace sburg {

namespace {
const nlohmann::json& need(const nlohmann::json& j, const std::string& key,
                           const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("config: missing field '" + where + key + "'");
    return *it;
}

template <typename T>
T need_as(const nlohmann::json& j, const std::string& key, const std::string& where) {
    try {
        return need(j, key, where).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: field '" + where + key + "' has the wrong type");
    }
}
}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("config: cannot open " + file.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + file.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const auto& grid = need(j, "grid", "");
    c.grid = PeriodicGrid::make(need_as<double>(grid, "length", "grid."),
                                need_as<int>(grid, "n", "grid."));

    const auto& mol = need(j, "mollifier", "");
    c.mollifier_kind =
        mollifier_kind_from_string(need_as<std::string>(mol, "kind", "mollifier."));
    c.mollifier_width = need_as<double>(mol, "width", "mollifier.");
    if (c.mollifier_width < 4.0 * c.grid.dx)
        throw ConfigError("config: field 'mollifier.width' must be >= 4*dx so the kernel is "
                          "resolved on the grid");
    if (c.mollifier_width > c.grid.length / 8.0)
        throw ConfigError("config: field 'mollifier.width' must be <= length/8");

    const auto& scheme = need(j, "scheme", "");
    c.scheme.dt = need_as<double>(scheme, "dt", "scheme.");
    if (!(c.scheme.dt > 0.0)) throw ConfigError("config: field 'scheme.dt' must be > 0");
    c.scheme.flux = flux_kind_from_string(need_as<std::string>(scheme, "flux", "scheme."));
    c.scheme.cfl_safety = need_as<double>(scheme, "cfl_safety", "scheme.");
    if (!(c.scheme.cfl_safety > 0.0 && c.scheme.cfl_safety <= 1.0))
        throw ConfigError("config: field 'scheme.cfl_safety' must lie in (0,1]");

    const auto& noise = need(j, "noise", "");
    c.seed = need_as<std::uint64_t>(noise, "seed", "noise.");
    c.t_max = need_as<double>(noise, "t_max", "noise.");

    const auto& stats = need(j, "statistics", "");
    c.realizations = need_as<int>(stats, "realizations", "statistics.");
    if (c.realizations < 1)
        throw ConfigError("config: field 'statistics.realizations' must be >= 1");
    c.burn_in = stats.value("burn_in", 0.0);
    c.snapshot_spacing = stats.value("snapshot_spacing", 0.1);

    const auto& exp = need(j, "experiment", "");
    c.experiment_kind = need_as<std::string>(exp, "kind", "experiment.");
    c.experiment = exp;
    c.thresholds = j.value("thresholds", nlohmann::json::object());
    c.output_dir = j.value("output_dir", std::string("out"));
    c.canonical = j.dump();
    return c;
}

SampledMollifier ExperimentConfig::build_rho() const {
    return build_mollifier(mollifier_kind, mollifier_width, grid);
}

double ExperimentConfig::threshold(const std::string& name) const {
    auto it = thresholds.find(name);
    if (it == thresholds.end())
        throw ConfigError("config: missing field 'thresholds." + name +
                          "' (all calibrated thresholds must be explicit)");
    return it->get<double>();
}

const nlohmann::json& ExperimentConfig::param(const std::string& name) const {
    auto it = experiment.find(name);
    if (it == experiment.end())
        throw ConfigError("config: missing field 'experiment." + name + "'");
    return *it;
}

std::string ExperimentConfig::config_hash() const { return fnv1a_hex(canonical); }

void ExperimentConfig::validate_dt(double max_initial_amplitude) const {
    const auto rho = build_rho();
    const double guess = max_initial_amplitude + 3.0 * std::sqrt(rho.l2sq);
    if (scheme.dt > scheme.cfl_safety * grid.dx / guess)
        throw ConfigError("config: field 'scheme.dt' violates the advective CFL guess dt <= "
                          "cfl_safety*dx/(max amplitude + 3||rho||) = " +
                          std::to_string(scheme.cfl_safety * grid.dx / guess));
}

std::vector<double> build_initial(const nlohmann::json& spec, const PeriodicGrid& g) {
    const std::string type = need_as<std::string>(spec, "type", "initial.");
    std::vector<double> v(g.n, 0.0);
    if (type == "zero") return v;
    if (type == "constant") {
        const double a = need_as<double>(spec, "value", "initial.");
        std::fill(v.begin(), v.end(), a);
        return v;
    }
    if (type == "sine") {
        const double mean = spec.value("mean", 0.0);
        const double amp = need_as<double>(spec, "amplitude", "initial.");
        const double mode = spec.value("mode", 1.0);
        const double phase = spec.value("phase", 0.0);
        for (int j = 0; j < g.n; ++j)
            v[j] = mean + amp * std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length + phase);
        return v;
    }
    if (type == "bump" || type == "odd_bump") {
        const double center = need_as<double>(spec, "center", "initial.");
        const double width = need_as<double>(spec, "width", "initial.");
        const double amp = need_as<double>(spec, "amplitude", "initial.");
        // normalize so the peak value is `amp` in both shapes
        const double s_star = 0.5 * (std::sqrt(6.0) - std::sqrt(2.0));
        const double odd_peak = s_star * std::exp(-1.0 / (1.0 - s_star * s_star));
        for (int j = 0; j < g.n; ++j) {
            const double s = g.wrap(g.x(j) - center) / width;
            if (std::fabs(s) < 1.0) {
                const double core = std::exp(-1.0 / (1.0 - s * s));
                v[j] = amp * (type == "bump" ? core * std::numbers::e : s * core / odd_peak);
            }
        }
        return v;
    }
    throw ConfigError("config: field 'initial.type' has unknown value '" + type + "'");
}

}  // namespace sburg
