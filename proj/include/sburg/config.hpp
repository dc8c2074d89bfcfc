#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sburg/burgers.hpp"
#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"

namespace sburg {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed experiment configuration. Every statistically calibrated threshold
/// must appear explicitly under "thresholds"; threshold() throws a
/// ConfigError naming the missing entry, so nothing can fall back to a
/// hidden default.
struct ExperimentConfig {
    PeriodicGrid grid;
    MollifierKind mollifier_kind = MollifierKind::gaussian;
    double mollifier_width = 0.5;
    SchemeConfig scheme;
    std::uint64_t seed = 1;
    double t_max = 1.0;
    int realizations = 100;
    double burn_in = 0.0;
    double snapshot_spacing = 0.1;
    std::string experiment_kind;
    nlohmann::json experiment;  // kind-specific parameters
    nlohmann::json thresholds;
    std::string output_dir = "out";
    std::string canonical;  // canonical dump used for the config hash

    static ExperimentConfig load(const std::filesystem::path& file);
    static ExperimentConfig from_json(const nlohmann::json& j);

    SampledMollifier build_rho() const;
    double threshold(const std::string& name) const;
    /// Kind-specific parameter with a mandatory presence check.
    const nlohmann::json& param(const std::string& name) const;
    std::string config_hash() const;

    /// Advective CFL sanity check against a guess for max |u|:
    /// max initial amplitude + 3 ||rho||.
    void validate_dt(double max_initial_amplitude) const;
};

/// Builds an initial condition from a JSON spec. Supported types:
///   {"type":"constant","value":a}
///   {"type":"sine","mean":m,"amplitude":A,"mode":k,"phase":p}
///   {"type":"bump","center":c,"width":w,"amplitude":A}      (C-infinity bump)
///   {"type":"odd_bump","center":c,"width":w,"amplitude":A}  (zero integral)
///   {"type":"zero"}
std::vector<double> build_initial(const nlohmann::json& spec, const PeriodicGrid& g);

}  // namespace sburg
