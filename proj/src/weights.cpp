#include "sburg/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sburg/fft.hpp"
#include "sburg/stats.hpp"

namespace sburg {

namespace {
double angle_bracket(double r) { return std::sqrt(4.0 + r * r); }
}  // namespace

double yg_weight_constant(const PeriodicGrid& g) {
    return 2.0 * g.length / std::numbers::pi;
}

double yg_weight_lattice_sum(const PeriodicGrid& g, double x, int images) {
    // (1/p_2 * lambda_G)(x + mL) summed over m in [-images, images], where
    // lambda_G is (1/L) Lebesgue on [0,L): each term integrates 1/(4+s^2)
    // over one period, so the sum telescopes to an arctan difference.
    const double lo = x - (images + 1) * g.length;
    const double hi = x + images * g.length;
    const double mass = (std::atan(hi / 2.0) - std::atan(lo / 2.0)) / (2.0 * g.length);
    return 1.0 / mass;
}

double weight_at(const WeightSpec& w, const PeriodicGrid& g, double x) {
    const double r = g.wrap(x - w.center);
    switch (w.kind) {
        case WeightSpec::Kind::poly_ell:
            return std::pow(angle_bracket(r), w.ell);
        case WeightSpec::Kind::sqrt_log:
            return std::sqrt(angle_bracket(r)) * std::log(angle_bracket(r));
        case WeightSpec::Kind::y_g:
            return yg_weight_constant(g);
    }
    throw std::logic_error("weight_at: bad kind");
}

double weighted_sup_norm(const Field& f, const WeightSpec& w) {
    double m = 0.0;
    for (int j = 0; j < f.n(); ++j)
        m = std::max(m, std::fabs(f[j]) / weight_at(w, f.grid, f.grid.x(j)));
    return m;
}

double weighted_l1_norm(const Field& f, const WeightSpec& w) {
    double s = 0.0;
    if (w.kind == WeightSpec::Kind::y_g) {
        for (int j = 0; j < f.n(); ++j) s += std::fabs(f[j]);
        return s * f.grid.dx / yg_weight_constant(f.grid);
    }
    for (int j = 0; j < f.n(); ++j)
        s += std::fabs(f[j]) / weight_at(w, f.grid, f.grid.x(j)) * f.grid.dx;
    return s;
}

namespace {
double holder_norm(std::span<const double> v, const WeightSpec& w, const PeriodicGrid& g,
                   double beta) {
    double norm = 0.0;
    for (int j = 0; j < g.n; ++j)
        norm = std::max(norm, std::fabs(v[j]) / weight_at(w, g, g.x(j)));
    if (beta <= 0.0) return norm;
    const int max_lag = static_cast<int>(std::ceil(1.0 / g.dx));
    double semi = 0.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
        const double h = std::pow(lag * g.dx, beta);
        for (int j = 0; j < g.n; ++j) {
            const int j2 = (j + lag) % g.n;
            const double q = std::fabs(v[j] - v[j2]) / (weight_at(w, g, g.x(j)) * h);
            semi = std::max(semi, q);
        }
    }
    return norm + semi;
}
}  // namespace

HeatRateTable heat_rate_probe(double beta, const WeightSpec& w, std::span<const double> t_list,
                              const PeriodicGrid& g, int probe_count) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("heat_rate_probe: beta in [0,1]");
    const Spectral& sp = spectral_for(g);
    // The probe family must come close to the sup over the unit ball of
    // L^inf_w, so random signs are no good (they cancel under the heat flow).
    // Use w(x) itself plus w times square waves on a geometric frequency
    // ladder: the envelope of max_k k^beta e^{-k^2 t/2} carries the t^{-beta/2}
    // rate.
    std::vector<std::vector<double>> probes;
    {
        std::vector<double> f(g.n);
        for (int j = 0; j < g.n; ++j) f[j] = weight_at(w, g, g.x(j));
        probes.push_back(f);
        double mode = 1.0;
        for (int p = 0; p < probe_count; ++p) {
            std::vector<double> sq(g.n);
            for (int j = 0; j < g.n; ++j) {
                const double s =
                    std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length + 0.25);
                sq[j] = (s >= 0.0 ? 1.0 : -1.0) * weight_at(w, g, g.x(j));
            }
            probes.push_back(std::move(sq));
            mode = std::max(mode + 1.0, std::round(mode * 1.4));
            if (mode > g.n / 4) break;
        }
    }
    HeatRateTable table;
    std::vector<double> heated(g.n), logt, logr;
    for (double t : t_list) {
        double ratio = 0.0;
        for (const auto& f : probes) {
            sp.heat(f, t, heated);
            ratio = std::max(ratio, holder_norm(heated, w, g, beta));
        }
        table.times.push_back(t);
        table.ratios.push_back(ratio);
        logt.push_back(std::log(t));
        logr.push_back(std::log(ratio));
    }
    table.fitted_exponent = ols_slope(logt, logr);
    return table;
}

}  // namespace sburg
