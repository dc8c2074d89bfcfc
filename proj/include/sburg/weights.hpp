#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sburg/grid.hpp"

namespace sburg {

/// Weights adapted from the whole-line theory to the torus, centered at the
/// domain midpoint: poly_ell is <x-c>^ell with <x> = sqrt(4 + x^2), sqrt_log
/// is <x-c>^{1/2} log<x-c>, and y_g is the period-aggregated 1/p_2 weight,
/// which is spatially constant on the torus (see yg_weight_constant).
struct WeightSpec {
    enum class Kind { poly_ell, sqrt_log, y_g };
    Kind kind = Kind::poly_ell;
    double ell = 0.0;
    double center = 0.0;

    static WeightSpec poly(double ell, const PeriodicGrid& g) {
        return {Kind::poly_ell, ell, 0.5 * g.length};
    }
    static WeightSpec sqrt_log(const PeriodicGrid& g) {
        return {Kind::sqrt_log, 0.0, 0.5 * g.length};
    }
    static WeightSpec y_g(const PeriodicGrid& g) { return {Kind::y_g, 0.0, 0.5 * g.length}; }
};

/// Aggregating 1/p_2(x - y) over the period lattice {y + m L} gives the same
/// constant for every x: (1/L) * int_R dx/(4+x^2) = pi/(2L). The y_g "weight"
/// is the reciprocal of that constant.
double yg_weight_constant(const PeriodicGrid& g);

/// Same lattice aggregation by direct summation (arctan telescoping with an
/// analytic tail); used to cross-check yg_weight_constant.
double yg_weight_lattice_sum(const PeriodicGrid& g, double x, int images);

double weight_at(const WeightSpec& w, const PeriodicGrid& g, double x);

double weighted_sup_norm(const Field& f, const WeightSpec& w);
double weighted_l1_norm(const Field& f, const WeightSpec& w);

/// Empirical check of the heat-semigroup smoothing rate: for a family of
/// rough probe fields f with ||f||_{L^inf_w} = 1, measures
/// sup_f ||G_t f||_{C^beta_w} over a list of times and fits the exponent of t.
/// The Holder seminorm is approximated by difference quotients at lags of
/// 1..ceil(1/dx) cells, mirroring the sup over |x-y| <= 1.
struct HeatRateTable {
    std::vector<double> times;
    std::vector<double> ratios;    // sup over the probe family
    double fitted_exponent = 0.0;  // slope of log(ratio) vs log(t)
};

HeatRateTable heat_rate_probe(double beta, const WeightSpec& w, std::span<const double> t_list,
                              const PeriodicGrid& g, int probe_count);

}  // namespace sburg
