#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sburg/fft.hpp"
#include "sburg/weights.hpp"

using namespace sburg;

namespace {
const auto g = PeriodicGrid::make(16.0, 512);
}

TEST_CASE("unweighted norms are recovered at ell = 0") {
    const Field zero(g);
    const auto w0 = WeightSpec::poly(0.0, g);
    CHECK(weighted_sup_norm(zero, w0) == 0.0);
    CHECK(weighted_l1_norm(zero, w0) == 0.0);

    Field one(g, std::vector<double>(g.n, 1.0));
    CHECK(weighted_sup_norm(one, w0) == doctest::Approx(1.0));
    CHECK(weighted_l1_norm(one, w0) == doctest::Approx(g.length).epsilon(1e-12));
}

TEST_CASE("poly_ell(2) L1 norm matches the quadrature oracle") {
    // int_0^L dx / (4 + (x - L/2)^2), high-resolution trapezoid
    const int n = 1 << 16;
    const double h = g.length / n;
    double oracle = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        const double r = x - 0.5 * g.length;
        oracle += (i == 0 || i == n ? 0.5 : 1.0) / (4.0 + r * r);
    }
    oracle *= h;
    Field one(g, std::vector<double>(g.n, 1.0));
    const auto w2 = WeightSpec::poly(2.0, g);
    CHECK(weighted_l1_norm(one, w2) == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("weights are strictly positive on the grid") {
    for (const auto& w :
         {WeightSpec::poly(1.5, g), WeightSpec::sqrt_log(g), WeightSpec::y_g(g)}) {
        for (int j = 0; j < g.n; ++j) CHECK(weight_at(w, g, g.x(j)) > 0.0);
    }
}

TEST_CASE("y_g weight equals the aggregated period-lattice constant") {
    // pi/(2L) mass, computed by the telescoping lattice sum
    for (double x : {0.0, 3.1, 8.0, 15.9}) {
        const double lattice = yg_weight_lattice_sum(g, x, 4000);
        CHECK(lattice == doctest::Approx(yg_weight_constant(g)).epsilon(1e-4));
    }
    CHECK(yg_weight_constant(g) == doctest::Approx(2.0 * g.length / std::numbers::pi));
}

TEST_CASE("heat rate probe recovers the smoothing exponents") {
    const std::vector<double> ts = {0.01, 0.016, 0.025, 0.04, 0.063, 0.1};
    const auto w = WeightSpec::poly(0.5, g);
    const auto flat = heat_rate_probe(0.0, w, ts, g, 12);
    CHECK(std::fabs(flat.fitted_exponent) <= 0.1);
    const auto lip = heat_rate_probe(1.0, w, ts, g, 12);
    CHECK(lip.fitted_exponent == doctest::Approx(-0.5).epsilon(0.3));
    CHECK(std::fabs(lip.fitted_exponent + 0.5) <= 0.15);
}

TEST_CASE("heat rate probe on a constant field is flat") {
    // a constant probe is fixed by the semigroup, so the ratio cannot move
    const std::vector<double> ts = {0.1, 0.2, 0.4, 0.8};
    const auto w = WeightSpec::poly(0.0, g);
    Field one(g, std::vector<double>(g.n, 1.0));
    const Spectral& sp = spectral_for(g);
    std::vector<double> heated(g.n);
    double r0 = -1.0;
    for (double t : ts) {
        sp.heat(one.v, t, heated);
        double sup = 0.0;
        for (double x : heated) sup = std::max(sup, std::fabs(x));
        if (r0 < 0.0) r0 = sup;
        CHECK(sup == doctest::Approx(r0).epsilon(1e-12));
    }
}
