#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sburg/measures.hpp"
#include "sburg/stats.hpp"

using namespace sburg;

namespace {
EvolutionSpec noisy_spec(const PeriodicGrid& g, std::uint64_t seed) {
    EvolutionSpec spec;
    spec.grid = g;
    spec.rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    spec.scheme = SchemeConfig{};
    spec.seed = seed;
    return spec;
}

std::vector<double> sine(const PeriodicGrid& g, double amp, double mode, double phase = 0.0,
                         double mean = 0.0) {
    std::vector<double> v(g.n);
    for (int j = 0; j < g.n; ++j)
        v[j] = mean + amp * std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length + phase);
    return v;
}

BasinDecomposition odd_bump_decomp(const PeriodicGrid& g, double a) {
    BasinDecomposition d;
    d.grid = g;
    d.period = g.length;
    d.target_mean = a;
    d.v_per.assign(g.n, a);
    d.v_int.assign(g.n, 0.0);
    d.v_z.assign(g.n, 0.0);
    const double mid = 0.5 * g.length;
    for (int j = 0; j < g.n; ++j) {
        const double s1 = g.wrap(g.x(j) - mid) / (g.length / 10.0);
        const double s2 = g.wrap(g.x(j) - mid) / (g.length / 9.0);
        if (std::fabs(s1) < 1.0)
            d.v_int[j] = 0.8 * s1 * std::numbers::e * std::exp(-1.0 / (1.0 - s1 * s1));
        if (std::fabs(s2) < 1.0)
            d.v_z[j] = 0.3 * s2 * std::numbers::e * std::exp(-1.0 / (1.0 - s2 * s2));
    }
    return d;
}
}  // namespace

TEST_CASE("kb_average: noise off keeps the constant; snapshot mean matches") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 9);
    spec.noise_off = true;
    const auto est = kb_average(spec, std::vector<double>(g.n, 0.7), 0.5, 2.0, 32, 1);
    for (const auto& snap : est.snapshots)
        for (double x : snap) CHECK(x == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("kb_average: disjoint seed sets agree within 5 SE, mean preserved") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 10);
    const double a = 0.4;
    const auto est1 = kb_average(spec, std::vector<double>(g.n, a), 1.0, 3.0, 64, 1);
    spec.stream_base = 100000;
    const auto est2 = kb_average(spec, std::vector<double>(g.n, a), 1.0, 3.0, 64, 1);
    auto cell_means = [&](const MeasureEstimate& est) {
        std::vector<double> m(est.snapshots.size());
        for (std::size_t r = 0; r < est.snapshots.size(); ++r) {
            double s = 0.0;
            for (double x : est.snapshots[r]) s += x;
            m[r] = s / g.n;
        }
        return m;
    };
    const auto m1 = mean_se(cell_means(est1));
    const auto m2 = mean_se(cell_means(est2));
    CHECK(std::fabs(m1.mean - a) < 5.0 * (m1.se + 1e-13));
    CHECK(std::fabs(m1.mean - m2.mean) < 5.0 * combined_se(m1.se, m2.se));
}

TEST_CASE("coupled wasserstein bound: identical data stays at zero, monotone otherwise") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 11);
    const std::vector<double> times = {0.0, 0.25, 0.5, 1.0};
    const auto same = coupled_wasserstein_bound(spec, sine(g, 0.5, 1.0), sine(g, 0.5, 1.0), times,
                                                16, 1);
    for (double d : same.dhat) CHECK(d == 0.0);

    const auto curve =
        coupled_wasserstein_bound(spec, sine(g, 0.8, 1.0), sine(g, 0.5, 2.0, 0.4), times, 16, 1);
    CHECK(curve.monotonicity_violations == 0);
    CHECK(curve.dhat.front() > curve.dhat.back());
}

TEST_CASE("ordering audit trivia") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 12);
    // identical initial data: eta == 0, not sign-constant by our convention,
    // but an ordered pair with a strict gap is exactly constant sign
    auto lo = sine(g, 0.6, 1.0);
    auto hi = lo;
    for (double& x : hi) x += 0.5;
    const auto rep = ordering_audit(spec, lo, hi, 0.5, 16, 1);
    CHECK(rep.sign_constant_fraction == 1.0);
    CHECK(rep.min_gap > 0.0);
}

TEST_CASE("shear audit: c=0 compares a law against itself") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 13);
    const std::vector<double> lags = {0.25, 0.5};
    const auto rep = shear_audit(spec, sine(g, 0.5, 1.0), 0.0, 1.0, lags, 48, 1);
    CHECK(rep.max_abs_z < 5.0);
    // means agree exactly by conservation
    CHECK(rep.stats[0].zscore == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("sandwich: trivial decomposition returns v_per with K=1") {
    const auto g = PeriodicGrid::make(16.0, 128);
    BasinDecomposition d;
    d.grid = g;
    d.period = g.length;
    d.target_mean = 0.3;
    d.v_per.assign(g.n, 0.3);
    d.v_int.assign(g.n, 0.0);
    d.v_z.assign(g.n, 0.0);
    const auto sw = sandwich(d, 0.25);
    CHECK(sw.K == 1);
    for (int j = 0; j < g.n; ++j) {
        CHECK(sw.v_minus[j] == doctest::Approx(0.3));
        CHECK(sw.v_plus[j] == doctest::Approx(0.3));
    }
}

TEST_CASE("sandwich bounds the field and its period averages") {
    const auto g = PeriodicGrid::make(16.0, 256);
    const auto d = odd_bump_decomp(g, 0.0);
    const double eps = 0.5;
    const auto sw = sandwich(d, eps);
    const auto v = d.total();
    for (int j = 0; j < g.n; ++j) {
        CHECK(sw.v_minus[j] <= v[j]);
        CHECK(v[j] <= sw.v_plus[j]);
        CHECK(sw.v_plus[j] >= sw.v_minus[j]);
    }
    CHECK(sw.mean_plus - d.target_mean < eps);
    CHECK(d.target_mean - sw.mean_minus < eps);
    CHECK(sw.mean_plus - sw.mean_minus < 2.0 * eps);
}

TEST_CASE("sandwich rejects an eps too small for the torus") {
    const auto g = PeriodicGrid::make(16.0, 256);
    const auto d = odd_bump_decomp(g, 0.0);
    CHECK_THROWS_WITH_AS(sandwich(d, 1e-6), doctest::Contains("enlarge"), std::invalid_argument);
}

TEST_CASE("stability experiment: constant decomposition has zero distances") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 14);
    BasinDecomposition d;
    d.grid = g;
    d.period = g.length;
    d.target_mean = 0.2;
    d.v_per.assign(g.n, 0.2);
    d.v_int.assign(g.n, 0.0);
    d.v_z.assign(g.n, 0.0);
    const std::vector<double> times = {0.0, 0.2, 0.5};
    const auto rep = stability_experiment(spec, d, 0.3, 0.5, times, 8, 1);
    for (double x : rep.dist_to_reference) CHECK(x == 0.0);
    CHECK(rep.sandwich_violations == 0);
}

TEST_CASE("stability experiment: sandwich exact, distances monotone, ceiling identity") {
    const auto g = PeriodicGrid::make(16.0, 256);
    EvolutionSpec spec = noisy_spec(g, 15);
    const auto d = odd_bump_decomp(g, 0.0);
    const std::vector<double> times = {0.0, 0.5, 1.0, 2.0};
    const auto rep = stability_experiment(spec, d, 0.5, 2.0, times, 12, 1);
    CHECK(rep.sandwich_violations == 0);
    CHECK(rep.monotonicity_violations == 0);
    CHECK(rep.ceiling_identity_gap < 1e-9);
    CHECK(rep.final_dist < rep.initial_dist);
}

TEST_CASE("stationary moment audit: noise off is vacuous but certified") {
    const auto g = PeriodicGrid::make(16.0, 128);
    EvolutionSpec spec = noisy_spec(g, 16);
    spec.rho = zero_mollifier(g);
    spec.noise_off = true;
    const auto audit =
        stationary_moment_audit(spec, std::vector<double>(g.n, 0.0), 1.0, 0.5, 32, 1);
    CHECK(audit.vacuous);
    CHECK(audit.var_u == 0.0);
    CHECK(audit.grad_sq == 0.0);
    CHECK(audit.equilibration_certified);
}
