#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sburg/burgers.hpp"
#include "sburg/fft.hpp"
#include "sburg/mollifier.hpp"

using namespace sburg;

namespace {
std::vector<double> sine(const PeriodicGrid& g, double amp, double mode, double phase = 0.0,
                         double mean = 0.0) {
    std::vector<double> v(g.n);
    for (int j = 0; j < g.n; ++j)
        v[j] = mean + amp * std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length + phase);
    return v;
}

double spatial_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}
}  // namespace

TEST_CASE("constants are exact steady states with the noise off") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = zero_mollifier(g);
    BurgersEnsemble ens({std::vector<double>(g.n, 1.3)}, g, rho);
    SchemeConfig cfg;
    std::vector<double> zero(g.n, 0.0);
    for (int s = 0; s < 500; ++s) ens.step(zero, cfg);
    for (double x : ens.u(0)) CHECK(x == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("noise-off self-convergence against a fine-grid run is at least first order") {
    const double T = 1.0;
    auto solve = [&](int n) {
        const auto g = PeriodicGrid::make(16.0, n);
        const auto rho = zero_mollifier(g);
        SchemeConfig cfg;
        cfg.dt = 2e-4;  // time resolution fixed, spatial error dominates
        BurgersEnsemble ens({sine(g, 1.0, 1.0)}, g, rho);
        std::vector<double> zero(g.n, 0.0);
        const int steps = static_cast<int>(std::llround(T / cfg.dt));
        for (int s = 0; s < steps; ++s) ens.step(zero, cfg);
        return ens.u(0);
    };
    const auto ref = solve(2048);
    auto err = [&](int n) {
        const auto u = solve(n);
        const int stride = 2048 / n;
        double e = 0.0;
        for (int j = 0; j < n; ++j) e += std::fabs(u[j] - ref[j * stride]) * (16.0 / n);
        return e;
    };
    const double e128 = err(128), e256 = err(256), e512 = err(512);
    CHECK(std::log2(e128 / e256) >= 1.0);
    CHECK(std::log2(e256 / e512) >= 1.0);
}

TEST_CASE("noise on: the mean of every component is conserved step by step") {
    const auto g = PeriodicGrid::make(16.0, 256);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    BurgersEnsemble ens({sine(g, 0.8, 1.0, 0.0, 0.4), sine(g, 0.5, 2.0, 1.0, -0.2)}, g, rho);
    SchemeConfig cfg;
    NoisePath noise(11, cfg.dt, 2000, g, 0);
    std::vector<double> dW(g.n);
    const double m0 = spatial_mean(ens.theta(0)), m1 = spatial_mean(ens.theta(1));
    for (int s = 0; s < 2000; ++s) {
        noise.row(s, dW);
        ens.step(dW, cfg);
        CHECK(std::fabs(spatial_mean(ens.theta(0)) - m0) <= 1e-12);
        CHECK(std::fabs(spatial_mean(ens.theta(1)) - m1) <= 1e-12);
    }
}

TEST_CASE("runs are bit-deterministic and components permute") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    SchemeConfig cfg;
    NoisePath noise(21, cfg.dt, 300, g, 5);
    const std::vector<double> a = sine(g, 0.7, 1.0), b = sine(g, 0.4, 2.0, 0.3);
    const std::vector<double> times = {0.1, 0.3};

    const auto t1 = run({a, b}, noise, cfg, rho, times);
    const auto t2 = run({a, b}, noise, cfg, rho, times);
    CHECK(t1.u == t2.u);

    const auto t3 = run({b, a}, noise, cfg, rho, times);
    CHECK(t3.u[1][0] == t1.u[1][1]);
    CHECK(t3.u[1][1] == t1.u[1][0]);
}

TEST_CASE("comparison: ordered data stays ordered under shared noise") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    SchemeConfig cfg;
    auto lo = sine(g, 1.0, 1.0);
    auto hi = lo;
    for (double& x : hi) x += 0.3;
    for (int path = 0; path < 20; ++path) {
        BurgersEnsemble ens({lo, hi}, g, rho);
        NoisePath noise(31, cfg.dt, 400, g, path);
        std::vector<double> dW(g.n);
        for (int s = 0; s < 400; ++s) {
            noise.row(s, dW);
            ens.step(dW, cfg);
            const auto d = compare(ens, 0, 1);
            CHECK(d.pos_part_l1 == 0.0);
        }
    }
}

TEST_CASE("L1 contraction holds for crossing pairs at machine precision") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    SchemeConfig cfg;
    const auto a = sine(g, 1.0, 1.0), b = sine(g, 0.8, 3.0, 0.7);
    for (int path = 0; path < 20; ++path) {
        BurgersEnsemble ens({a, b}, g, rho);
        NoisePath noise(41, cfg.dt, 400, g, path);
        std::vector<double> dW(g.n);
        double l1_prev = compare(ens, 0, 1).l1;
        const double l1_0 = l1_prev;
        for (int s = 0; s < 400; ++s) {
            noise.row(s, dW);
            ens.step(dW, cfg);
            const double l1 = compare(ens, 0, 1).l1;
            CHECK(l1 <= l1_prev + 1e-12 * l1_0);
            l1_prev = l1;
        }
    }
}

TEST_CASE("identical components have vanishing diagnostics") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    BurgersEnsemble ens({sine(g, 1.0, 1.0), sine(g, 1.0, 1.0)}, g, rho);
    const auto d = compare(ens, 0, 1);
    CHECK(d.l1 == 0.0);
    CHECK(d.pos_part_l1 == 0.0);
    CHECK(d.crossing_sum == 0.0);
}

TEST_CASE("CFL violation is rejected with a diagnostic, state untouched") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    SchemeConfig cfg;
    cfg.dt = 0.2;  // way beyond the advective limit for amplitude ~8
    BurgersEnsemble ens({sine(g, 8.0, 1.0)}, g, rho);
    std::vector<double> dW(g.n, 0.0);
    const auto before = ens.u(0);
    CHECK_THROWS_AS(ens.step(dW, cfg), CflViolation);
    CHECK(ens.u(0) == before);
    CHECK(ens.t() == 0.0);
}

TEST_CASE("dissipation audit: trivial, transversal, and ordered cases") {
    const auto g = PeriodicGrid::make(16.0, 512);
    const auto rho = zero_mollifier(g);
    SchemeConfig cfg;
    cfg.dt = 5e-4;
    std::vector<double> times;
    for (double t = 0.0; t <= 0.5 + 1e-9; t += 10 * cfg.dt) times.push_back(t);
    NoisePath noise(51, cfg.dt, 1200, g, 0);
    RunOptions off;
    off.noise_off = true;

    // identical components: both sides vanish
    {
        const auto traj = run({sine(g, 1.0, 1.0), sine(g, 1.0, 1.0)}, noise, cfg, rho, times, off);
        const auto rep = f_dissipation_audit(traj, 0, 1, DissipationFunctional::abs, 0.0);
        CHECK(rep.initial_mass == 0.0);
        for (double s : rep.slack) CHECK(s == 0.0);
    }
    // one transversal crossing: u1 = sin, u2 = 0, noise off
    {
        const auto traj =
            run({sine(g, 1.0, 1.0), std::vector<double>(g.n, 0.0)}, noise, cfg, rho, times, off);
        for (auto F : {DissipationFunctional::abs, DissipationFunctional::pos_part}) {
            const auto rep = f_dissipation_audit(traj, 0, 1, F, 0.0);
            CHECK(rep.min_slack >= -1e-3 * rep.initial_mass);
        }
    }
    // ordered pair: no crossings, and with flux+noise off the L1 mass of a
    // signed difference is conserved by the heat flow
    {
        auto lo = std::vector<double>(g.n, 0.0);
        auto hi = sine(g, 0.5, 2.0);
        for (double& x : hi) x += 0.8;  // strictly positive difference
        BurgersEnsemble ens({lo, hi}, g, rho);
        // pure heat mode: disable transport by keeping both fields equal in
        // the flux argument? Instead evolve the difference under heat alone:
        const auto d0 = compare(ens, 0, 1);
        Field diff(g, d0.eta);
        const Field heated = heat_apply(diff, 0.5);
        double m0 = 0.0, m1 = 0.0;
        for (int j = 0; j < g.n; ++j) {
            m0 += std::fabs(d0.eta[j]) * g.dx;
            m1 += std::fabs(heated[j]) * g.dx;
        }
        CHECK(compare(ens, 0, 1).crossing_sum == 0.0);
        CHECK(m1 == doctest::Approx(m0).epsilon(1e-12));
    }
}
