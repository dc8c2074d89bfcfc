#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"
#include "sburg/stats.hpp"

using namespace sburg;

TEST_CASE("noise path is a pure function of (seed, stream)") {
    const auto g = PeriodicGrid::make(16.0, 128);
    NoisePath a(1, 0.01, 100, g, 3);
    NoisePath b(1, 0.01, 100, g, 3);
    for (std::uint64_t s : {0ull, 7ull, 99ull}) {
        const auto ra = a.row(s), rb = b.row(s);
        CHECK(ra == rb);
    }
}

TEST_CASE("pooled increment variance is dt/dx") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const double dt = 0.01;
    NoisePath path(17, dt, 400, g, 0);
    std::vector<double> all;
    all.reserve(400 * g.n);
    for (std::uint64_t s = 0; s < 400; ++s)
        for (double x : path.row(s)) all.push_back(x);
    const auto vs = variance_se(all);
    CHECK(std::fabs(vs.var - dt / g.dx) < 5.0 * vs.se);
}

TEST_CASE("distinct stream ids give uncorrelated paths") {
    const auto g = PeriodicGrid::make(16.0, 128);
    NoisePath a(5, 0.01, 200, g, 1), b(5, 0.01, 200, g, 2);
    std::vector<double> prod;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto ra = a.row(s), rb = b.row(s);
        for (int k = 0; k < g.n; ++k) prod.push_back(ra[k] * rb[k] * g.dx / 0.01);
    }
    const auto ms = mean_se(prod);
    CHECK(std::fabs(ms.mean) < 5.0 * ms.se);
}

TEST_CASE("binary round trip is bit-exact") {
    const auto g = PeriodicGrid::make(8.0, 64);
    NoisePath path(99, 2e-3, 50, g, 11);
    const auto file = std::filesystem::temp_directory_path() / "sburg_noise_test.bnp";
    path.save(file);
    const NoisePath loaded = NoisePath::load(file, g);
    CHECK(loaded.seed() == 99);
    CHECK(loaded.dt() == 2e-3);
    CHECK(loaded.steps() == 50);
    for (std::uint64_t s = 0; s < 50; ++s) CHECK(loaded.row(s) == path.row(s));
    std::filesystem::remove(file);
}

TEST_CASE("smoothing is linear and the delta mollifier is the identity") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    std::vector<double> zero(g.n, 0.0);
    const auto dv = smooth_increment(zero, rho);
    for (double x : dv) CHECK(x == doctest::Approx(0.0).epsilon(1e-300));

    const auto delta = delta_mollifier(g);
    std::vector<double> w(g.n);
    for (int j = 0; j < g.n; ++j) w[j] = std::sin(0.1 * j) + 0.3;
    const auto out = smooth_increment(w, delta);
    for (int j = 0; j < g.n; ++j) CHECK(out[j] == doctest::Approx(w[j]).epsilon(1e-12));
}

TEST_CASE("smoothed increments have covariance dt * selfconv") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    const double dt = 0.01;
    const int reps = 10000;
    NoisePath path(7, dt, reps, g, 0);
    // Spatially averaged product estimator per increment, all lags at once.
    std::vector<std::vector<double>> samples(g.n, std::vector<double>(reps));
    std::vector<double> dv(g.n);
    for (int r = 0; r < reps; ++r) {
        smooth_increment(path.row(r), rho, dv);
        for (int lag = 0; lag < g.n; ++lag) {
            double acc = 0.0;
            for (int j = 0; j < g.n; ++j) acc += dv[j] * dv[(j + lag) % g.n];
            samples[lag][r] = acc / g.n;
        }
    }
    for (int lag = 0; lag < g.n; ++lag) {
        const auto ms = mean_se(samples[lag]);
        CHECK(std::fabs(ms.mean - dt * rho.selfconv[lag]) < 5.0 * ms.se);
    }
}
