#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sburg/fft.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"
#include "sburg/rng.hpp"
#include "sburg/stats.hpp"

using namespace sburg;

namespace {
const auto g = PeriodicGrid::make(16.0, 256);

Field sine_field(double mode, double phase = 0.0) {
    Field f(g);
    for (int j = 0; j < g.n; ++j)
        f[j] = std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length + phase);
    return f;
}

Field smooth_random_field(std::uint64_t seed) {
    RngStream rng(seed, 0);
    Field f(g);
    for (int m = 1; m <= 6; ++m) {
        const double amp = rng.next_normal() / m;
        const double ph = 2.0 * std::numbers::pi * rng.next_uniform();
        for (int j = 0; j < g.n; ++j)
            f[j] += amp * std::sin(2.0 * std::numbers::pi * m * g.x(j) / g.length + ph);
    }
    return f;
}

double l2(const Field& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * g.dx);
}
}  // namespace

TEST_CASE("heat semigroup basics") {
    const Field f = smooth_random_field(1);
    const Field id = heat_apply(f, 0.0);
    for (int j = 0; j < g.n; ++j) CHECK(id[j] == doctest::Approx(f[j]).epsilon(1e-13));

    const double k1 = 2.0 * std::numbers::pi / g.length;
    const Field mode = sine_field(1.0);
    const Field decayed = heat_apply(mode, 1.0);
    const double factor = std::exp(-0.5 * k1 * k1);
    for (int j = 0; j < g.n; ++j)
        CHECK(decayed[j] == doctest::Approx(factor * mode[j]).epsilon(1e-12));

    double m0 = 0.0, m1 = 0.0;
    const Field shifted = heat_apply(f, 0.7);
    for (int j = 0; j < g.n; ++j) {
        m0 += f[j];
        m1 += shifted[j];
    }
    CHECK(m1 / g.n == doctest::Approx(m0 / g.n).epsilon(1e-13));
}

TEST_CASE("semigroup property and maximum principle") {
    const Field f = smooth_random_field(2);
    const Field ab = heat_apply(heat_apply(f, 0.3), 0.5);
    const Field c = heat_apply(f, 0.8);
    for (int j = 0; j < g.n; ++j) CHECK(ab[j] == doctest::Approx(c[j]).epsilon(1e-11));

    double lo = 1e300, hi = -1e300;
    for (double x : f.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const Field h = heat_apply(f, 0.2);
    for (double x : h.v) {
        CHECK(x >= lo - 1e-11);
        CHECK(x <= hi + 1e-11);
    }
}

TEST_CASE("parseval under transform round trip") {
    const Field f = smooth_random_field(3);
    const Spectral& sp = spectral_for(g);
    std::vector<std::complex<double>> hat(sp.fft().n_modes());
    sp.fft().forward(f.v, hat.data());
    Field back(g);
    sp.fft().inverse(hat.data(), back.v);
    CHECK(l2(back) == doctest::Approx(l2(f)).epsilon(1e-12));
}

TEST_CASE("spectral derivative") {
    Field c(g, std::vector<double>(g.n, 3.7));
    const Field dc = ddx(c);
    for (double x : dc.v) CHECK(std::fabs(x) < 1e-12);

    const double k1 = 2.0 * std::numbers::pi / g.length;
    const Field s = sine_field(1.0);
    const Field ds = ddx(s);
    for (int j = 0; j < g.n; ++j)
        CHECK(ds[j] == doctest::Approx(k1 * std::cos(k1 * g.x(j))).epsilon(1e-10));

    // discrete integration by parts
    const Field a = smooth_random_field(4), b = smooth_random_field(5);
    const Field da = ddx(a), db = ddx(b);
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < g.n; ++j) {
        lhs += da[j] * b[j] * g.dx;
        rhs -= a[j] * db[j] * g.dx;
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("exact translation") {
    const Field f = smooth_random_field(6);
    const Field s0 = shift(f, 0.0);
    for (int j = 0; j < g.n; ++j) CHECK(s0[j] == doctest::Approx(f[j]).epsilon(1e-13));
    const Field sL = shift(f, g.length);
    for (int j = 0; j < g.n; ++j) CHECK(sL[j] == doctest::Approx(f[j]).epsilon(1e-12));
    const Field round = shift(shift(f, 1.234), -1.234);
    for (int j = 0; j < g.n; ++j) CHECK(round[j] == doctest::Approx(f[j]).epsilon(1e-12));
    // shift by a whole number of cells is an index roll
    const Field cells = shift(f, 5 * g.dx);
    for (int j = 0; j < g.n; ++j)
        CHECK(cells[j] == doctest::Approx(f[(j + g.n - 5) % g.n]).epsilon(1e-11));
}

TEST_CASE("psi_step: heat decay with the noise off") {
    const Field mode = sine_field(1.0);
    LinearizedField psi{mode, 0.0};
    std::vector<double> zero(g.n, 0.0);
    const auto next = psi_step(psi, zero, 0.01);
    const double k1 = 2.0 * std::numbers::pi / g.length;
    const double factor = std::exp(-0.5 * k1 * k1 * 0.01);
    for (int j = 0; j < g.n; ++j)
        CHECK(next.psi[j] == doctest::Approx(factor * mode[j]).epsilon(1e-12));
}

TEST_CASE("psi has mean zero and matches the fixed-time covariance law") {
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    const double dt = 2e-3;
    const double t_end = 0.5;
    const int steps = static_cast<int>(t_end / dt);
    const int reps = 4000;
    std::vector<std::vector<double>> corr(g.n, std::vector<double>(reps));
    for (int r = 0; r < reps; ++r) {
        PsiEvolver psi(g, rho);
        NoisePath noise(2025, dt, steps, g, r);
        std::vector<double> dW(g.n);
        for (int s = 0; s < steps; ++s) {
            noise.row(s, dW);
            psi.step(dW, dt);
        }
        double mean = 0.0, amax = 0.0;
        for (double x : psi.psi()) {
            mean += x;
            amax = std::max(amax, std::fabs(x));
        }
        CHECK(std::fabs(mean / g.n) <= 1e-10 * std::max(amax, 1e-30));
        for (int lag = 0; lag < g.n; ++lag) {
            double acc = 0.0;
            for (int j = 0; j < g.n; ++j) acc += psi.psi()[j] * psi.psi()[(j + lag) % g.n];
            corr[lag][r] = acc / g.n;
        }
    }
    const auto oracle = psi_stationary_covariance(rho, t_end, g);
    for (int lag = 0; lag < g.n; ++lag) {
        const auto ms = mean_se(corr[lag]);
        CHECK(std::fabs(ms.mean - oracle[lag]) < 5.0 * ms.se);
    }
}

TEST_CASE("stationary covariance curve") {
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    const auto zero = psi_stationary_covariance(rho, 0.0, g);
    for (double x : zero) CHECK(std::fabs(x) < 1e-13);

    // As t -> infinity the curve approaches selfconv with its torus mean
    // removed (the zero mode of psi vanishes identically on the torus).
    const auto late = psi_stationary_covariance(rho, 1e3, g);
    double mean_sc = 0.0;
    for (double x : rho.selfconv) mean_sc += x;
    mean_sc /= g.n;
    for (int j = 0; j < g.n; ++j) CHECK(std::fabs(late[j] - (rho.selfconv[j] - mean_sc)) < 1e-6);

    double prev = 0.0;
    for (double t : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
        const double at0 = psi_stationary_covariance(rho, t, g)[0];
        CHECK(at0 >= prev - 1e-14);
        prev = at0;
    }
}
