#include <doctest.h>

#include <cmath>
#include <vector>

#include "sburg/rng.hpp"
#include "sburg/stats.hpp"

using namespace sburg;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors for the 10-round Philox4x32 generator.
    const auto zero = detail::philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto ones = detail::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                            {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("inverse normal CDF agrees with an erfc-based bisection oracle") {
    auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    auto oracle = [&](double p) {
        double lo = -10.0, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    for (double p : {1e-10, 1e-6, 0.025, 0.2, 0.5, 0.8, 0.975, 1.0 - 1e-6}) {
        const double got = detail::inverse_normal_cdf(p);
        CHECK(got == doctest::Approx(oracle(p)).epsilon(1e-9));
    }
    CHECK(detail::inverse_normal_cdf(0.5) == 0.0);
}

TEST_CASE("counter-addressed draws are deterministic and order-independent") {
    RngStream a(12345, 7);
    RngStream b(12345, 7);
    std::vector<double> forward, backward;
    for (int i = 0; i < 100; ++i) forward.push_back(a.normal_at(i));
    for (int i = 99; i >= 0; --i) backward.push_back(b.normal_at(i));
    for (int i = 0; i < 100; ++i) CHECK(forward[i] == backward[99 - i]);

    RngStream c(12345, 8);
    CHECK(c.normal_at(0) != a.normal_at(0));
}

TEST_CASE("normals have the right moments") {
    RngStream rng(2024, 0);
    const int n = 200000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = rng.normal_at(i);
    const auto ms = mean_se(xs);
    CHECK(std::fabs(ms.mean) < 5.0 * ms.se);
    const auto vs = variance_se(xs);
    CHECK(std::fabs(vs.var - 1.0) < 5.0 * vs.se);
}

TEST_CASE("distinct streams are uncorrelated") {
    RngStream a(99, 1), b(99, 2);
    const int n = 100000;
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i) prod[i] = a.normal_at(i) * b.normal_at(i);
    const auto ms = mean_se(prod);
    CHECK(std::fabs(ms.mean) < 5.0 * ms.se);
}
