#include <doctest.h>

#include <cstring>
#include <vector>

#include "sburg/burgers.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"
#include "sburg/parallel.hpp"
#include "sburg/stats.hpp"

using namespace sburg;

TEST_CASE("parallel loop produces bit-identical results to the serial reference") {
    const auto g = PeriodicGrid::make(16.0, 128);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);
    SchemeConfig cfg;
    auto kernel = [&](int threads) {
        std::vector<double> out(24);
        parallel_for(out.size(), threads, [&](std::size_t r) {
            BurgersEnsemble ens({std::vector<double>(g.n, 0.0)}, g, rho);
            NoisePath noise(123, cfg.dt, 150, g, r);
            std::vector<double> dW(g.n);
            for (int s = 0; s < 150; ++s) {
                noise.row(s, dW);
                ens.step(dW, cfg);
            }
            out[r] = ens.u(0)[7];
        });
        return out;
    };
    const auto serial = kernel(1);
    const auto parallel = kernel(hardware_threads());
    CHECK(std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(double)) == 0);
}

TEST_CASE("exceptions from workers propagate") {
    CHECK_THROWS_AS(parallel_for(8, hardware_threads(),
                                 [&](std::size_t i) {
                                     if (i == 3) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("compensated summation is exact on an adversarial sequence") {
    std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(xs) == 2.0);
}
