// Compares the serial reference path against the OpenMP path on the two
// realization-parallel kernels that dominate the acceptance suite: the psi
// covariance Monte Carlo and a coupled Burgers ensemble. The parallel run
// must reproduce the serial results bit-exactly (per-realization outputs go
// to private slots; reductions happen afterwards in index order).
//
// Usage: bench_parallel [realizations] [steps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "sburg/burgers.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"
#include "sburg/parallel.hpp"

using namespace sburg;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::vector<double> psi_kernel(const PeriodicGrid& g, const SampledMollifier& rho,
                               int realizations, int steps, int threads) {
    std::vector<double> out(realizations);
    parallel_for(realizations, threads, [&](std::size_t r) {
        NoisePath noise(42, 1e-3, steps, g, r);
        PsiEvolver psi(g, rho);
        std::vector<double> dW(g.n);
        for (int s = 0; s < steps; ++s) {
            noise.row(s, dW);
            psi.step(dW, 1e-3);
        }
        double acc = 0.0;
        for (double x : psi.psi()) acc += x * x;
        out[r] = acc;
    });
    return out;
}

std::vector<double> burgers_kernel(const PeriodicGrid& g, const SampledMollifier& rho,
                                   int realizations, int steps, int threads) {
    std::vector<double> u0(g.n), u1(g.n);
    for (int j = 0; j < g.n; ++j) {
        u0[j] = std::sin(2.0 * 3.14159265358979323846 * g.x(j) / g.length);
        u1[j] = u0[j] + 0.5;
    }
    SchemeConfig cfg;
    std::vector<double> out(realizations);
    parallel_for(realizations, threads, [&](std::size_t r) {
        BurgersEnsemble ens({u0, u1}, g, rho);
        NoisePath noise(43, cfg.dt, steps, g, r);
        std::vector<double> dW(g.n);
        for (int s = 0; s < steps; ++s) {
            noise.row(s, dW);
            ens.step(dW, cfg);
        }
        out[r] = compare(ens, 0, 1).l1;
    });
    return out;
}

template <typename Kernel>
int compare_paths(const char* name, Kernel&& kernel) {
    const int threads = hardware_threads();
    const double t0 = now_ms();
    const auto serial = kernel(1);
    const double t1 = now_ms();
    const auto parallel = kernel(threads);
    const double t2 = now_ms();
    const bool identical =
        serial.size() == parallel.size() &&
        std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(double)) == 0;
    std::printf("%-18s serial %8.1f ms | %d threads %8.1f ms | speedup %.2fx | bit-identical: %s\n",
                name, t1 - t0, threads, t2 - t1, (t1 - t0) / (t2 - t1),
                identical ? "yes" : "NO");
    return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const int realizations = argc > 1 ? std::atoi(argv[1]) : 64;
    const int steps = argc > 2 ? std::atoi(argv[2]) : 500;
    const auto g = PeriodicGrid::make(16.0, 512);
    const auto rho = build_mollifier(MollifierKind::gaussian, 0.5, g);

    int rc = 0;
    rc |= compare_paths("psi ensemble", [&](int th) {
        return psi_kernel(g, rho, realizations, steps, th);
    });
    rc |= compare_paths("burgers ensemble", [&](int th) {
        return burgers_kernel(g, rho, realizations, steps, th);
    });
    return rc;
}
