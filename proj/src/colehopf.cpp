#include "sburg/colehopf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "sburg/fft.hpp"

namespace sburg {

SheState she_step(const SheState& s, std::span<const double> dV, double dt, double rho2_at_0,
                  double drift_a) {
    const PeriodicGrid& g = s.phi.grid;
    if (dV.size() != static_cast<std::size_t>(g.n))
        throw std::invalid_argument("she_step: grid mismatch");
    const double ito = 0.5 * dt * rho2_at_0;
    std::vector<double> staged(g.n);
    for (int j = 0; j < g.n; ++j) {
        staged[j] = s.phi[j] * std::exp(-dV[j] - ito);
        if (!std::isfinite(staged[j])) throw std::runtime_error("she_step: phi not finite");
    }
    const Spectral& sp = spectral_for(g);
    const auto& k = sp.wavenumbers();
    std::vector<std::complex<double>> hat(sp.fft().n_modes());
    sp.fft().forward(staged, hat.data());
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double damp = std::exp(dt * (-0.5 * k[j] * k[j] + 0.5 * drift_a * drift_a));
        hat[j] *= damp * std::exp(std::complex<double>(0.0, -drift_a * k[j] * dt));
    }
    hat.back() = std::real(hat.back()) *
                 std::exp(dt * (-0.5 * k.back() * k.back() + 0.5 * drift_a * drift_a)) *
                 std::cos(drift_a * k.back() * dt);
    SheState out{Field(g), s.t + dt};
    sp.fft().inverse(hat.data(), out.phi.v);
    return out;
}

std::vector<double> default_zeta(const PeriodicGrid& g) {
    const double sigma = g.length / 16.0;
    std::vector<double> z(g.n);
    double mass = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double r = g.wrap(g.x(j) - 0.5 * g.length);
        z[j] = std::exp(-0.5 * r * r / (sigma * sigma));
        mass += z[j];
    }
    for (double& v : z) v /= mass * g.dx;
    return z;
}

std::vector<double> anchored_antiderivative(std::span<const double> v,
                                            std::span<const double> zeta,
                                            const PeriodicGrid& g) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= g.n;
    std::vector<double> centered(v.begin(), v.end());
    for (double& x : centered) x -= mean;
    std::vector<double> H(g.n);
    spectral_for(g).antiderivative(centered, H);
    double anchor = 0.0;
    for (int j = 0; j < g.n; ++j) anchor += zeta[j] * H[j];
    anchor *= g.dx;
    for (double& x : H) x -= anchor;
    return H;
}

namespace {

struct KpzAccumulator {
    const PeriodicGrid& g;
    std::vector<double> zeta;
    std::vector<double> zeta_prime;
    double I_acc = 0.0;

    KpzAccumulator(const PeriodicGrid& grid, std::span<const double> z)
        : g(grid), zeta(z.begin(), z.end()), zeta_prime(grid.n) {
        spectral_for(grid).ddx(zeta, zeta_prime);
    }

    void before_step(std::span<const double> theta, std::span<const double> psi, double dt) {
        double s = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const double v = theta[j] + psi[j];
            s += theta[j] * zeta_prime[j] + v * v * zeta[j];
        }
        I_acc += dt * s * g.dx;
    }

    std::vector<double> assemble(std::span<const double> theta, std::span<const double> omega,
                                 double t, double rho2_at_0) const {
        std::vector<double> H(g.n);
        // theta keeps mean zero up to rounding; remove the residual before
        // inverting the derivative.
        std::vector<double> th(theta.begin(), theta.end());
        double mean = 0.0;
        for (double x : th) mean += x;
        mean /= g.n;
        for (double& x : th) x -= mean;
        spectral_for(g).antiderivative(th, H);
        double anchor = 0.0;
        for (int j = 0; j < g.n; ++j) anchor += zeta[j] * H[j];
        anchor *= g.dx;
        std::vector<double> h(g.n);
        for (int j = 0; j < g.n; ++j)
            h[j] = H[j] - anchor - 0.5 * I_acc + omega[j] + 0.5 * t * rho2_at_0;
        return h;
    }
};

std::vector<std::uint64_t> snapshot_steps(std::span<const double> times, double dt) {
    std::vector<std::uint64_t> steps;
    for (double t : times) steps.push_back(static_cast<std::uint64_t>(std::floor(t / dt + 1e-9)));
    return steps;
}

}  // namespace

HeightSeries kpz_height_from_burgers(const std::vector<double>& u0, const NoisePath& noise,
                                     const SchemeConfig& cfg, const SampledMollifier& rho,
                                     std::span<const double> zeta,
                                     std::span<const double> snapshot_times,
                                     const RunOptions& opts) {
    const PeriodicGrid& g = noise.grid();
    double mean = 0.0;
    for (double x : u0) mean += x;
    mean /= g.n;
    if (std::fabs(mean) > 1e-8)
        throw std::invalid_argument(
            "kpz_height_from_burgers: u0 must have (numerically) zero mean; track a nonzero mean "
            "separately");

    BurgersEnsemble ens({u0}, g, rho, /*track_omega=*/true);
    KpzAccumulator acc(g, zeta);
    const auto steps = snapshot_steps(snapshot_times, cfg.dt);
    const std::uint64_t last = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());

    HeightSeries out;
    const double rho2_0 = opts.noise_off ? 0.0 : rho.selfconv[0];
    auto snapshot = [&](std::uint64_t s) {
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i] == s) {
                const double t = s * cfg.dt;
                out.times.push_back(t);
                out.states.push_back({acc.assemble(ens.theta(0), ens.omega(), t, rho2_0), t});
                out.u.push_back(ens.u(0));
                break;
            }
        }
    };

    std::vector<double> dW(g.n, 0.0);
    snapshot(0);
    for (std::uint64_t s = 0; s < last; ++s) {
        acc.before_step(ens.theta(0), ens.psi(), cfg.dt);
        if (!opts.noise_off) noise.row(s, dW);
        ens.step(dW, cfg);
        snapshot(s + 1);
    }
    return out;
}

LadderReport ladder_consistency(const std::vector<double>& u0, const NoisePath& noise,
                                const SchemeConfig& cfg, const SampledMollifier& rho,
                                std::span<const double> zeta,
                                std::span<const double> snapshot_times, const RunOptions& opts) {
    const PeriodicGrid& g = noise.grid();
    double a = 0.0;
    for (double x : u0) a += x;
    a /= g.n;
    std::vector<double> u0_centered(u0);
    for (double& x : u0_centered) x -= a;

    const auto h0 = anchored_antiderivative(u0_centered, zeta, g);
    SheState she{Field(g), 0.0};
    for (int j = 0; j < g.n; ++j) she.phi[j] = std::exp(-h0[j]);

    BurgersEnsemble ens({u0}, g, rho);
    const Spectral& sp = spectral_for(g);

    const auto steps = snapshot_steps(snapshot_times, cfg.dt);
    const std::uint64_t last = steps.empty() ? 0 : *std::max_element(steps.begin(), steps.end());

    LadderReport rep;
    std::vector<double> phix(g.n);
    auto snapshot = [&](std::uint64_t s) {
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i] != s) continue;
            for (int j = 0; j < g.n; ++j)
                if (!(she.phi[j] > 0.0))
                    throw std::runtime_error("ladder_consistency: phi lost positivity");
            sp.ddx(she.phi.v, phix);
            const auto u = ens.u(0);
            double err = 0.0, mass = 0.0;
            for (int j = 0; j < g.n; ++j) {
                const double u_rec = a - phix[j] / she.phi[j];
                err += std::fabs(u[j] - u_rec) * g.dx;
                mass += std::fabs(u[j]) * g.dx;
            }
            rep.times.push_back(s * cfg.dt);
            rep.rel_mismatch.push_back(mass > 0.0 ? err / mass : err);
            break;
        }
    };

    std::vector<double> dW(g.n, 0.0), zero_dV(g.n, 0.0);
    const double rho2_0 = opts.noise_off ? 0.0 : rho.selfconv[0];
    snapshot(0);
    for (std::uint64_t s = 0; s < last; ++s) {
        if (!opts.noise_off) noise.row(s, dW);
        ens.step(dW, cfg);
        she = she_step(she, opts.noise_off ? std::span<const double>(zero_dV) : ens.last_dV(),
                       cfg.dt, rho2_0, a);
        snapshot(s + 1);
    }
    rep.sup_mismatch = 0.0;
    for (double m : rep.rel_mismatch) rep.sup_mismatch = std::max(rep.sup_mismatch, m);
    return rep;
}

}  // namespace sburg
