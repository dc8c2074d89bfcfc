#include "sburg/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sburg/noise.hpp"
#include "sburg/parallel.hpp"
#include "sburg/stats.hpp"

namespace sburg {

double interp_periodic(std::span<const double> field, const PeriodicGrid& g, double x) {
    double pos = std::fmod(x, g.length);
    if (pos < 0.0) pos += g.length;
    const double s = pos / g.dx;
    int j0 = static_cast<int>(s);
    if (j0 >= g.n) j0 -= g.n;
    const int j1 = (j0 + 1) % g.n;
    const double frac = s - std::floor(s);
    return (1.0 - frac) * field[j0] + frac * field[j1];
}

PolymerEnsemble::PolymerEnsemble(int paths, std::uint64_t seed, std::uint64_t stream)
    : positions_(paths, 0.0),
      log_weights_(paths, 0.0),
      ess_min_(static_cast<double>(paths)),
      rng_(seed, stream) {
    if (paths < 2) throw std::invalid_argument("polymer: need at least 2 paths");
}

double PolymerEnsemble::ess() const {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights_) mx = std::max(mx, lw);
    double s1 = 0.0, s2 = 0.0;
    for (double lw : log_weights_) {
        const double w = std::exp(lw - mx);
        s1 += w;
        s2 += w * w;
    }
    return s1 * s1 / s2;
}

double PolymerEnsemble::log_z() const {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights_) mx = std::max(mx, lw);
    double s = 0.0;
    for (double lw : log_weights_) s += std::exp(lw - mx);
    return log_z_acc_ + mx + std::log(s / paths());
}

std::vector<double> PolymerEnsemble::normalized_weights() const {
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights_) mx = std::max(mx, lw);
    std::vector<double> w(log_weights_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(log_weights_[i] - mx);
        s += w[i];
    }
    for (double& x : w) x /= s;
    return w;
}

void PolymerEnsemble::resample_now() {
    const int m = paths();
    // Fold the current epoch's average weight into the running log Z.
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights_) mx = std::max(mx, lw);
    double s = 0.0;
    for (double lw : log_weights_) s += std::exp(lw - mx);
    log_z_acc_ += mx + std::log(s / m);

    const auto w = normalized_weights();
    std::vector<double> cum(m);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        acc += w[i];
        cum[i] = acc;
    }
    cum[m - 1] = 1.0;
    const double u0 = rng_.next_uniform() / m;
    std::vector<double> newpos(m);
    int idx = 0;
    for (int j = 0; j < m; ++j) {
        const double target = u0 + static_cast<double>(j) / m;
        while (cum[idx] < target) ++idx;
        newpos[j] = positions_[idx];
    }
    positions_ = std::move(newpos);
    std::fill(log_weights_.begin(), log_weights_.end(), 0.0);
    ++resamples_;
}

void PolymerEnsemble::advance(std::span<const double> dV, double dt, const SampledMollifier& rho,
                              double resample_threshold) {
    const PeriodicGrid& g = rho.grid;
    const double ito = 0.5 * dt * rho.selfconv[0];
    const double sq = std::sqrt(dt);
    const int m = paths();
    for (int i = 0; i < m; ++i) {
        // Ito reading: the weight sees the field at the pre-move position.
        log_weights_[i] -= interp_periodic(dV, g, positions_[i]) + ito;
        double x = positions_[i] + sq * rng_.next_normal();
        x = std::fmod(x, g.length);
        if (x < 0.0) x += g.length;
        positions_[i] = x;
    }
    t_ += dt;
    const double e = ess();
    ess_min_ = std::min(ess_min_, e);
    if (e < resample_threshold * m) resample_now();
}

double polymer_overlap(const PolymerEnsemble& a, const PolymerEnsemble& b,
                       const SampledMollifier& rho) {
    const auto wa = a.normalized_weights();
    const auto wb = b.normalized_weights();
    const auto& xa = a.positions();
    const auto& xb = b.positions();
    double s = 0.0;
    for (std::size_t i = 0; i < wa.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < wb.size(); ++j)
            row += wb[j] * rho.selfconv_at(xa[i] - xb[j]);
        s += wa[i] * row;
    }
    return s;
}

GammaCurve estimate_gamma(const PeriodicGrid& grid, const SampledMollifier& rho,
                          const PolymerConfig& cfg, int realizations,
                          std::span<const double> snapshot_times, std::uint64_t seed,
                          std::uint64_t stream_base, int threads) {
    if (realizations < 2) throw std::invalid_argument("estimate_gamma: need >= 2 realizations");
    if (cfg.paths < 100) throw std::invalid_argument("estimate_gamma: need >= 100 paths");
    const std::uint64_t total_steps =
        static_cast<std::uint64_t>(std::llround(cfg.t_max / cfg.dt));
    if (std::fabs(total_steps * cfg.dt - cfg.t_max) > 1e-9 * std::max(1.0, cfg.t_max))
        throw std::invalid_argument("estimate_gamma: dt must divide t_max");

    std::vector<std::uint64_t> snap_steps;
    for (double t : snapshot_times)
        snap_steps.push_back(static_cast<std::uint64_t>(std::floor(t / cfg.dt + 1e-9)));

    const std::size_t T = snap_steps.size();
    GammaCurve curve;
    curve.realizations = realizations;
    for (double t : snapshot_times) curve.times.push_back(t);
    curve.gamma_samples.assign(realizations, std::vector<double>(T, 0.0));
    curve.overlap_samples.assign(realizations, std::vector<double>(T, 0.0));
    std::vector<std::vector<double>> small_samples(realizations, std::vector<double>(T, 0.0));
    std::vector<double> ess_mins(realizations, 0.0);

    // Stream layout per realization r: noise at stream_base+3r, inner path
    // ensembles at +3r+1 and +3r+2; the half-size bias ensemble gets the
    // main stream with a high tag bit set.
    parallel_for(realizations, threads, [&](std::size_t r) {
        NoisePath noise(seed, cfg.dt, std::max<std::uint64_t>(total_steps, 1), grid,
                        stream_base + 3 * r);
        PolymerEnsemble main(cfg.paths, seed, stream_base + 3 * r + 1);
        PolymerEnsemble twin(cfg.paths, seed, stream_base + 3 * r + 2);
        PolymerEnsemble small(cfg.paths / 2, seed, (stream_base + 3 * r + 1) | (1ull << 62));
        std::vector<double> dW(grid.n), dV(grid.n);

        auto record = [&](std::uint64_t step) {
            for (std::size_t i = 0; i < T; ++i) {
                if (snap_steps[i] == step) {
                    curve.gamma_samples[r][i] = -main.log_z();
                    small_samples[r][i] = -small.log_z();
                    curve.overlap_samples[r][i] = 0.5 * polymer_overlap(main, twin, rho);
                }
            }
        };
        record(0);
        for (std::uint64_t s = 0; s < total_steps; ++s) {
            noise.row(s, dW);
            smooth_increment(dW, rho, dV);
            main.advance(dV, cfg.dt, rho, cfg.resample_threshold);
            twin.advance(dV, cfg.dt, rho, cfg.resample_threshold);
            small.advance(dV, cfg.dt, rho, cfg.resample_threshold);
            record(s + 1);
        }
        ess_mins[r] = std::min(main.ess_min(), twin.ess_min());
    });

    curve.ess_min = *std::min_element(ess_mins.begin(), ess_mins.end());
    for (std::size_t i = 0; i < T; ++i) {
        std::vector<double> g(realizations), o(realizations), sm(realizations);
        for (int r = 0; r < realizations; ++r) {
            g[r] = curve.gamma_samples[r][i];
            o[r] = curve.overlap_samples[r][i];
            sm[r] = small_samples[r][i];
        }
        const auto gs = mean_se(g);
        const auto os = mean_se(o);
        curve.gamma.push_back(gs.mean);
        curve.se.push_back(gs.se);
        curve.gamma_prime.push_back(os.mean);
        curve.se_prime.push_back(os.se);
        curve.gamma_small_m.push_back(mean_se(sm).mean);
    }
    return curve;
}

}  // namespace sburg
