#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/rng.hpp"

namespace sburg {

struct PolymerConfig {
    int paths = 512;                  // M
    double dt = 1e-3;
    double t_max = 2.0;
    double resample_threshold = 0.5;  // resample when ESS < threshold * M
};

/// Sequential-importance-resampling ensemble for the partition function
///   Z_t = E exp(-int_0^t dV(s, X(s)) - (t/2) rho*rho(0)),
/// paths started at the origin. log Z is accumulated across resampling
/// epochs, so `log_z()` is valid at any time.
class PolymerEnsemble {
public:
    PolymerEnsemble(int paths, std::uint64_t seed, std::uint64_t stream);

    /// One step: Ito weight update at the current positions, Brownian move,
    /// then systematic resampling if the effective sample size has collapsed.
    void advance(std::span<const double> dV, double dt, const SampledMollifier& rho,
                 double resample_threshold);

    double t() const { return t_; }
    int paths() const { return static_cast<int>(positions_.size()); }
    double log_z() const;
    double ess() const;
    double ess_min() const { return ess_min_; }
    int resample_count() const { return resamples_; }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& log_weights() const { return log_weights_; }
    /// Normalized weights (sum to 1).
    std::vector<double> normalized_weights() const;

    void resample_now();  // exposed for tests

private:
    std::vector<double> positions_, log_weights_;
    double t_ = 0.0;
    double log_z_acc_ = 0.0;
    double ess_min_;
    int resamples_ = 0;
    RngStream rng_;
};

/// Polymer-measure pair average of rho*rho(X - X~) across two independent
/// ensembles sharing the same disorder; at t = 0 this is exactly rho*rho(0).
double polymer_overlap(const PolymerEnsemble& a, const PolymerEnsemble& b,
                       const SampledMollifier& rho);

/// Linear interpolation of a grid field at a (wrapped) position.
double interp_periodic(std::span<const double> field, const PeriodicGrid& g, double x);

struct GammaCurve {
    std::vector<double> times;
    std::vector<double> gamma, se;              // E(-log Z_t) over noise realizations
    std::vector<double> gamma_prime, se_prime;  // overlap estimator of gamma'
    std::vector<double> gamma_small_m;          // companion run at M/2 paths (bias check)
    double ess_min = 0.0;
    int realizations = 0;
    // per-realization samples [realization][time], for difference statistics
    std::vector<std::vector<double>> gamma_samples;
    std::vector<std::vector<double>> overlap_samples;
};

/// Runs `realizations` independent noise realizations; each carries one main
/// ensemble (gamma), an independent twin (overlap), and a half-size ensemble
/// whose gamma curve monitors the finite-M bias of -log of an average.
GammaCurve estimate_gamma(const PeriodicGrid& grid, const SampledMollifier& rho,
                          const PolymerConfig& cfg, int realizations,
                          std::span<const double> snapshot_times, std::uint64_t seed,
                          std::uint64_t stream_base, int threads);

}  // namespace sburg
