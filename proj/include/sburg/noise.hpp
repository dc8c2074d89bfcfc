#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/rng.hpp"

namespace sburg {

/// One realization of the white-noise time increments dW on the grid,
/// addressed by (master seed, stream id). Rows are regenerated on demand from
/// the counter-based stream unless the path has been materialized (e.g. after
/// loading from disk), so arbitrarily long paths need no storage. Increment
/// (s, k) is N(0, dt/dx), all independent.
class NoisePath {
public:
    NoisePath(std::uint64_t seed, double dt, std::uint64_t steps, const PeriodicGrid& grid,
              std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    double dt() const { return dt_; }
    std::uint64_t steps() const { return steps_; }
    const PeriodicGrid& grid() const { return grid_; }

    void row(std::uint64_t step, std::span<double> out) const;
    std::vector<double> row(std::uint64_t step) const;

    /// Generates and stores all increments (needed before save()).
    void materialize();
    bool materialized() const { return storage_.has_value(); }

    void save(const std::filesystem::path& file) const;
    static NoisePath load(const std::filesystem::path& file, const PeriodicGrid& grid);
    /// Wraps precomputed increments (e.g. aggregated from a finer path).
    static NoisePath materialized(std::uint64_t seed, double dt, std::uint64_t steps,
                                  const PeriodicGrid& grid, std::uint64_t stream_id,
                                  std::vector<double> data);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    double dt_;
    std::uint64_t steps_;
    PeriodicGrid grid_;
    RngStream rng_;
    std::optional<std::vector<double>> storage_;
};

NoisePath sample_noise_path(std::uint64_t seed, double dt, std::uint64_t steps,
                            const PeriodicGrid& grid, std::uint64_t rng_stream_id);

/// dV = dx * (rho convolved with dW), the smoothed noise increment.
void smooth_increment(std::span<const double> w, const SampledMollifier& rho,
                      std::span<double> out);
std::vector<double> smooth_increment(std::span<const double> w, const SampledMollifier& rho);

/// Solution of the noise-forced heat equation d psi = 1/2 psi_xx dt + d(dx V)
/// started from 0; its zero Fourier mode vanishes identically.
struct LinearizedField {
    Field psi;
    double t = 0.0;
};

/// Exponential-Euler update: per mode, psi_k <- e^{-k^2 dt/2} (psi_k + ik dV_k).
LinearizedField psi_step(const LinearizedField& field, std::span<const double> dV, double dt);

/// Analytic fixed-time covariance curve (rho*rho - G_{2t} * rho*rho)(r) on the
/// grid, computed with the same Fourier multipliers the evolution uses. On the
/// torus the zero mode of psi vanishes, so the curve carries no zero mode.
std::vector<double> psi_stationary_covariance(const SampledMollifier& rho, double t,
                                              const PeriodicGrid& grid);

/// Keeps psi-hat between steps so an evolution costs one forward and one
/// inverse transform per step. Also accumulates, on request, the stochastic
/// convolution omega(t) = int_0^t G_{t-s} * dV (same update without the ik
/// factor; the zero mode accumulates the spatial mean of dV).
class PsiEvolver {
public:
    PsiEvolver(const PeriodicGrid& grid, const SampledMollifier& rho, bool track_omega = false);

    /// Consumes a row of white-noise increments; returns psi at the new time.
    void step(std::span<const double> dW, double dt);

    const std::vector<double>& psi() const { return psi_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& last_dV() const { return dV_; }
    double t() const { return t_; }

private:
    const PeriodicGrid grid_;
    const SampledMollifier* rho_;
    bool track_omega_;
    double t_ = 0.0;
    std::vector<std::complex<double>> psi_hat_, omega_hat_, scratch_hat_, rho_hat_;
    std::vector<double> psi_, omega_, dV_;
};

}  // namespace sburg
