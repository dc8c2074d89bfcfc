#pragma once

#include <span>
#include <vector>

#include "sburg/burgers.hpp"
#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"

namespace sburg {

/// State of the multiplicative stochastic heat equation, strictly positive.
struct SheState {
    Field phi;
    double t = 0.0;
};

/// Exponential (Feynman-Kac) splitting step, Ito convention:
///   phi <- Heat_dt[ phi * exp(-dV - (dt/2) rho2_at_0) ].
/// rho2_at_0 is rho*rho(0) = ||rho||^2 of the mollifier dressing dV (pass 0 to
/// disable the noise entirely, which reduces the step to pure heat flow); it
/// makes the exponential weight a mean-one multiplier for Gaussian dV, so
/// E[phi] is conserved exactly. `drift_a` carries the spatial mean of the
/// Burgers datum, which cannot live inside a periodic phi: with u = a + u0 the
/// periodic factor obeys
///   d phi = 1/2 (phi_xx - 2 a phi_x + a^2 phi) dt - phi dV,
/// handled here by the Fourier multiplier exp(dt(-k^2/2 - iak + a^2/2)).
SheState she_step(const SheState& s, std::span<const double> dV, double dt, double rho2_at_0,
                  double drift_a = 0.0);

/// KPZ height and its anchoring mollifier zeta (nonnegative, unit integral);
/// at t = 0 the zeta-average of h vanishes.
struct KpzState {
    std::vector<double> h;
    double t = 0.0;
};

/// Normalized Gaussian anchor of width L/16 sampled on the grid.
std::vector<double> default_zeta(const PeriodicGrid& g);

struct HeightSeries {
    std::vector<double> times;
    std::vector<KpzState> states;
    std::vector<std::vector<double>> u;  // Burgers field at the same snapshots
};

/// Runs the Burgers evolution for a single mean-zero component and assembles
/// the height
///   h(t,x) = int zeta(y) int_y^x theta(t,.) dy
///            - 1/2 int_0^t int [theta zeta' + (theta+psi)^2 zeta]
///            + omega(t,x) + (t/2) ||rho||^2,
/// with omega the stochastic heat convolution (zero mode kept). The time
/// integral uses left-endpoint values, matching the Ito reading of the noise.
/// By construction d/dx h(t,.) equals u(t,.) to machine precision.
HeightSeries kpz_height_from_burgers(const std::vector<double>& u0, const NoisePath& noise,
                                     const SchemeConfig& cfg, const SampledMollifier& rho,
                                     std::span<const double> zeta,
                                     std::span<const double> snapshot_times,
                                     const RunOptions& opts = {});

struct LadderReport {
    std::vector<double> times;
    std::vector<double> rel_mismatch;  // ||u + phi_x/phi||_L1 / ||u||_L1
    double sup_mismatch = 0.0;
};

/// Evolves the Burgers stack and the SHE stack under the same noise path,
/// with phi(0) = exp(-h(0)) for the zeta-anchored antiderivative h(0) of
/// u(0) (the spatial mean of u(0) is excluded from phi and reinstated when
/// reconstructing u = a - phi_x/phi).
LadderReport ladder_consistency(const std::vector<double>& u0, const NoisePath& noise,
                                const SchemeConfig& cfg, const SampledMollifier& rho,
                                std::span<const double> zeta,
                                std::span<const double> snapshot_times,
                                const RunOptions& opts = {});

/// zeta-anchored antiderivative of a mean-zero field: H with H' = v and
/// int zeta H = 0.
std::vector<double> anchored_antiderivative(std::span<const double> v,
                                            std::span<const double> zeta,
                                            const PeriodicGrid& g);

}  // namespace sburg
