#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/noise.hpp"

namespace sburg {

enum class FluxKind { engquist_osher, lax_friedrichs };

FluxKind flux_kind_from_string(const std::string& s);

struct SchemeConfig {
    double dt = 1e-3;
    FluxKind flux = FluxKind::engquist_osher;
    double cfl_safety = 0.9;
};

class CflViolation : public std::runtime_error {
public:
    CflViolation(double t, double amax, double limit)
        : std::runtime_error("CFL violation at t=" + std::to_string(t) +
                             ": dt*max|u+psi|/dx = " + std::to_string(amax) + " > " +
                             std::to_string(limit) + "; reduce dt (e.g. halve it)"),
          t_fail(t),
          cfl_value(amax),
          cfl_limit(limit) {}
    double t_fail;
    double cfl_value;
    double cfl_limit;
};

/// N decoupled Burgers components driven by one shared noise, evolved through
/// the theta-reduction u_i = theta_i + psi. Transport uses a conservative
/// monotone flux on v = theta + psi, diffusion is implicit via a periodic
/// tridiagonal solve, and psi advances by the exponential-Euler rule. The
/// update map is monotone and mass-conserving, so comparison, L1-contraction,
/// and conservation hold at machine precision step by step.
class BurgersEnsemble {
public:
    BurgersEnsemble(std::vector<std::vector<double>> initials, const PeriodicGrid& grid,
                    const SampledMollifier& rho, bool track_omega = false);

    int components() const { return static_cast<int>(thetas_.size()); }
    double t() const { return t_; }
    const PeriodicGrid& grid() const { return grid_; }
    const SampledMollifier& mollifier() const { return *rho_; }

    /// Advances every component with the same white-noise row dW (transport
    /// and diffusion first, then the noise update of psi). Throws
    /// CflViolation, leaving the state untouched, if the advective CFL bound
    /// fails.
    void step(std::span<const double> dW, const SchemeConfig& cfg);

    const std::vector<double>& theta(int i) const { return thetas_[i]; }
    const std::vector<double>& psi() const { return psi_.psi(); }
    const std::vector<double>& omega() const { return psi_.omega(); }
    const std::vector<double>& last_dV() const { return psi_.last_dV(); }
    std::vector<double> u(int i) const;

private:
    PeriodicGrid grid_;
    const SampledMollifier* rho_;
    std::vector<std::vector<double>> thetas_;
    PsiEvolver psi_;
    double t_ = 0.0;

    // periodic tridiagonal factorization of (I - dt/2 D2), cached per dt
    double cached_dt_ = -1.0;
    std::vector<double> tri_c_, tri_piv_, tri_z_;
    double tri_gamma_ = 0.0, tri_off_ = 0.0, tri_zfac_ = 0.0;
    std::vector<double> flux_, rhs_, vbuf_, ybuf_;

    void prepare_tridiag(double dt);
    void solve_tridiag(std::vector<double>& x);
};

struct DifferenceDiagnostics {
    std::vector<double> eta;  // u_i - u_j
    std::vector<double> xi;   // u_i + u_j
    double l1 = 0.0;
    double pos_part_l1 = 0.0;
    double crossing_sum = 0.0;  // sum over zeros y of |eta'(y)|, secant slopes
};

DifferenceDiagnostics compare(const BurgersEnsemble& ens, int i, int j);

/// Crossing functional of a difference field alone (used on snapshots).
double crossing_sum_of(std::span<const double> eta, const PeriodicGrid& g);

struct RunOptions {
    bool noise_off = false;
};

struct Trajectory {
    PeriodicGrid grid;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<double> times;
    // u[snapshot][component][cell]
    std::vector<std::vector<std::vector<double>>> u;
};

/// Deterministic given (initials, noise, cfg); snapshot times are rounded
/// down to step multiples. CFL failures propagate with the failing time.
Trajectory run(const std::vector<std::vector<double>>& initials, const NoisePath& noise,
               const SchemeConfig& cfg, const SampledMollifier& rho,
               std::span<const double> snapshot_times, const RunOptions& opts = {});

enum class DissipationFunctional { abs, pos_part };

struct DissipationReport {
    std::vector<double> times;
    std::vector<double> slack;  // must stay >= -tolerance
    double min_slack = 0.0;
    double initial_mass = 0.0;  // int F(eta(0))
    bool ok = true;
};

/// Discrete audit of the crossing-dissipation inequality
///   int F(eta(t)) + (c1/4) int_0^t sum_{eta=0} |eta'| ds <= int F(eta(0)),
/// with c1 = 2 for F = |.| and c1 = 1 for F = (.)^+, using trapezoid
/// quadrature of the crossing functional over the stored snapshots.
DissipationReport f_dissipation_audit(const Trajectory& traj, int i, int j,
                                      DissipationFunctional F, double tolerance);

}  // namespace sburg
