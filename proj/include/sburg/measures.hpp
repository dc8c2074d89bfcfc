#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sburg/burgers.hpp"
#include "sburg/grid.hpp"
#include "sburg/mollifier.hpp"
#include "sburg/stats.hpp"
#include "sburg/weights.hpp"

namespace sburg {

/// Everything needed to launch coupled realizations: realization r uses noise
/// stream `stream_base + r`; auxiliary draws (random snapshot times, random
/// evaluation cells) use the same stream with the top bit set.
struct EvolutionSpec {
    PeriodicGrid grid;
    SampledMollifier rho;
    SchemeConfig scheme;
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;
    bool noise_off = false;
};

constexpr std::uint64_t kAuxStreamBit = 1ull << 63;

/// Empirical ensemble of field snapshots representing a law on state space.
struct MeasureEstimate {
    PeriodicGrid grid;
    std::vector<std::vector<double>> snapshots;
    double t0 = 0.0, t1 = 0.0;
    std::uint64_t seed = 0, stream_base = 0;
};

/// Krylov-Bogoliubov style sampling: one snapshot per realization at an
/// independent Uniform(t0, T) time (rounded down to a step).
MeasureEstimate kb_average(const EvolutionSpec& spec, const std::vector<double>& initial,
                           double t0, double T, int realizations, int threads);

struct WassersteinCurve {
    std::vector<double> times;
    std::vector<double> dhat, se;  // coupled Y_G upper bound on d_{G,1}
    int monotonicity_violations = 0;
    int realizations = 0;
};

/// Shared-noise coupling bound: dhat(t) = E ||u_i(t) - u_j(t)||_{Y_G}. The
/// per-realization curve must be nonincreasing (discrete L1-contraction with
/// the period-aggregated constant weight); violations beyond rounding are
/// counted.
WassersteinCurve coupled_wasserstein_bound(const EvolutionSpec& spec,
                                           const std::vector<double>& init_i,
                                           const std::vector<double>& init_j,
                                           std::span<const double> snapshot_times,
                                           int realizations, int threads);

struct OrderingReport {
    double sign_constant_fraction = 0.0;
    double min_gap = 0.0;  // min pointwise |eta| among sign-constant realizations
    int realizations = 0;
};

/// Fraction of realizations in which u1 - u2 has constant sign across the
/// grid after the burn-in.
OrderingReport ordering_audit(const EvolutionSpec& spec, const std::vector<double>& init1,
                              const std::vector<double>& init2, double burn_in,
                              int realizations, int threads);

struct ShearStat {
    std::string name;
    double base = 0.0, base_se = 0.0;
    double sheared = 0.0, sheared_se = 0.0;
    double zscore = 0.0;
};

struct ShearReport {
    std::vector<ShearStat> stats;
    double max_abs_z = 0.0;
};

/// Compares moment statistics (mean, variance, lag covariances) of
/// u_c(T,x) = u(T, x+cT) - c started from v+c against the run started from v,
/// using independent noise for the two laws.
ShearReport shear_audit(const EvolutionSpec& spec, const std::vector<double>& v, double c,
                        double T, std::span<const double> lags, int realizations, int threads);

struct MomentAudit {
    // (i) Var u(X) <= ||rho||^2 within 5 SE
    double var_u = 0.0, var_u_se = 0.0, var_bound = 0.0;
    // (ii) E (d/dx u)(X)^2 == ||rho'||^2 within 5 SE
    double grad_sq = 0.0, grad_sq_se = 0.0, grad_bound = 0.0;
    // (iii) E v(X)^2 - [||rho||^2 - (2/T) E(h(T,X)-h(0,X))], with SE
    double eust_gap = 0.0, eust_gap_se = 0.0;
    // equilibration certificate
    double drift_q3 = 0.0, drift_q4 = 0.0, drift_change_se = 0.0;
    bool equilibration_certified = false;
    bool vacuous = false;  // noise off: all moments are 0 and (i) means nothing
    int realizations = 0;
};

/// Equilibrates from `initial` (must have zero mean; heights are tracked from
/// the start), then checks the stationary moment identities over a window of
/// length T_window after the burn-in. The equilibration certificate compares
/// the E h drift over the last two quarters of the burn-in.
MomentAudit stationary_moment_audit(const EvolutionSpec& spec, const std::vector<double>& initial,
                                    double burn_in, double T_window, int realizations,
                                    int threads);

/// Initial datum split as v = v_per + v_int + v_z; v_int and v_z must live in
/// a window of length <= L/4 around the torus midpoint, emulating
/// integrability and decay at infinity within one period.
struct BasinDecomposition {
    PeriodicGrid grid;
    std::vector<double> v_per, v_int, v_z;
    double target_mean = 0.0;  // period average of v_per
    double period = 0.0;       // period of v_per (must divide L)

    std::vector<double> total() const;
    void validate() const;
};

struct SandwichResult {
    std::vector<double> v_minus, v_plus;
    int K = 0;
    double mean_minus = 0.0, mean_plus = 0.0;
};

/// Torus adaptation of the periodic sandwich: w is the suffix-max envelope of
/// |v_z| away from the midpoint, K the smallest integer (compatible with the
/// torus) such that both ||v_int||_L1 and int w are below (eps/2) K L_per,
/// and v_pm = v_per +- w +- sup_m |v_int(. + m K L_per)|.
SandwichResult sandwich(const BasinDecomposition& decomp, double eps);

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> dist_to_reference, dist_se;  // E||u - u_a||_{Y_G}
    std::vector<double> ceiling, ceiling_se;         // E||u_+ - u_-||_{Y_G}
    double initial_dist = 0.0;
    double final_dist = 0.0;
    double ceiling_identity_gap = 0.0;  // |ceiling - (pi/2)(a_+ - a_-)|
    int sandwich_violations = 0;
    int monotonicity_violations = 0;
    int realizations = 0;
    int K = 0;
};

/// Evolves (v_-, v, v_+, a) under shared noise: the pointwise sandwich and the
/// per-realization decay of ||u - u_a||_{Y_G} are exact; the Y_G gap of the
/// ordered pair equals (pi/2)(a_+ - a_-) identically by conservation.
StabilityReport stability_experiment(const EvolutionSpec& spec, const BasinDecomposition& decomp,
                                     double eps, double T, std::span<const double> snapshot_times,
                                     int realizations, int threads);

}  // namespace sburg
