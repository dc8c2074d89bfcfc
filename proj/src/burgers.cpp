#include "sburg/burgers.hpp"

#include <algorithm>
#include <cmath>

namespace sburg {

FluxKind flux_kind_from_string(const std::string& s) {
    if (s == "engquist_osher") return FluxKind::engquist_osher;
    if (s == "lax_friedrichs") return FluxKind::lax_friedrichs;
    throw std::invalid_argument("scheme: unknown flux '" + s + "'");
}

BurgersEnsemble::BurgersEnsemble(std::vector<std::vector<double>> initials,
                                 const PeriodicGrid& grid, const SampledMollifier& rho,
                                 bool track_omega)
    : grid_(grid), rho_(&rho), thetas_(std::move(initials)), psi_(grid, rho, track_omega) {
    require_same_grid(grid, rho.grid, "BurgersEnsemble");
    if (thetas_.empty()) throw std::invalid_argument("ensemble: need at least one component");
    for (const auto& th : thetas_) {
        if (static_cast<int>(th.size()) != grid.n)
            throw std::invalid_argument("ensemble: initial data size does not match grid");
        for (double v : th)
            if (!std::isfinite(v)) throw std::invalid_argument("ensemble: initial data not finite");
    }
    flux_.resize(grid.n);
    rhs_.resize(grid.n);
    vbuf_.resize(grid.n);
    ybuf_.resize(grid.n);
}

std::vector<double> BurgersEnsemble::u(int i) const {
    std::vector<double> out(thetas_[i]);
    const auto& p = psi_.psi();
    for (int j = 0; j < grid_.n; ++j) out[j] += p[j];
    return out;
}

void BurgersEnsemble::prepare_tridiag(double dt) {
    // M = I - (dt/2) D2 with D2 the periodic 3-point second difference:
    // diagonal 1 + 2 mu, off-diagonals -mu, corner entries -mu.
    // Cyclic reduction via Sherman-Morrison: M = T + u v^T with
    // u = (gamma, 0, ..., 0, -mu)^T, v = (1, 0, ..., 0, -mu/gamma)^T, where T
    // is tridiagonal with modified first/last diagonal entries.
    const int n = grid_.n;
    const double mu = 0.5 * dt / (grid_.dx * grid_.dx);
    const double diag = 1.0 + 2.0 * mu;
    const double off = -mu;
    tri_gamma_ = -diag;
    std::vector<double> b(n, diag);
    b[0] = diag - tri_gamma_;
    b[n - 1] = diag - off * off / tri_gamma_;

    // Thomas forward-elimination pivots and ratios for the modified T.
    tri_c_.assign(n, 0.0);
    tri_piv_.assign(n, 0.0);
    tri_piv_[0] = b[0];
    tri_c_[0] = off / tri_piv_[0];
    for (int j = 1; j < n; ++j) {
        tri_piv_[j] = b[j] - off * tri_c_[j - 1];
        tri_c_[j] = off / tri_piv_[j];
    }

    // z = T^{-1} u for the rank-one correction.
    std::vector<double> uvec(n, 0.0);
    uvec[0] = tri_gamma_;
    uvec[n - 1] = off;
    tri_z_ = uvec;
    // forward substitution
    tri_z_[0] = uvec[0] / tri_piv_[0];
    for (int j = 1; j < n; ++j) tri_z_[j] = (uvec[j] - off * tri_z_[j - 1]) / tri_piv_[j];
    for (int j = n - 2; j >= 0; --j) tri_z_[j] -= tri_c_[j] * tri_z_[j + 1];

    tri_off_ = off;
    tri_zfac_ = 1.0 + tri_z_[0] + (off / tri_gamma_) * tri_z_[n - 1];
    cached_dt_ = dt;
}

void BurgersEnsemble::solve_tridiag(std::vector<double>& x) {
    const int n = grid_.n;
    const double off = tri_off_;
    ybuf_[0] = x[0] / tri_piv_[0];
    for (int j = 1; j < n; ++j) ybuf_[j] = (x[j] - off * ybuf_[j - 1]) / tri_piv_[j];
    for (int j = n - 2; j >= 0; --j) ybuf_[j] -= tri_c_[j] * ybuf_[j + 1];
    const double fact = (ybuf_[0] + (off / tri_gamma_) * ybuf_[n - 1]) / tri_zfac_;
    for (int j = 0; j < n; ++j) x[j] = ybuf_[j] - fact * tri_z_[j];
}

namespace {
inline double eo_flux(double a, double b) {
    const double ap = std::max(a, 0.0);
    const double bm = std::min(b, 0.0);
    return 0.5 * (ap * ap + bm * bm);
}

inline double llf_flux(double a, double b) {
    const double alpha = std::max(std::fabs(a), std::fabs(b));
    return 0.25 * (a * a + b * b) - 0.5 * alpha * (b - a);
}
}  // namespace

void BurgersEnsemble::step(std::span<const double> dW, const SchemeConfig& cfg) {
    const int n = grid_.n;
    if (cfg.dt != cached_dt_) prepare_tridiag(cfg.dt);

    const auto& p = psi_.psi();
    double amax = 0.0;
    for (const auto& th : thetas_)
        for (int j = 0; j < n; ++j) amax = std::max(amax, std::fabs(th[j] + p[j]));
    if (cfg.dt * amax / grid_.dx > cfg.cfl_safety)
        throw CflViolation(t_, cfg.dt * amax / grid_.dx, cfg.cfl_safety);

    const double lam = cfg.dt / grid_.dx;
    for (auto& th : thetas_) {
        for (int j = 0; j < n; ++j) vbuf_[j] = th[j] + p[j];
        if (cfg.flux == FluxKind::engquist_osher) {
            for (int j = 0; j < n; ++j) flux_[j] = eo_flux(vbuf_[j], vbuf_[(j + 1) % n]);
        } else {
            for (int j = 0; j < n; ++j) flux_[j] = llf_flux(vbuf_[j], vbuf_[(j + 1) % n]);
        }
        for (int j = 0; j < n; ++j) {
            const double fl = flux_[(j + n - 1) % n];
            th[j] -= lam * (flux_[j] - fl);
        }
        solve_tridiag(th);
    }
    psi_.step(dW, cfg.dt);
    t_ += cfg.dt;
}

DifferenceDiagnostics compare(const BurgersEnsemble& ens, int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= ens.components() || j >= ens.components())
        throw std::invalid_argument("compare: need two distinct valid components");
    const PeriodicGrid& g = ens.grid();
    DifferenceDiagnostics d;
    d.eta.resize(g.n);
    d.xi.resize(g.n);
    const auto& ti = ens.theta(i);
    const auto& tj = ens.theta(j);
    const auto& p = ens.psi();
    for (int k = 0; k < g.n; ++k) {
        d.eta[k] = ti[k] - tj[k];  // psi cancels exactly in the difference
        d.xi[k] = ti[k] + tj[k] + 2.0 * p[k];
    }
    for (int k = 0; k < g.n; ++k) {
        d.l1 += std::fabs(d.eta[k]) * g.dx;
        d.pos_part_l1 += std::max(d.eta[k], 0.0) * g.dx;
    }
    d.crossing_sum = crossing_sum_of(d.eta, g);
    return d;
}

double crossing_sum_of(std::span<const double> eta, const PeriodicGrid& g) {
    const int n = g.n;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a = eta[j];
        const double b = eta[(j + 1) % n];
        if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
            total += std::fabs(b - a) / g.dx;
        } else if (a == 0.0) {
            const double prev = eta[(j + n - 1) % n];
            if ((prev > 0.0 && b < 0.0) || (prev < 0.0 && b > 0.0))
                total += std::fabs(b - prev) / (2.0 * g.dx);
        }
    }
    return total;
}

Trajectory run(const std::vector<std::vector<double>>& initials, const NoisePath& noise,
               const SchemeConfig& cfg, const SampledMollifier& rho,
               std::span<const double> snapshot_times, const RunOptions& opts) {
    const PeriodicGrid& g = noise.grid();
    BurgersEnsemble ens(initials, g, rho);
    Trajectory traj;
    traj.grid = g;
    traj.dt = cfg.dt;
    traj.seed = noise.seed();
    traj.stream = noise.stream();

    std::vector<std::uint64_t> snap_steps;
    for (double t : snapshot_times)
        snap_steps.push_back(static_cast<std::uint64_t>(std::floor(t / cfg.dt + 1e-9)));
    const std::uint64_t last =
        snap_steps.empty() ? 0 : *std::max_element(snap_steps.begin(), snap_steps.end());
    if (last > noise.steps() && !opts.noise_off)
        throw std::invalid_argument("run: noise path shorter than requested horizon");

    std::vector<double> dW(g.n, 0.0);
    auto maybe_snapshot = [&](std::uint64_t step_idx) {
        for (std::size_t si = 0; si < snap_steps.size(); ++si) {
            if (snap_steps[si] == step_idx) {
                traj.times.push_back(step_idx * cfg.dt);
                std::vector<std::vector<double>> comps;
                for (int c = 0; c < ens.components(); ++c) comps.push_back(ens.u(c));
                traj.u.push_back(std::move(comps));
                break;  // snapshot times are deduplicated by the caller
            }
        }
    };

    maybe_snapshot(0);
    for (std::uint64_t s = 0; s < last; ++s) {
        if (!opts.noise_off) noise.row(s, dW);
        ens.step(dW, cfg);
        maybe_snapshot(s + 1);
    }
    return traj;
}

DissipationReport f_dissipation_audit(const Trajectory& traj, int i, int j,
                                      DissipationFunctional F, double tolerance) {
    const PeriodicGrid& g = traj.grid;
    const double c1 = (F == DissipationFunctional::abs) ? 2.0 : 1.0;
    auto F_integral = [&](std::span<const double> eta) {
        double s = 0.0;
        for (double e : eta)
            s += (F == DissipationFunctional::abs ? std::fabs(e) : std::max(e, 0.0)) * g.dx;
        return s;
    };

    DissipationReport rep;
    std::vector<double> eta(g.n);
    std::vector<double> crossings(traj.times.size());
    std::vector<double> masses(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (int k = 0; k < g.n; ++k) eta[k] = traj.u[s][i][k] - traj.u[s][j][k];
        crossings[s] = crossing_sum_of(eta, g);
        masses[s] = F_integral(eta);
    }
    rep.initial_mass = masses.empty() ? 0.0 : masses[0];
    double quad = 0.0;
    rep.min_slack = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        if (s > 0) {
            const double dtau = traj.times[s] - traj.times[s - 1];
            quad += 0.5 * dtau * (crossings[s] + crossings[s - 1]);
        }
        const double slack = rep.initial_mass - masses[s] - 0.25 * c1 * quad;
        rep.times.push_back(traj.times[s]);
        rep.slack.push_back(slack);
        rep.min_slack = std::min(rep.min_slack, slack);
    }
    rep.ok = rep.min_slack >= -tolerance;
    return rep;
}

}  // namespace sburg
