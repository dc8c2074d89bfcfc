#include "sburg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sburg/colehopf.hpp"
#include "sburg/fft.hpp"
#include "sburg/field_io.hpp"
#include "sburg/measures.hpp"
#include "sburg/parallel.hpp"
#include "sburg/polymer.hpp"
#include "sburg/stats.hpp"
#include "sburg/weights.hpp"

namespace sburg {

namespace {

EvolutionSpec make_spec(const ExperimentConfig& cfg, const SuiteOptions& opts,
                        std::uint64_t stream_base = 0) {
    EvolutionSpec spec;
    spec.grid = cfg.grid;
    spec.rho = cfg.build_rho();
    spec.scheme = cfg.scheme;
    spec.seed = opts.seed_override.value_or(cfg.seed);
    spec.stream_base = stream_base;
    return spec;
}

std::vector<double> time_grid(double t0, double t1, double spacing) {
    std::vector<double> ts;
    for (double t = t0; t <= t1 + 1e-9; t += spacing) ts.push_back(t);
    return ts;
}

void finalize(Report& rep, const ExperimentConfig& cfg, const SuiteOptions& opts,
              std::uint64_t seed) {
    std::filesystem::create_directories(opts.out_dir);
    write_report_json(rep, opts.out_dir / (rep.suite + ".report.json"));
    Manifest m;
    m.config_hash = cfg.config_hash();
    m.code_version = kCodeVersion;
    m.seed = seed;
    for (const auto& e : std::filesystem::directory_iterator(opts.out_dir)) {
        if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
        m.files.emplace_back(e.path().filename().string(), hash_file(e.path()));
    }
    std::sort(m.files.begin(), m.files.end());
    write_manifest(m, opts.out_dir / "manifest.json");
}

double max_amplitude(const std::vector<std::vector<double>>& initials) {
    double m = 0.0;
    for (const auto& v : initials)
        for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

Report run_simulate(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "simulate";
    std::filesystem::create_directories(opts.out_dir);
    const auto rho = cfg.build_rho();
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);

    std::vector<std::vector<double>> initials;
    for (const auto& spec : cfg.param("initials")) initials.push_back(build_initial(spec, cfg.grid));
    cfg.validate_dt(max_amplitude(initials));

    const auto times = time_grid(0.0, cfg.t_max, cfg.snapshot_spacing);
    const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(cfg.t_max / cfg.scheme.dt)) + 1;
    NoisePath noise(seed, cfg.scheme.dt, steps, cfg.grid, /*stream=*/0);
    const Trajectory traj = run(initials, noise, cfg.scheme, rho, times);

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (std::size_t c = 0; c < traj.u[s].size(); ++c) {
            char name[64];
            std::snprintf(name, sizeof(name), "u_c%02zu_t%08.3f.bfd", c, traj.times[s]);
            save_field_bfd(opts.out_dir / name, Field(cfg.grid, traj.u[s][c]), traj.times[s]);
        }
    }
    rep.add(check_true("trajectory persisted", true));
    finalize(rep, cfg, opts, seed);
    return rep;
}

// ---------------------------------------------------------------------------
// covariance-check
// ---------------------------------------------------------------------------

Report run_covariance_check(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "covariance";
    if (cfg.realizations < 100)
        throw ConfigError("covariance-check: insufficient realizations (minimum 100): got " +
                          std::to_string(cfg.realizations));
    const auto rho = cfg.build_rho();
    const PeriodicGrid& g = cfg.grid;
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
    std::vector<double> times;
    for (const auto& t : cfg.param("times")) times.push_back(t.get<double>());
    const double dt = cfg.scheme.dt;
    std::vector<std::uint64_t> snap_steps;
    for (double t : times)
        snap_steps.push_back(static_cast<std::uint64_t>(std::floor(t / dt + 1e-9)));
    const std::uint64_t last = *std::max_element(snap_steps.begin(), snap_steps.end());

    const int R = cfg.realizations;
    const std::size_t T = times.size();
    // corr[r][ti][lag]: spatially averaged circular correlation of psi
    std::vector<std::vector<std::vector<double>>> corr(
        R, std::vector<std::vector<double>>(T, std::vector<double>(g.n, 0.0)));

    parallel_for(R, opts.threads, [&](std::size_t r) {
        NoisePath noise(seed, dt, last, g, r);
        PsiEvolver psi(g, rho);
        const Spectral& sp = spectral_for(g);
        std::vector<double> dW(g.n);
        std::vector<std::complex<double>> hat(sp.fft().n_modes());
        auto record = [&](std::uint64_t s) {
            for (std::size_t ti = 0; ti < T; ++ti) {
                if (snap_steps[ti] != s) continue;
                sp.fft().forward(psi.psi(), hat.data());
                for (auto& h : hat) h = std::norm(h);
                sp.fft().inverse(hat.data(), corr[r][ti]);
                for (double& x : corr[r][ti]) x /= g.n;
            }
        };
        record(0);
        for (std::uint64_t s = 0; s < last; ++s) {
            noise.row(s, dW);
            psi.step(dW, dt);
            record(s + 1);
        }
    });

    const double z_max = cfg.threshold("covariance_z_max");
    for (std::size_t ti = 0; ti < T; ++ti) {
        const auto oracle = psi_stationary_covariance(rho, times[ti], g);
        double worst = 0.0;
        std::vector<double> mc(g.n), se(g.n);
        std::vector<double> col(R);
        for (int lag = 0; lag < g.n; ++lag) {
            for (int r = 0; r < R; ++r) col[r] = corr[r][ti][lag];
            const auto ms = mean_se(col);
            mc[lag] = ms.mean;
            se[lag] = ms.se;
            if (ms.se > 0.0) worst = std::max(worst, std::fabs(ms.mean - oracle[lag]) / ms.se);
        }
        rep.add(check_le("psi covariance at t=" + std::to_string(times[ti]) +
                             " matches fixed-time law at all lags (max |z|)",
                         worst, z_max));
        std::vector<double> lag_x(g.n);
        for (int lag = 0; lag < g.n; ++lag) lag_x[lag] = lag * g.dx;
        write_csv(opts.out_dir / ("covariance_t" + std::to_string(times[ti]) + ".csv"),
                  {"lag", "mc", "se", "oracle"},
                  {lag_x, mc, se, oracle});
    }
    finalize(rep, cfg, opts, seed);
    return rep;
}

// ---------------------------------------------------------------------------
// structure-suite
// ---------------------------------------------------------------------------

Report run_structure_suite(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "structure";
    std::filesystem::create_directories(opts.out_dir);
    const auto rho = cfg.build_rho();
    const PeriodicGrid& g = cfg.grid;
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
    const double dt = cfg.scheme.dt;
    const int R = cfg.realizations;
    const std::uint64_t steps = static_cast<std::uint64_t>(std::llround(cfg.t_max / dt));

    const auto u_low = build_initial(cfg.param("ordered_low"), g);
    const auto u_high = build_initial(cfg.param("ordered_high"), g);
    const auto u_cross = build_initial(cfg.param("crossing"), g);
    cfg.validate_dt(max_amplitude({u_low, u_high, u_cross}));
    for (int j = 0; j < g.n; ++j)
        if (u_low[j] > u_high[j])
            throw ConfigError("structure-suite: ordered_low must be <= ordered_high pointwise");

    const double rel_tol = cfg.threshold("machine_rel_tol");

    struct PathResult {
        int comparison_bad = 0;
        double l1_increase = 0.0;   // relative to initial L1
        double mass_drift = 0.0;    // relative
        double yg_increase = 0.0;   // relative
    };
    std::vector<PathResult> results(R);

    parallel_for(R, opts.threads, [&](std::size_t r) {
        BurgersEnsemble ens({u_low, u_high, u_cross}, g, rho);
        NoisePath noise(seed, dt, steps, g, r);
        std::vector<double> dW(g.n);
        double l1_prev = compare(ens, 0, 2).l1;
        const double l1_0 = l1_prev;
        double yg_prev = l1_prev / yg_weight_constant(g);
        double mass0 = 0.0;
        {
            const auto d = compare(ens, 0, 2);
            for (double e : d.eta) mass0 += e * g.dx;
        }
        PathResult res;
        const double scale = std::max(1.0, max_amplitude({u_low, u_high, u_cross}));
        for (std::uint64_t s = 0; s < steps; ++s) {
            noise.row(s, dW);
            ens.step(dW, cfg.scheme);
            const auto& ta = ens.theta(0);
            const auto& tb = ens.theta(1);
            for (int j = 0; j < g.n; ++j)
                if (ta[j] > tb[j] + rel_tol * scale) ++res.comparison_bad;
            const auto d = compare(ens, 0, 2);
            res.l1_increase = std::max(res.l1_increase, (d.l1 - l1_prev) / l1_0);
            const double ygn = d.l1 / yg_weight_constant(g);
            res.yg_increase = std::max(res.yg_increase, (ygn - yg_prev) / (l1_0 / yg_weight_constant(g)));
            double mass = 0.0;
            for (double e : d.eta) mass += e * g.dx;
            res.mass_drift =
                std::max(res.mass_drift, std::fabs(mass - mass0) / std::max(1.0, std::fabs(mass0)));
            l1_prev = d.l1;
            yg_prev = ygn;
        }
        results[r] = res;
    });

    int comparison_bad = 0;
    double l1_inc = 0.0, mass_drift = 0.0, yg_inc = 0.0;
    for (const auto& res : results) {
        comparison_bad += res.comparison_bad;
        l1_inc = std::max(l1_inc, res.l1_increase);
        mass_drift = std::max(mass_drift, res.mass_drift);
        yg_inc = std::max(yg_inc, res.yg_increase);
    }
    rep.add(check_le("comparison: ordered pair stays ordered (violations)", comparison_bad, 0));
    rep.add(check_le("L1 contraction: max relative per-step increase", l1_inc, rel_tol));
    rep.add(check_le("conservation: max relative drift of the difference mass", mass_drift,
                     rel_tol));
    rep.add(check_le("Y_G coupled distance: max relative per-step increase", yg_inc, rel_tol));

    // Crossing-dissipation audits over independently seeded random coupled runs.
    const int n_diss = cfg.param("dissipation_runs").get<int>();
    const double diss_T = cfg.param("dissipation_t_max").get<double>();
    const double diss_tol_frac = cfg.threshold("dissipation_slack_frac");
    std::vector<double> slack_abs(n_diss), slack_pos(n_diss);
    const auto snap_times = time_grid(0.0, diss_T, 10.0 * dt);
    parallel_for(n_diss, opts.threads, [&](std::size_t r) {
        RngStream aux(seed, (1000 + r) | kAuxStreamBit);
        auto random_field = [&](int offset) {
            std::vector<double> v(g.n, 0.0);
            for (int mode = 1; mode <= 3; ++mode) {
                const double amp = 0.8 * aux.uniform_at(offset + 2 * mode) / mode;
                const double phase =
                    2.0 * std::numbers::pi * aux.uniform_at(offset + 2 * mode + 1);
                for (int j = 0; j < g.n; ++j)
                    v[j] += amp * std::sin(2.0 * std::numbers::pi * mode * g.x(j) / g.length +
                                           phase);
            }
            return v;
        };
        const auto a = random_field(0);
        const auto b = random_field(100);
        NoisePath noise(seed, dt, static_cast<std::uint64_t>(std::llround(diss_T / dt)), g,
                        1000 + r);
        const auto traj = run({a, b}, noise, cfg.scheme, rho, snap_times);
        const auto d0 = f_dissipation_audit(traj, 0, 1, DissipationFunctional::abs, 0.0);
        const auto d1 = f_dissipation_audit(traj, 0, 1, DissipationFunctional::pos_part, 0.0);
        slack_abs[r] = d0.min_slack / std::max(d0.initial_mass, 1e-300);
        slack_pos[r] = d1.min_slack / std::max(d0.initial_mass, 1e-300);
    });
    rep.add(check_ge("dissipation audit (F=abs): min slack / initial L1 mass",
                     *std::min_element(slack_abs.begin(), slack_abs.end()), -diss_tol_frac));
    rep.add(check_ge("dissipation audit (F=pos_part): min slack / initial L1 mass",
                     *std::min_element(slack_pos.begin(), slack_pos.end()), -diss_tol_frac));

    // Sandwich preservation on a small ensemble.
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/5000);
        BasinDecomposition decomp;
        decomp.grid = g;
        decomp.period = g.length;
        decomp.target_mean = 0.0;
        decomp.v_per.assign(g.n, 0.0);
        decomp.v_int = build_initial({{"type", "odd_bump"},
                                      {"center", 0.5 * g.length},
                                      {"width", g.length / 10.0},
                                      {"amplitude", 0.7}},
                                     g);
        decomp.v_z = build_initial({{"type", "odd_bump"},
                                    {"center", 0.5 * g.length},
                                    {"width", g.length / 9.0},
                                    {"amplitude", 0.3}},
                                   g);
        const auto st = stability_experiment(spec, decomp, cfg.param("sandwich_eps").get<double>(),
                                             cfg.t_max, time_grid(0.0, cfg.t_max, 10 * dt),
                                             cfg.param("sandwich_realizations").get<int>(),
                                             opts.threads);
        rep.add(check_le("sandwich: pointwise order violations", st.sandwich_violations, 0));
    }

    finalize(rep, cfg, opts, seed);
    return rep;
}

// ---------------------------------------------------------------------------
// moments-suite
// ---------------------------------------------------------------------------

Report run_moments_suite(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "moments";
    std::filesystem::create_directories(opts.out_dir);
    const auto rho = cfg.build_rho();
    const PeriodicGrid& g = cfg.grid;
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
    const double dt = cfg.scheme.dt;
    const double a0 = cfg.param("constant_start").get<double>();
    cfg.validate_dt(std::fabs(a0));

    // --- Part A: moment bounds from a constant start -----------------------
    const int R = cfg.realizations;
    const auto times = time_grid(cfg.snapshot_spacing, cfg.t_max, cfg.snapshot_spacing);
    std::vector<std::uint64_t> snap_steps;
    for (double t : times)
        snap_steps.push_back(static_cast<std::uint64_t>(std::floor(t / dt + 1e-9)));
    const std::uint64_t last = snap_steps.back();
    const std::size_t T = times.size();

    std::vector<std::vector<double>> u_at0(T, std::vector<double>(R));
    std::vector<std::vector<double>> gradsq(T, std::vector<double>(R));
    parallel_for(R, opts.threads, [&](std::size_t r) {
        BurgersEnsemble ens({std::vector<double>(g.n, a0)}, g, rho);
        NoisePath noise(seed, dt, last, g, r);
        const Spectral& sp = spectral_for(g);
        std::vector<double> dW(g.n), du(g.n);
        auto record = [&](std::uint64_t s) {
            for (std::size_t ti = 0; ti < T; ++ti) {
                if (snap_steps[ti] != s) continue;
                const auto u = ens.u(0);
                u_at0[ti][r] = u[0];
                sp.ddx(u, du);
                double gs = 0.0;
                for (double x : du) gs += x * x;
                gradsq[ti][r] = gs / g.n;
            }
        };
        for (std::uint64_t s = 0; s < last; ++s) {
            noise.row(s, dW);
            ens.step(dW, cfg.scheme);
            record(s + 1);
        }
    });

    const double z_max = cfg.threshold("moment_z_max");
    double worst_var_excess = -1e300, worst_grad_excess = -1e300;
    std::vector<double> var_curve(T), var_se_curve(T), grad_curve(T), grad_se_curve(T);
    for (std::size_t ti = 0; ti < T; ++ti) {
        const auto vs = variance_se(u_at0[ti]);
        const auto gs = mean_se(gradsq[ti]);
        var_curve[ti] = vs.var;
        var_se_curve[ti] = vs.se;
        grad_curve[ti] = gs.mean;
        grad_se_curve[ti] = gs.se;
        worst_var_excess = std::max(worst_var_excess, (vs.var - rho.l2sq) / std::max(vs.se, 1e-300));
        worst_grad_excess =
            std::max(worst_grad_excess, (gs.mean - rho.deriv_l2sq) / std::max(gs.se, 1e-300));
    }
    std::vector<double> tcol(times.begin(), times.end());
    write_csv(opts.out_dir / "moments.csv", {"t", "var_u", "var_se", "grad_sq", "grad_se"},
              {tcol, var_curve, var_se_curve, grad_curve, grad_se_curve});
    rep.add(check_le("variance bound: max z of Var u(t,x0) - ||rho||^2", worst_var_excess, z_max));
    rep.add(check_le("gradient bound: max z of E(du)^2 - ||rho'||^2", worst_grad_excess, z_max));
    const double eq_frac = cfg.threshold("gradient_equality_frac");
    rep.add(check_le("gradient identity at T: |E(du)^2 - ||rho'||^2| / ||rho'||^2",
                     std::fabs(grad_curve.back() - rho.deriv_l2sq) / rho.deriv_l2sq, eq_frac,
                     grad_se_curve.back() / rho.deriv_l2sq));

    // --- Part B: stationary moment identities ------------------------------
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/20000);
        const int Rs = cfg.param("stationary_realizations").get<int>();
        const auto audit =
            stationary_moment_audit(spec, std::vector<double>(g.n, 0.0), cfg.burn_in,
                                    cfg.param("eust_window").get<double>(), Rs, opts.threads);
        rep.add(check_le("stationary: Var u(X) <= ||rho||^2 + 5 SE", audit.var_u,
                         audit.var_bound + z_max * audit.var_u_se, audit.var_u_se));
        rep.add(check_abs_le("stationary: E(du(X))^2 - ||rho'||^2 within 5 SE",
                             audit.grad_sq - audit.grad_bound, z_max * audit.grad_sq_se,
                             audit.grad_sq_se));
        rep.add(check_abs_le("stationary: EuST balance gap within 5 SE", audit.eust_gap,
                             z_max * audit.eust_gap_se, audit.eust_gap_se));
        rep.add(check_true("stationary: equilibration certified", audit.equilibration_certified));
    }

    // --- Part C: shear invariance ------------------------------------------
    {
        const auto v = build_initial(cfg.param("shear_initial"), g);
        const double shear_T = cfg.param("shear_t_max").get<double>();
        const int shear_R = cfg.param("shear_realizations").get<int>();
        std::vector<double> lags;
        for (const auto& l : cfg.param("shear_lags")) lags.push_back(l.get<double>());
        int base = 40000;
        for (double c : {1.0, -1.0}) {
            EvolutionSpec spec = make_spec(cfg, opts, base);
            base += 2 * shear_R + 10;
            const auto sh = shear_audit(spec, v, c, shear_T, lags, shear_R, opts.threads);
            rep.add(check_le("shear invariance c=" + std::to_string(static_cast<int>(c)) +
                                 ": max |z| over moment statistics",
                             sh.max_abs_z, z_max));
        }
    }

    finalize(rep, cfg, opts, seed);
    return rep;
}

// ---------------------------------------------------------------------------
// gamma suite
// ---------------------------------------------------------------------------

namespace {

/// Aggregated white-noise increments: pairwise in time, pairwise in space,
/// reproducing the coarse-grid law from a fine path (the strong-coupling
/// device for the refinement study).
NoisePath coarsen_noise(const NoisePath& fine, const PeriodicGrid& coarse_grid) {
    const PeriodicGrid& gf = fine.grid();
    if (gf.n != 2 * coarse_grid.n)
        throw std::invalid_argument("coarsen_noise: fine grid must have 2x cells");
    const std::uint64_t steps_c = fine.steps() / 2;
    std::vector<double> data(steps_c * coarse_grid.n);
    std::vector<double> r0(gf.n), r1(gf.n);
    for (std::uint64_t s = 0; s < steps_c; ++s) {
        fine.row(2 * s, r0);
        fine.row(2 * s + 1, r1);
        for (int k = 0; k < coarse_grid.n; ++k)
            data[s * coarse_grid.n + k] =
                0.5 * (r0[2 * k] + r0[2 * k + 1] + r1[2 * k] + r1[2 * k + 1]);
    }
    return NoisePath::materialized(fine.seed(), 2.0 * fine.dt(), steps_c, coarse_grid,
                                   fine.stream(), std::move(data));
}

}  // namespace

Report run_gamma_suite(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "gamma";
    std::filesystem::create_directories(opts.out_dir);
    const auto rho = cfg.build_rho();
    const PeriodicGrid& g = cfg.grid;
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
    const double z_max = cfg.threshold("gamma_z_max");

    const auto times = time_grid(cfg.snapshot_spacing, cfg.t_max, cfg.snapshot_spacing);
    const std::size_t T = times.size();

    // --- polymer stack ------------------------------------------------------
    PolymerConfig pcfg;
    pcfg.paths = cfg.param("polymer_paths").get<int>();
    pcfg.dt = cfg.scheme.dt;
    pcfg.t_max = cfg.t_max;
    pcfg.resample_threshold = cfg.param("resample_threshold").get<double>();
    const int Rp = cfg.realizations;
    const auto curve = estimate_gamma(g, rho, pcfg, Rp, times, seed, /*stream_base=*/0,
                                      opts.threads);

    write_csv(opts.out_dir / "gamma_polymer.csv",
              {"t", "gamma", "se", "gamma_prime", "se_prime", "gamma_small_m"},
              {curve.times, curve.gamma, curve.se, curve.gamma_prime, curve.se_prime,
               curve.gamma_small_m});

    auto monotone_z = [&](const std::vector<std::vector<double>>& samples, int sign) {
        // max over consecutive pairs of z-scores against monotonicity
        double worst = -1e300;
        const int R = static_cast<int>(samples.size());
        std::vector<double> diff(R);
        for (std::size_t ti = 1; ti < T; ++ti) {
            for (int r = 0; r < R; ++r)
                diff[r] = sign * (samples[r][ti] - samples[r][ti - 1]);
            const auto ms = mean_se(diff);
            worst = std::max(worst, -ms.mean / std::max(ms.se, 1e-300));
        }
        return worst;  // > z_max means a significant monotonicity violation
    };
    auto concave_z = [&](const std::vector<std::vector<double>>& samples) {
        double worst = -1e300;
        const int R = static_cast<int>(samples.size());
        std::vector<double> d2(R);
        for (std::size_t ti = 1; ti + 1 < T; ++ti) {
            for (int r = 0; r < R; ++r)
                d2[r] = samples[r][ti + 1] - 2.0 * samples[r][ti] + samples[r][ti - 1];
            const auto ms = mean_se(d2);
            worst = std::max(worst, ms.mean / std::max(ms.se, 1e-300));
        }
        return worst;
    };

    rep.add(check_le("polymer gamma nondecreasing (max z against)",
                     monotone_z(curve.gamma_samples, +1), z_max));
    rep.add(check_le("polymer gamma concave (max z of second differences)",
                     concave_z(curve.gamma_samples), z_max));
    rep.add(check_le("overlap gamma' nonincreasing (max z against)",
                     monotone_z(curve.overlap_samples, -1), z_max));

    // overlap at t=0 equals rho*rho(0)/2 exactly
    {
        PolymerEnsemble a(pcfg.paths, seed, 1), b(pcfg.paths, seed, 2);
        const double o0 = 0.5 * polymer_overlap(a, b, rho);
        rep.add(check_abs_le("overlap estimator at t=0 minus ||rho||^2/2", o0 - 0.5 * rho.selfconv[0],
                             1e-14));
    }

    // trapezoid integral of gamma' reproduces gamma: paired per realization
    {
        double worst = 0.0;
        std::vector<double> diff(Rp);
        for (int r = 0; r < Rp; ++r) {
            double quad = 0.0, prev_t = 0.0, prev_gp = 0.5 * rho.selfconv[0];
            for (std::size_t ti = 0; ti < T; ++ti) {
                quad += 0.5 * (times[ti] - prev_t) * (curve.overlap_samples[r][ti] + prev_gp);
                prev_t = times[ti];
                prev_gp = curve.overlap_samples[r][ti];
            }
            diff[r] = quad - curve.gamma_samples[r].back();
        }
        const auto ms = mean_se(diff);
        worst = std::fabs(ms.mean) / std::max(ms.se, 1e-300);
        rep.add(check_le("trapezoid integral of gamma' matches gamma (z at t_max)", worst, z_max));
    }

    // finite-M bias check: gamma at M/2 vs M
    {
        double worst = 0.0;
        for (std::size_t ti = 0; ti < T; ++ti)
            worst = std::max(worst, std::fabs(curve.gamma_small_m[ti] - curve.gamma[ti]) /
                                        std::max(curve.se[ti], 1e-300));
        rep.add(check_le("inner-sample-size bias: |gamma_{M/2} - gamma_M| (max z)", worst, z_max));
    }

    // --- PDE height stack ----------------------------------------------------
    const int Rh = cfg.param("height_realizations").get<int>();
    const auto zeta = default_zeta(g);
    std::vector<std::vector<double>> h_samples(Rh, std::vector<double>(T, 0.0));
    std::vector<std::vector<double>> usq_samples(Rh, std::vector<double>(T, 0.0));
    const std::uint64_t h_stream_base = 500000;
    parallel_for(Rh, opts.threads, [&](std::size_t r) {
        NoisePath noise(seed, cfg.scheme.dt,
                        static_cast<std::uint64_t>(std::llround(cfg.t_max / cfg.scheme.dt)), g,
                        h_stream_base + r);
        const auto series = kpz_height_from_burgers(std::vector<double>(g.n, 0.0), noise,
                                                    cfg.scheme, rho, zeta, times);
        for (std::size_t ti = 0; ti < T; ++ti) {
            double hm = 0.0, us = 0.0;
            for (int j = 0; j < g.n; ++j) {
                hm += series.states[ti].h[j];
                us += series.u[ti][j] * series.u[ti][j];
            }
            h_samples[r][ti] = hm / g.n;
            usq_samples[r][ti] = us / g.n;
        }
    });

    std::vector<double> gamma_h(T), gamma_h_se(T);
    for (std::size_t ti = 0; ti < T; ++ti) {
        std::vector<double> col(Rh);
        for (int r = 0; r < Rh; ++r) col[r] = h_samples[r][ti];
        const auto ms = mean_se(col);
        gamma_h[ti] = ms.mean;
        gamma_h_se[ti] = ms.se;
    }
    write_csv(opts.out_dir / "gamma_heights.csv", {"t", "gamma_h", "se"},
              {curve.times, gamma_h, gamma_h_se});

    rep.add(check_le("height gamma nondecreasing (max z against)", monotone_z(h_samples, +1),
                     z_max));
    rep.add(check_le("height gamma concave (max z of second differences)", concave_z(h_samples),
                     z_max));

    // EKPZ balance: d/dt E h = (||rho||^2 - E u^2)/2, checked per realization.
    {
        double worst = 0.0;
        std::vector<double> bal(Rh);
        for (std::size_t ti = 1; ti + 1 < T; ++ti) {
            const double two_dt = times[ti + 1] - times[ti - 1];
            for (int r = 0; r < Rh; ++r)
                bal[r] = (h_samples[r][ti + 1] - h_samples[r][ti - 1]) / two_dt -
                         0.5 * (rho.selfconv[0] - usq_samples[r][ti]);
            const auto ms = mean_se(bal);
            worst = std::max(worst, std::fabs(ms.mean) / std::max(ms.se, 1e-300));
        }
        rep.add(check_le("EKPZ balance: d/dt E h vs (||rho||^2 - E u^2)/2 (max z)", worst, z_max));
    }

    // cross-stack: polymer gamma equals E h at the configured times
    {
        std::vector<double> check_times;
        for (const auto& t : cfg.param("cross_check_times")) check_times.push_back(t.get<double>());
        double worst = 0.0;
        for (double tc : check_times) {
            const auto it = std::min_element(times.begin(), times.end(), [&](double x, double y) {
                return std::fabs(x - tc) < std::fabs(y - tc);
            });
            const std::size_t ti = it - times.begin();
            const double se = combined_se(curve.se[ti], gamma_h_se[ti]);
            worst = std::max(worst, std::fabs(curve.gamma[ti] - gamma_h[ti]) / se);
        }
        rep.add(check_le("cross-stack: polymer gamma vs E h (max z at check times)", worst,
                         z_max));
    }

    // --- Cole-Hopf ladder refinement ---------------------------------------
    {
        const int base_n = cfg.param("ladder_n").get<int>();
        const double base_dt = cfg.param("ladder_dt").get<double>();
        const double ladder_T = cfg.param("ladder_t_max").get<double>();
        const int reps = cfg.param("ladder_realizations").get<int>();
        const double lo = cfg.threshold("ladder_ratio_min");
        const double hi = cfg.threshold("ladder_ratio_max");

        const PeriodicGrid gc = PeriodicGrid::make(g.length, base_n);
        const PeriodicGrid gf = PeriodicGrid::make(g.length, 2 * base_n);
        const auto rho_c = build_mollifier(cfg.mollifier_kind, cfg.mollifier_width, gc);
        const auto rho_f = build_mollifier(cfg.mollifier_kind, cfg.mollifier_width, gf);
        const auto lt = time_grid(0.1 * ladder_T, ladder_T, 0.1 * ladder_T);
        std::vector<double> ratios(reps);
        parallel_for(reps, opts.threads, [&](std::size_t r) {
            SchemeConfig sc_f = cfg.scheme;
            sc_f.dt = 0.5 * base_dt;
            SchemeConfig sc_c = cfg.scheme;
            sc_c.dt = base_dt;
            const std::uint64_t fine_steps =
                2 * static_cast<std::uint64_t>(std::llround(ladder_T / base_dt));
            NoisePath fine(seed, sc_f.dt, fine_steps, gf, 900000 + r);
            const NoisePath coarse = coarsen_noise(fine, gc);
            const auto zc = default_zeta(gc);
            const auto zf = default_zeta(gf);
            const auto rep_c = ladder_consistency(std::vector<double>(gc.n, 0.0), coarse, sc_c,
                                                  rho_c, zc, lt);
            const auto rep_f = ladder_consistency(std::vector<double>(gf.n, 0.0), fine, sc_f,
                                                  rho_f, zf, lt);
            ratios[r] = rep_f.sup_mismatch / rep_c.sup_mismatch;
        });
        const auto ms = mean_se(ratios);
        rep.add(check_ge("ladder refinement ratio (mean over paths) lower bound", ms.mean, lo,
                         ms.se));
        rep.add(check_le("ladder refinement ratio (mean over paths) upper bound", ms.mean, hi,
                         ms.se));
        write_csv(opts.out_dir / "ladder_ratios.csv", {"ratio"}, {ratios});
    }

    finalize(rep, cfg, opts, seed);
    return rep;
}

// ---------------------------------------------------------------------------
// stability suite
// ---------------------------------------------------------------------------

Report run_stability_suite(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    Report rep;
    rep.suite = "stability";
    std::filesystem::create_directories(opts.out_dir);
    const PeriodicGrid& g = cfg.grid;
    const std::uint64_t seed = opts.seed_override.value_or(cfg.seed);
    const double z_max = cfg.threshold("stability_z_max");

    // --- basin experiment ----------------------------------------------------
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/0);
        BasinDecomposition decomp;
        decomp.grid = g;
        decomp.period = g.length;
        decomp.target_mean = cfg.param("basin_mean").get<double>();
        decomp.v_per.assign(g.n, decomp.target_mean);
        decomp.v_int = build_initial(cfg.param("basin_v_int"), g);
        decomp.v_z = build_initial(cfg.param("basin_v_z"), g);
        const double eps = cfg.param("basin_eps").get<double>();
        const auto times = time_grid(0.0, cfg.t_max, cfg.snapshot_spacing);
        const auto st = stability_experiment(spec, decomp, eps, cfg.t_max, times,
                                             cfg.realizations, opts.threads);
        write_csv(opts.out_dir / "stability.csv",
                  {"t", "dist", "dist_se", "ceiling", "ceiling_se"},
                  {st.times, st.dist_to_reference, st.dist_se, st.ceiling, st.ceiling_se});
        rep.add(check_le("basin: sandwich order violations", st.sandwich_violations, 0));
        rep.add(check_le("basin: per-realization distance monotonicity violations",
                         st.monotonicity_violations, 0));
        const double decay = cfg.threshold("stability_decay_factor");
        rep.add(check_le("basin: final E||u - u_a||_YG / initial", st.final_dist / st.initial_dist,
                         decay, st.dist_se.back() / st.initial_dist));
        rep.add(check_le("basin: ceiling identity |E||u+-u-|| - (pi/2)(a+-a-)| (max dev)",
                         st.ceiling_identity_gap, 1e-9));
    }

    // --- ordering of equilibrated pairs -------------------------------------
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/100000);
        const auto init1 = build_initial(cfg.param("ordering_initial_1"), g);
        const auto init2 = build_initial(cfg.param("ordering_initial_2"), g);
        cfg.validate_dt(max_amplitude({init1, init2}));
        const int Ro = cfg.param("ordering_realizations").get<int>();
        const auto rec = ordering_audit(spec, init1, init2, cfg.burn_in, Ro, opts.threads);
        const double frac_min = cfg.threshold("ordering_fraction_min");
        rep.add(check_ge("ordering: sign-constancy fraction after burn-in",
                         rec.sign_constant_fraction, frac_min));

        // Ordered initial data gives fraction exactly 1 (monotone scheme).
        std::vector<double> lo(init2), hi(init2);
        for (double& x : hi) x += 1.0;
        const auto rec2 = ordering_audit(spec, lo, hi, 1.0, 32, opts.threads);
        rep.add(check_ge("ordering: ordered pair fraction (exact)", rec2.sign_constant_fraction,
                         1.0));
    }

    // --- uniqueness proxy: same-mean coupled equilibrations ------------------
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/200000);
        const auto alt = build_initial(cfg.param("uniqueness_initial"), g);
        const int Ru = cfg.param("uniqueness_realizations").get<int>();
        const auto times = time_grid(0.0, cfg.t_max, cfg.snapshot_spacing);
        const auto wc = coupled_wasserstein_bound(spec, std::vector<double>(g.n, 0.0), alt, times,
                                                  Ru, opts.threads);
        write_csv(opts.out_dir / "uniqueness.csv", {"t", "dhat", "se"},
                  {wc.times, wc.dhat, wc.se});
        rep.add(check_le("uniqueness proxy: per-realization monotonicity violations",
                         wc.monotonicity_violations, 0));
        const double factor = cfg.threshold("uniqueness_decay_factor");
        rep.add(check_le("uniqueness proxy: final dhat / initial",
                         wc.dhat.back() / wc.dhat.front(), factor, wc.se.back() / wc.dhat.front()));
    }

    // --- variance minimality --------------------------------------------------
    {
        EvolutionSpec spec = make_spec(cfg, opts, /*stream_base=*/300000);
        const auto alt = build_initial(cfg.param("uniqueness_initial"), g);
        const int Rv = cfg.param("minvariance_realizations").get<int>();
        const std::vector<std::uint64_t> steps = {
            static_cast<std::uint64_t>(std::llround(cfg.burn_in / cfg.scheme.dt))};
        std::vector<double> from_const(Rv), from_alt(Rv);
        parallel_for(Rv, opts.threads, [&](std::size_t r) {
            BurgersEnsemble ens({std::vector<double>(g.n, 0.0), alt}, g, spec.rho);
            NoisePath noise(spec.seed, spec.scheme.dt, steps[0], g, spec.stream_base + r);
            std::vector<double> dW(g.n);
            for (std::uint64_t s = 0; s < steps[0]; ++s) {
                noise.row(s, dW);
                ens.step(dW, spec.scheme);
            }
            RngStream aux(spec.seed, (spec.stream_base + r) | kAuxStreamBit);
            const int X = static_cast<int>(aux.uniform_at(0) * g.n) % g.n;
            from_const[r] = ens.u(0)[X];
            from_alt[r] = ens.u(1)[X];
        });
        const auto vc = variance_se(from_const);
        const auto va = variance_se(from_alt);
        rep.add(check_le("variance minimality: Var(from constant) - Var(other) (z)",
                         (vc.var - va.var) / combined_se(vc.se, va.se), z_max));
    }

    finalize(rep, cfg, opts, seed);
    return rep;
}

Report run_suite(const ExperimentConfig& cfg, const SuiteOptions& opts) {
    const std::string& kind = cfg.experiment_kind;
    if (kind == "simulate") return run_simulate(cfg, opts);
    if (kind == "covariance") return run_covariance_check(cfg, opts);
    if (kind == "structure") return run_structure_suite(cfg, opts);
    if (kind == "moments") return run_moments_suite(cfg, opts);
    if (kind == "gamma") return run_gamma_suite(cfg, opts);
    if (kind == "stability") return run_stability_suite(cfg, opts);
    throw ConfigError("config: field 'experiment.kind' has unknown value '" + kind + "'");
}

}  // namespace sburg
