#include "sburg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sburg/colehopf.hpp"
#include "sburg/fft.hpp"
#include "sburg/noise.hpp"
#include "sburg/parallel.hpp"
#include "sburg/rng.hpp"

namespace sburg {

namespace {

std::vector<std::uint64_t> to_steps(std::span<const double> times, double dt) {
    std::vector<std::uint64_t> steps;
    for (double t : times) steps.push_back(static_cast<std::uint64_t>(std::floor(t / dt + 1e-9)));
    return steps;
}

/// Evolves one ensemble with noise stream `stream` and invokes
/// cb(snapshot_index, ensemble) whenever a requested step is reached.
template <typename Callback>
void evolve_with_snapshots(const EvolutionSpec& spec,
                           const std::vector<std::vector<double>>& initials, std::uint64_t stream,
                           const std::vector<std::uint64_t>& snap_steps, Callback&& cb) {
    BurgersEnsemble ens(initials, spec.grid, spec.rho);
    const std::uint64_t last =
        snap_steps.empty() ? 0 : *std::max_element(snap_steps.begin(), snap_steps.end());
    NoisePath noise(spec.seed, spec.scheme.dt, std::max<std::uint64_t>(last, 1), spec.grid,
                    stream);
    std::vector<double> dW(spec.grid.n, 0.0);
    auto emit = [&](std::uint64_t s) {
        for (std::size_t i = 0; i < snap_steps.size(); ++i)
            if (snap_steps[i] == s) cb(i, ens);
    };
    emit(0);
    for (std::uint64_t s = 0; s < last; ++s) {
        if (!spec.noise_off) noise.row(s, dW);
        ens.step(dW, spec.scheme);
        emit(s + 1);
    }
}

double spatial_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double yg_norm_of_diff(std::span<const double> a, std::span<const double> b,
                       const PeriodicGrid& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::fabs(a[j] - b[j]);
    return s * g.dx / yg_weight_constant(g);
}

}  // namespace

MeasureEstimate kb_average(const EvolutionSpec& spec, const std::vector<double>& initial,
                           double t0, double T, int realizations, int threads) {
    if (realizations < 30)
        throw std::invalid_argument("kb_average: need at least 30 realizations");
    if (!(t0 >= 0.0) || !(T > t0)) throw std::invalid_argument("kb_average: need 0 <= t0 < T");
    MeasureEstimate est;
    est.grid = spec.grid;
    est.t0 = t0;
    est.t1 = T;
    est.seed = spec.seed;
    est.stream_base = spec.stream_base;
    est.snapshots.assign(realizations, {});
    parallel_for(realizations, threads, [&](std::size_t r) {
        RngStream aux(spec.seed, (spec.stream_base + r) | kAuxStreamBit);
        const double tau = t0 + aux.uniform_at(0) * (T - t0);
        const std::vector<std::uint64_t> steps = to_steps(std::array{tau}, spec.scheme.dt);
        evolve_with_snapshots(spec, {initial}, spec.stream_base + r, steps,
                              [&](std::size_t, const BurgersEnsemble& ens) {
                                  est.snapshots[r] = ens.u(0);
                              });
    });
    return est;
}

WassersteinCurve coupled_wasserstein_bound(const EvolutionSpec& spec,
                                           const std::vector<double>& init_i,
                                           const std::vector<double>& init_j,
                                           std::span<const double> snapshot_times,
                                           int realizations, int threads) {
    const auto steps = to_steps(snapshot_times, spec.scheme.dt);
    const std::size_t T = steps.size();
    std::vector<std::vector<double>> samples(realizations, std::vector<double>(T, 0.0));
    std::vector<int> violations(realizations, 0);
    parallel_for(realizations, threads, [&](std::size_t r) {
        evolve_with_snapshots(spec, {init_i, init_j}, spec.stream_base + r, steps,
                              [&](std::size_t si, const BurgersEnsemble& ens) {
                                  const auto d = compare(ens, 0, 1);
                                  samples[r][si] = d.l1 / yg_weight_constant(spec.grid);
                              });
        for (std::size_t si = 1; si < T; ++si)
            if (samples[r][si] > samples[r][si - 1] + 1e-12 * std::max(1.0, samples[r][0]))
                ++violations[r];
    });
    WassersteinCurve curve;
    curve.realizations = realizations;
    curve.monotonicity_violations = std::accumulate(violations.begin(), violations.end(), 0);
    for (std::size_t si = 0; si < T; ++si) {
        std::vector<double> col(realizations);
        for (int r = 0; r < realizations; ++r) col[r] = samples[r][si];
        const auto ms = mean_se(col);
        curve.times.push_back(snapshot_times[si]);
        curve.dhat.push_back(ms.mean);
        curve.se.push_back(ms.se);
    }
    return curve;
}

OrderingReport ordering_audit(const EvolutionSpec& spec, const std::vector<double>& init1,
                              const std::vector<double>& init2, double burn_in,
                              int realizations, int threads) {
    const std::vector<std::uint64_t> steps = to_steps(std::array{burn_in}, spec.scheme.dt);
    std::vector<int> constant_sign(realizations, 0);
    std::vector<double> gaps(realizations, 0.0);
    parallel_for(realizations, threads, [&](std::size_t r) {
        evolve_with_snapshots(
            spec, {init1, init2}, spec.stream_base + r, steps,
            [&](std::size_t, const BurgersEnsemble& ens) {
                double lo = 1e300, hi = -1e300, min_abs = 1e300;
                const auto& t1 = ens.theta(0);
                const auto& t2 = ens.theta(1);
                for (int k = 0; k < spec.grid.n; ++k) {
                    const double e = t1[k] - t2[k];
                    lo = std::min(lo, e);
                    hi = std::max(hi, e);
                    min_abs = std::min(min_abs, std::fabs(e));
                }
                constant_sign[r] = (lo > 0.0 || hi < 0.0) ? 1 : 0;
                gaps[r] = constant_sign[r] ? min_abs : 0.0;
            });
    });
    OrderingReport rep;
    rep.realizations = realizations;
    rep.sign_constant_fraction =
        std::accumulate(constant_sign.begin(), constant_sign.end(), 0) /
        static_cast<double>(realizations);
    rep.min_gap = 1e300;
    for (int r = 0; r < realizations; ++r)
        if (constant_sign[r]) rep.min_gap = std::min(rep.min_gap, gaps[r]);
    if (rep.min_gap == 1e300) rep.min_gap = 0.0;
    return rep;
}

ShearReport shear_audit(const EvolutionSpec& spec, const std::vector<double>& v, double c,
                        double T, std::span<const double> lags, int realizations, int threads) {
    const PeriodicGrid& g = spec.grid;
    const std::vector<std::uint64_t> steps = to_steps(std::array{T}, spec.scheme.dt);
    const double m0 = spatial_mean(v);
    const std::size_t nstats = 2 + lags.size();

    auto stats_of = [&](std::span<const double> u) {
        std::vector<double> s(nstats, 0.0);
        s[0] = spatial_mean(u);
        double var = 0.0;
        for (int j = 0; j < g.n; ++j) var += (u[j] - m0) * (u[j] - m0);
        s[1] = var / g.n;
        for (std::size_t li = 0; li < lags.size(); ++li) {
            const int lag = static_cast<int>(std::lround(lags[li] / g.dx));
            double cov = 0.0;
            for (int j = 0; j < g.n; ++j) cov += (u[j] - m0) * (u[(j + lag) % g.n] - m0);
            s[2 + li] = cov / g.n;
        }
        return s;
    };

    std::vector<std::vector<double>> base(realizations), sheared(realizations);
    std::vector<double> vc(v);
    for (double& x : vc) x += c;
    parallel_for(realizations, threads, [&](std::size_t r) {
        // Both laws ride the same noise stream: for c = 0 the runs coincide
        // exactly, and for c != 0 the coupling only makes the comparison of
        // statistics conservative (the combined SE overstates the variance of
        // the difference).
        evolve_with_snapshots(spec, {v}, spec.stream_base + r, steps,
                              [&](std::size_t, const BurgersEnsemble& ens) {
                                  base[r] = stats_of(ens.u(0));
                              });
        evolve_with_snapshots(spec, {vc}, spec.stream_base + r, steps,
                              [&](std::size_t, const BurgersEnsemble& ens) {
                                  Field u(g, ens.u(0));
                                  Field moved = (c * T != 0.0) ? shift(u, -c * T) : u;
                                  for (double& x : moved.v) x -= c;
                                  sheared[r] = stats_of(moved.v);
                              });
    });

    ShearReport rep;
    const char* names[2] = {"mean", "variance"};
    for (std::size_t si = 0; si < nstats; ++si) {
        std::vector<double> xa(realizations), xb(realizations);
        for (int r = 0; r < realizations; ++r) {
            xa[r] = base[r][si];
            xb[r] = sheared[r][si];
        }
        const auto sa = mean_se(xa);
        const auto sb = mean_se(xb);
        ShearStat st;
        st.name = si < 2 ? names[si] : "lag_cov_" + std::to_string(lags[si - 2]);
        st.base = sa.mean;
        st.base_se = sa.se;
        st.sheared = sb.mean;
        st.sheared_se = sb.se;
        const double se = combined_se(sa.se, sb.se);
        const double diff = sa.mean - sb.mean;
        // differences at machine precision count as exact agreement
        st.zscore = (se > 0.0 && std::fabs(diff) > 1e-12 * std::max(1.0, std::fabs(sa.mean)))
                        ? diff / se
                        : 0.0;
        rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(st.zscore));
        rep.stats.push_back(std::move(st));
    }
    return rep;
}

MomentAudit stationary_moment_audit(const EvolutionSpec& spec, const std::vector<double>& initial,
                                    double burn_in, double T_window, int realizations,
                                    int threads) {
    if (realizations < 30)
        throw std::invalid_argument("stationary_moment_audit: need at least 30 realizations");
    MomentAudit audit;
    audit.realizations = realizations;
    audit.var_bound = spec.rho.l2sq;
    audit.grad_bound = spec.rho.deriv_l2sq;
    if (spec.noise_off || spec.rho.l2sq == 0.0) audit.vacuous = true;

    const PeriodicGrid& g = spec.grid;
    const double dt = spec.scheme.dt;
    const std::array<double, 4> times = {0.5 * burn_in, 0.75 * burn_in, burn_in,
                                         burn_in + T_window};
    const auto zeta = default_zeta(g);

    std::vector<double> u_at_X(realizations), grad_sq(realizations), eust_gap(realizations),
        d3(realizations), d4(realizations);

    parallel_for(realizations, threads, [&](std::size_t r) {
        NoisePath noise(spec.seed, dt,
                        static_cast<std::uint64_t>(std::ceil(times.back() / dt)) + 1, g,
                        spec.stream_base + r);
        RunOptions opts;
        opts.noise_off = spec.noise_off;
        const auto series =
            kpz_height_from_burgers(initial, noise, spec.scheme, spec.rho, zeta, times, opts);
        RngStream aux(spec.seed, (spec.stream_base + r) | kAuxStreamBit);
        const int X = static_cast<int>(aux.uniform_at(0) * g.n) % g.n;

        const auto& u_b = series.u[2];  // at burn_in
        u_at_X[r] = u_b[X];
        Field du(g);
        spectral_for(g).ddx(u_b, du.v);
        grad_sq[r] = du[X] * du[X];

        const double dh = series.states[3].h[X] - series.states[2].h[X];
        const double rhs = spec.rho.selfconv[0] - (2.0 / T_window) * dh;
        eust_gap[r] = u_b[X] * u_b[X] - rhs;

        const double quarter = 0.25 * burn_in;
        d3[r] = (spatial_mean(series.states[1].h) - spatial_mean(series.states[0].h)) / quarter;
        d4[r] = (spatial_mean(series.states[2].h) - spatial_mean(series.states[1].h)) / quarter;
    });

    const auto vs = variance_se(u_at_X);
    audit.var_u = vs.var;
    audit.var_u_se = vs.se;
    const auto gs = mean_se(grad_sq);
    audit.grad_sq = gs.mean;
    audit.grad_sq_se = gs.se;
    const auto es = mean_se(eust_gap);
    audit.eust_gap = es.mean;
    audit.eust_gap_se = es.se;

    std::vector<double> delta(realizations);
    for (int r = 0; r < realizations; ++r) delta[r] = d4[r] - d3[r];
    const auto ds = mean_se(delta);
    audit.drift_q3 = mean_se(d3).mean;
    audit.drift_q4 = mean_se(d4).mean;
    audit.drift_change_se = ds.se;
    // Certified when the drift change is <2% of the drift level or cannot be
    // resolved above the Monte Carlo noise, and the gradient identity holds.
    const bool drift_flat = std::fabs(ds.mean) <= 0.02 * std::fabs(audit.drift_q4) ||
                            std::fabs(ds.mean) <= 2.0 * ds.se;
    const bool grad_ok = std::fabs(audit.grad_sq - audit.grad_bound) <= 5.0 * audit.grad_sq_se;
    audit.equilibration_certified = audit.vacuous ? true : (drift_flat && grad_ok);
    return audit;
}

std::vector<double> BasinDecomposition::total() const {
    std::vector<double> v(grid.n);
    for (int j = 0; j < grid.n; ++j) v[j] = v_per[j] + v_int[j] + v_z[j];
    return v;
}

void BasinDecomposition::validate() const {
    if (static_cast<int>(v_per.size()) != grid.n || static_cast<int>(v_int.size()) != grid.n ||
        static_cast<int>(v_z.size()) != grid.n)
        throw std::invalid_argument("basin: component sizes do not match grid");
    if (!(period > 0.0)) throw std::invalid_argument("basin: period must be > 0");
    const double ratio = grid.length / period;
    if (std::fabs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("basin: period of v_per must divide the torus length");
    const double cells = period / grid.dx;
    if (std::fabs(cells - std::round(cells)) > 1e-9)
        throw std::invalid_argument("basin: period must be a whole number of cells");
    const double mid = 0.5 * grid.length;
    for (int j = 0; j < grid.n; ++j) {
        if (std::fabs(grid.wrap(grid.x(j) - mid)) <= 0.125 * grid.length) continue;
        if (v_int[j] != 0.0 || v_z[j] != 0.0)
            throw std::invalid_argument(
                "basin: v_int and v_z must be supported in a window of length <= L/4 around the "
                "midpoint");
    }
    double pm = 0.0;
    for (double x : v_per) pm += x;
    pm /= grid.n;
    if (std::fabs(pm - target_mean) > 1e-9)
        throw std::invalid_argument("basin: target_mean must equal the average of v_per");
}

SandwichResult sandwich(const BasinDecomposition& decomp, double eps) {
    decomp.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("sandwich: eps must be > 0");
    const PeriodicGrid& g = decomp.grid;
    const double mid = 0.5 * g.length;

    // Envelope w(x) = sup over |y-mid| >= |x-mid| of |v_z(y)|: suffix max over
    // cells sorted by distance from the midpoint, descending.
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    auto radius = [&](int j) { return std::fabs(g.wrap(g.x(j) - mid)); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return radius(a) > radius(b); });
    std::vector<double> w(g.n, 0.0);
    double running = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t e = i;
        while (e < order.size() && radius(order[e]) == radius(order[i])) ++e;
        double group = running;
        for (std::size_t q = i; q < e; ++q)
            group = std::max(group, std::fabs(decomp.v_z[order[q]]));
        for (std::size_t q = i; q < e; ++q) w[order[q]] = group;
        running = group;
        i = e;
    }

    double int_l1 = 0.0, w_l1 = 0.0;
    for (int j = 0; j < g.n; ++j) {
        int_l1 += std::fabs(decomp.v_int[j]) * g.dx;
        w_l1 += w[j] * g.dx;
    }
    const double need = std::max(int_l1, w_l1);
    int K = static_cast<int>(std::floor(2.0 * need / (eps * decomp.period))) + 1;
    const int periods_in_torus = static_cast<int>(std::round(g.length / decomp.period));
    // K L_per must also tile the torus so the translate set is well defined.
    while (K <= periods_in_torus && periods_in_torus % K != 0) ++K;
    if (K > periods_in_torus)
        throw std::invalid_argument(
            "sandwich: eps too small for this torus (K L_per would exceed the domain); enlarge "
            "the domain or eps");

    const int spacing_cells = static_cast<int>(std::round(K * decomp.period / g.dx));
    const int translates = g.n / spacing_cells;
    SandwichResult res;
    res.K = K;
    res.v_minus.resize(g.n);
    res.v_plus.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
        double sup_tr = 0.0;
        for (int m = 0; m < translates; ++m)
            sup_tr = std::max(sup_tr, std::fabs(decomp.v_int[(j + m * spacing_cells) % g.n]));
        res.v_plus[j] = decomp.v_per[j] + w[j] + sup_tr;
        res.v_minus[j] = decomp.v_per[j] - w[j] - sup_tr;
    }
    res.mean_plus = spatial_mean(res.v_plus);
    res.mean_minus = spatial_mean(res.v_minus);
    return res;
}

StabilityReport stability_experiment(const EvolutionSpec& spec, const BasinDecomposition& decomp,
                                     double eps, double T, std::span<const double> snapshot_times,
                                     int realizations, int threads) {
    const PeriodicGrid& g = spec.grid;
    const auto sw = sandwich(decomp, eps);
    const auto v = decomp.total();
    const double a = decomp.target_mean;
    for (int j = 0; j < g.n; ++j)
        if (!(sw.v_minus[j] <= a && a <= sw.v_plus[j]))
            throw std::invalid_argument(
                "stability_experiment: reference constant is not inside the sandwich (use a "
                "decomposition with v_per equal to the constant a)");

    std::vector<double> times(snapshot_times.begin(), snapshot_times.end());
    if (times.empty() || times.back() < T) times.push_back(T);
    const auto steps = to_steps(times, spec.scheme.dt);
    const std::size_t S = steps.size();

    std::vector<std::vector<double>> dists(realizations, std::vector<double>(S, 0.0));
    std::vector<std::vector<double>> ceils(realizations, std::vector<double>(S, 0.0));
    std::vector<int> sandwich_bad(realizations, 0), mono_bad(realizations, 0);
    std::vector<double> ceiling_gap(realizations, 0.0);
    const double ceiling_exact =
        0.5 * std::numbers::pi * (sw.mean_plus - sw.mean_minus);

    parallel_for(realizations, threads, [&](std::size_t r) {
        std::vector<std::vector<double>> initials = {sw.v_minus, v, sw.v_plus,
                                                     std::vector<double>(g.n, a)};
        evolve_with_snapshots(
            spec, initials, spec.stream_base + r, steps,
            [&](std::size_t si, const BurgersEnsemble& ens) {
                const auto& tm = ens.theta(0);
                const auto& tv = ens.theta(1);
                const auto& tp = ens.theta(2);
                const auto& ta = ens.theta(3);
                const double scale = 1e-12;
                for (int j = 0; j < g.n; ++j) {
                    const bool ok = tm[j] <= tv[j] + scale && tv[j] <= tp[j] + scale &&
                                    tm[j] <= ta[j] + scale && ta[j] <= tp[j] + scale;
                    if (!ok) {
                        ++sandwich_bad[r];
                        break;
                    }
                }
                dists[r][si] = yg_norm_of_diff(tv, ta, g);
                ceils[r][si] = yg_norm_of_diff(tp, tm, g);
                ceiling_gap[r] = std::max(ceiling_gap[r],
                                          std::fabs(ceils[r][si] - ceiling_exact));
            });
        for (std::size_t si = 1; si < S; ++si)
            if (dists[r][si] > dists[r][si - 1] + 1e-12 * std::max(1.0, dists[r][0]))
                ++mono_bad[r];
    });

    StabilityReport rep;
    rep.realizations = realizations;
    rep.K = sw.K;
    rep.sandwich_violations = std::accumulate(sandwich_bad.begin(), sandwich_bad.end(), 0);
    rep.monotonicity_violations = std::accumulate(mono_bad.begin(), mono_bad.end(), 0);
    rep.ceiling_identity_gap = *std::max_element(ceiling_gap.begin(), ceiling_gap.end());
    for (std::size_t si = 0; si < S; ++si) {
        std::vector<double> dcol(realizations), ccol(realizations);
        for (int r = 0; r < realizations; ++r) {
            dcol[r] = dists[r][si];
            ccol[r] = ceils[r][si];
        }
        const auto dm = mean_se(dcol);
        const auto cm = mean_se(ccol);
        rep.times.push_back(times[si]);
        rep.dist_to_reference.push_back(dm.mean);
        rep.dist_se.push_back(dm.se);
        rep.ceiling.push_back(cm.mean);
        rep.ceiling_se.push_back(cm.se);
    }
    rep.initial_dist = rep.dist_to_reference.front();
    rep.final_dist = rep.dist_to_reference.back();
    return rep;
}

}  // namespace sburg
