#include "inlslab/evolution.hpp"

#include <cmath>

#include "inlslab/errors.hpp"
#include "spectral.hpp"

namespace inls {

void EvolveConfig::validate() const {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("evolve.dt: must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("evolve.t_end: must be > 0");
    if (!(dt_min < dt)) throw ConfigError("evolve.dt_min: must be < dt");
    if (diag_stride < 1) throw ConfigError("evolve.diag_stride: must be >= 1");
    if (!(blowup_K_factor > 1.0)) throw ConfigError("evolve.blowup_K_factor: must be > 1");
}

namespace {

// exact linear half-flow e^{i tau (1/2)Δ} on u and e^{i tau (κ/2 Δ - γ)} on v
void linear_flow(CVec& u, CVec& v, const PhysParams& p, double tau, const Grid& g) {
    if (g.kind == GridKind::Cartesian) {
        const std::size_t n = g.size();
        CVec hat(n);
        const double inv = 1.0 / static_cast<double>(n);
        g.spectral().forward(u.data(), hat.data());
        for (std::size_t j = 0; j < n; ++j)
            hat[j] *= std::polar(inv, 0.5 * tau * g.spectral_multipliers[j]);
        g.spectral().backward(hat.data(), u.data());
        g.spectral().forward(v.data(), hat.data());
        for (std::size_t j = 0; j < n; ++j)
            hat[j] *= std::polar(inv, 0.5 * p.kappa * tau * g.spectral_multipliers[j] - p.gamma * tau);
        g.spectral().backward(hat.data(), v.data());
    } else {
        // Crank-Nicolson: (1 - i beta tau/2 Δ) x⁺ = (1 + i beta tau/2 Δ) x⁻;
        // unitary in the grid inner product since the FV Laplacian is self-adjoint
        const Complex ihalf(0.0, 0.5 * tau);
        {
            CVec rhs = laplacian(u, g);
            for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] + ihalf * 0.5 * rhs[i];
            u = solve_helmholtz(Complex(1.0), ihalf * 0.5, rhs, g);
        }
        {
            CVec rhs = laplacian(v, g);
            const Complex bk = ihalf * (0.5 * p.kappa);
            for (std::size_t i = 0; i < v.size(); ++i) rhs[i] = v[i] + bk * rhs[i];
            v = solve_helmholtz(Complex(1.0), bk, rhs, g);
            const Complex phase = std::polar(1.0, -p.gamma * tau);
            for (auto& z : v) z *= phase;
        }
    }
}

// one classical RK4 substep of u' = i w conj(u) v, v' = i (w/2) u², pointwise
void nonlinear_rk4(CVec& u, CVec& v, const RVec& w, double dt) {
    const Complex I(0.0, 1.0);
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double wj = w[j];
        const Complex u0 = u[j], v0 = v[j];
        auto fu = [&](Complex a, Complex b) { return I * wj * std::conj(a) * b; };
        auto fv = [&](Complex a) { return I * (0.5 * wj) * a * a; };
        const Complex k1u = fu(u0, v0), k1v = fv(u0);
        const Complex u1 = u0 + 0.5 * dt * k1u, v1 = v0 + 0.5 * dt * k1v;
        const Complex k2u = fu(u1, v1), k2v = fv(u1);
        const Complex u2 = u0 + 0.5 * dt * k2u, v2 = v0 + 0.5 * dt * k2v;
        const Complex k3u = fu(u2, v2), k3v = fv(u2);
        const Complex u3 = u0 + dt * k3u, v3 = v0 + dt * k3v;
        const Complex k4u = fu(u3, v3), k4v = fv(u3);
        u[j] = u0 + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v[j] = v0 + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
}

double fit_loglog_rate(const std::vector<double>& t, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= 0.0 || y[i] <= 0.0) continue;
        const double lx = std::log(t[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 3) return 0.0;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

} // namespace

FieldPair strang_step_with_weight(const FieldPair& state, const PhysParams& p, double dt,
                                  const RVec& w) {
    if (!state.conforms()) throw ConfigError("strang_step: state does not conform to grid");
    if (!(dt > 0.0)) throw ConfigError("strang_step: dt must be > 0");
    const Grid& g = *state.grid;
    FieldPair out = state;
    linear_flow(out.u, out.v, p, 0.5 * dt, g);
    nonlinear_rk4(out.u, out.v, w, dt);
    linear_flow(out.u, out.v, p, 0.5 * dt, g);
    if (!out.finite()) throw NonFinite("strang_step: non-finite sample after step");
    return out;
}

FieldPair strang_step(const FieldPair& state, const PhysParams& p, double dt) {
    return strang_step_with_weight(state, p, dt, resolve_weight(*state.grid, p.alpha));
}

Trajectory evolve(const FieldPair& state0, const EvolveConfig& cfg) {
    cfg.validate();
    if (!state0.conforms()) throw ConfigError("evolve: state does not conform to grid");
    const Grid& g = *state0.grid;
    const RVec w = resolve_weight(g, cfg.p.alpha);
    const CutoffFn cut = make_cutoff(CutoffKind::ChiR, cfg.cutoff_R, state0.grid);

    Trajectory tr;
    FieldPair s = state0;
    double t = 0.0;
    double dt = cfg.dt;
    double accum = 0.0;
    double cubic_prev = weighted_cubic(s, cfg.p, w);

    const InvariantSet inv0 = invariants(s, cfg.p, w);
    const double e_scale = std::abs(inv0.E) + inv0.K;
    double E_prev = inv0.E;
    double E_prev_accepted = inv0.E;
    int calm_steps = 0;

    auto record = [&](double tt, const InvariantSet& inv) {
        const VirialMoment vm = virial_moment(s, cut, cfg.p);
        DiagRecord r;
        r.t = tt;
        r.M = inv.M;
        r.K = inv.K;
        r.P = inv.P;
        r.E = inv.E;
        r.G = inv.G;
        r.H = inv.H;
        r.Vchi = vm.V;
        r.Mchi = vm.Mchi;
        r.localmass = local_mass(s, cfg.cutoff_R);
        r.spacetime_accum = accum;
        tr.times.push_back(tt);
        tr.diag.push_back(r);
    };

    record(0.0, inv0);
    tr.snapshot_times.push_back(0.0);
    tr.snapshots.push_back(s);

    long step = 0;
    tr.status = EvolveStatus::Completed;
    while (t < cfg.t_end - 1e-14 * cfg.t_end) {
        const double step_dt = std::min(dt, cfg.t_end - t);
        FieldPair next;
        try {
            next = strang_step_with_weight(s, cfg.p, step_dt, w);
        } catch (const NonFinite&) {
            tr.status = EvolveStatus::Diverged;
            break;
        }
        const InvariantSet inv = invariants(next, cfg.p, w);
        if (!std::isfinite(inv.E) || !std::isfinite(inv.M)) {
            tr.status = EvolveStatus::Diverged;
            break;
        }
        if (std::abs(inv.E - E_prev) > cfg.energy_drift_tol * e_scale) {
            dt = 0.5 * step_dt;
            if (dt < cfg.dt_min) {
                tr.status = EvolveStatus::BlowupDetected;
                tr.detection_time = t;
                break;
            }
            continue; // retry the step
        }
        s = std::move(next);
        t += step_dt;
        ++step;
        E_prev = inv.E;
        if (std::abs(inv.E - E_prev_accepted) < 0.25 * cfg.energy_drift_tol * e_scale) {
            if (++calm_steps >= 50 && dt < cfg.dt) {
                dt = std::min(1.25 * dt, cfg.dt);
                calm_steps = 0;
            }
        } else {
            calm_steps = 0;
        }
        E_prev_accepted = inv.E;

        const double cubic = weighted_cubic(s, cfg.p, w);
        accum += 0.5 * (cubic + cubic_prev) * step_dt;
        cubic_prev = cubic;

        if (step % cfg.diag_stride == 0) record(t, inv);
        if (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0) {
            tr.snapshot_times.push_back(t);
            tr.snapshots.push_back(s);
        }
        if (inv.K > cfg.blowup_K_factor * inv0.K) {
            tr.status = EvolveStatus::BlowupDetected;
            tr.detection_time = t;
            break;
        }
    }
    if (tr.times.back() != t && tr.status != EvolveStatus::Diverged)
        record(t, invariants(s, cfg.p, w));
    tr.snapshot_times.push_back(t);
    tr.snapshots.push_back(s);
    tr.final_state = s;
    tr.final_dt = dt;
    return tr;
}

BlowupReport blowup_monitor(const Trajectory& tr, const EvolveConfig& cfg) {
    (void)cfg;
    if (tr.diag.empty()) throw ConfigError("blowup_monitor: empty trajectory");
    BlowupReport rep;
    rep.sup_G = -std::numeric_limits<double>::infinity();
    for (const auto& r : tr.diag) rep.sup_G = std::max(rep.sup_G, r.G);
    rep.negative_uniform_bound = rep.sup_G < 0.0;
    rep.delta = rep.negative_uniform_bound ? -rep.sup_G : 0.0;
    rep.detection_time = tr.detection_time;
    rep.status = tr.status;

    // log-log growth fit of K on the last half of the recorded series
    std::vector<double> ts, ks;
    const std::size_t half = tr.diag.size() / 2;
    for (std::size_t i = half; i < tr.diag.size(); ++i) {
        ts.push_back(tr.diag[i].t);
        ks.push_back(tr.diag[i].K);
    }
    rep.K_growth_rate = fit_loglog_rate(ts, ks);
    return rep;
}

ScatteringReport scattering_diagnostics(const Trajectory& tr, const EvolveConfig& cfg) {
    (void)cfg;
    if (tr.diag.empty()) throw ConfigError("scattering_diagnostics: empty trajectory");
    ScatteringReport rep;
    for (const auto& r : tr.diag) {
        rep.times.push_back(r.t);
        rep.P_series.push_back(r.P);
        rep.localmass_series.push_back(r.localmass);
        rep.spacetime_series.push_back(r.spacetime_accum);
    }
    std::vector<double> ts, as;
    const std::size_t half = tr.diag.size() / 2;
    for (std::size_t i = half; i < tr.diag.size(); ++i) {
        ts.push_back(tr.diag[i].t);
        as.push_back(tr.diag[i].spacetime_accum);
    }
    rep.beta_fit = fit_loglog_rate(ts, as);
    rep.P_end_ratio = rep.P_series.back() / rep.P_series.front();
    rep.localmass_decreasing = true;
    for (std::size_t i = 1; i < rep.localmass_series.size(); ++i) {
        if (rep.localmass_series[i] > rep.localmass_series[i - 1] * (1.0 + 1e-3)) {
            rep.localmass_decreasing = false;
            break;
        }
    }
    return rep;
}

VirialChainReport verify_virial_chain(const FieldPair& state0, const EvolveConfig& cfg,
                                      const CutoffFn& cutoff, const std::vector<double>& dts) {
    if (cfg.t_end > 0.5) throw ConfigError("verify_virial_chain: use a short horizon (t_end <= 0.5)");
    VirialChainReport rep;
    rep.dts = dts;
    const VirialMoment vm0 = virial_moment(state0, cutoff, cfg.p);
    rep.scale = std::abs(vm0.V) + std::abs(vm0.Mchi) + 1.0;
    for (double dt : dts) {
        FieldPair plus = strang_step(state0, cfg.p, dt);
        // backward step: evolve the conjugate state forward (time reversal)
        FieldPair conj0 = state0;
        for (auto& z : conj0.u) z = std::conj(z);
        for (auto& z : conj0.v) z = std::conj(z);
        FieldPair minus = strang_step(conj0, cfg.p, dt);
        for (auto& z : minus.u) z = std::conj(z);
        for (auto& z : minus.v) z = std::conj(z);

        const VirialMoment vmp = virial_moment(plus, cutoff, cfg.p);
        const VirialMoment vmm = virial_moment(minus, cutoff, cfg.p);
        const double dV = (vmp.V - vmm.V) / (2.0 * dt);
        rep.err_vdot.push_back(std::abs(dV - vm0.Vdot));
        rep.err_mchi.push_back(std::abs(dV - vm0.Mchi));
        const double dM = (vmp.Mchi - vmm.Mchi) / (2.0 * dt);
        rep.err_rate.push_back(std::abs(dM - virial_rate(state0, cutoff, cfg.p)));
    }
    return rep;
}

} // namespace inls
