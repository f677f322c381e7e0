#include "inlslab/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "inlslab/errors.hpp"
#include "inlslab/functionals.hpp"

namespace inls {

namespace {

double dot_w(const RVec& a, const RVec& b, const Grid& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] * g.quad_weights[i];
    return acc;
}

struct PairFns {
    const Grid& g;
    RVec w;
    PhysParams p;

    double K(const RVec& f, const RVec& gg) const {
        return grad_norm_sq(f, g) + p.kappa * grad_norm_sq(gg, g);
    }
    double M(const RVec& f, const RVec& gg) const {
        return norm_sq(f, g) + 2.0 * norm_sq(gg, g);
    }
    double P(const RVec& f, const RVec& gg) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            acc += w[i] * f[i] * f[i] * gg[i] * g.quad_weights[i];
        return acc;
    }
    double S(const RVec& f, const RVec& gg) const {
        return K(f, gg) + 2.0 * p.omega * M(f, gg) + 2.0 * p.gamma * norm_sq(gg, g);
    }
};

void clamp_nonneg(RVec& f) {
    for (double& x : f) x = std::max(x, 0.0);
}

RVec gaussian_profile(const Grid& g, double width_sq_inv, double amp) {
    RVec out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node_radius(i);
        out[i] = amp * std::exp(-width_sq_inv * r * r);
    }
    return out;
}

std::pair<RVec, RVec> make_init(const PhysParams& p, const Grid& g, const SolverOptions& opts,
                                const FieldPair* init) {
    if (init) {
        if (init->u.size() != g.size() || init->v.size() != g.size())
            throw ConfigError("solver init does not conform to grid");
        RVec f(g.size()), gg(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            f[i] = init->u[i].real();
            gg[i] = init->v[i].real();
        }
        clamp_nonneg(f);
        clamp_nonneg(gg);
        return {f, gg};
    }
    if (opts.init == "random") {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> amp(0.3, 1.5);
        std::uniform_real_distribution<double> wid(0.3 * p.omega, 2.0 * p.omega);
        RVec f(g.size(), 0.0), gg(g.size(), 0.0);
        for (int k = 0; k < 3; ++k) {
            const double af = amp(rng), bf = wid(rng);
            const double ag = amp(rng), bg = wid(rng);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double r2 = g.node_radius(i) * g.node_radius(i);
                f[i] += af * std::exp(-bf * r2);
                gg[i] += ag * std::exp(-bg * r2);
            }
        }
        return {f, gg};
    }
    const double b = 0.5 * p.omega;
    return {gaussian_profile(g, b, 1.0), gaussian_profile(g, b, 1.0)};
}

struct DescentState {
    RVec f, g;
    int iterations = 0;
    bool converged = false;
    double relgrad = 0.0;
};

// Projected, preconditioned descent with backtracking; objective must be
// finite on the nonnegative cone away from P = 0.
DescentState project_descend(
    const Grid& grid, RVec f0, RVec g0,
    const std::function<double(const RVec&, const RVec&)>& value,
    const std::function<void(const RVec&, const RVec&, RVec&, RVec&)>& gradient,
    const std::function<void(RVec&, RVec&)>& precondition, double tol, int max_iters) {
    DescentState st;
    st.f = std::move(f0);
    st.g = std::move(g0);
    double J = value(st.f, st.g);
    RVec gf(st.f.size()), gg(st.f.size());
    double t = -1.0;
    double t_accepted = -1.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        st.iterations = iter;
        gradient(st.f, st.g, gf, gg);
        // project onto the tangent cone of {x >= 0}
        for (std::size_t i = 0; i < gf.size(); ++i) {
            if (st.f[i] == 0.0 && gf[i] > 0.0) gf[i] = 0.0;
            if (st.g[i] == 0.0 && gg[i] > 0.0) gg[i] = 0.0;
        }
        RVec pf = gf, pg = gg;
        precondition(pf, pg);
        const double pnorm = std::sqrt(dot_w(pf, pf, grid) + dot_w(pg, pg, grid));
        const double xnorm = std::sqrt(dot_w(st.f, st.f, grid) + dot_w(st.g, st.g, grid));
        // relative gradient norm in the preconditioned metric (the raw
        // gradient amplifies 1/h² rounding noise near the minimum)
        st.relgrad = pnorm * xnorm / std::max(J, 1e-300);
        if (st.relgrad < tol) {
            st.converged = true;
            return st;
        }
        const double t_cap = 4.0 * xnorm / std::max(pnorm, 1e-300);
        if (t < 0.0) t = 0.125 * t_cap;
        t = std::min(t, t_cap);

        bool accepted = false;
        RVec ft(st.f.size()), gt(st.f.size());
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < ft.size(); ++i) {
                ft[i] = std::max(st.f[i] - t * pf[i], 0.0);
                gt[i] = std::max(st.g[i] - t * pg[i], 0.0);
            }
            const double Jt = value(ft, gt);
            if (std::isfinite(Jt) && Jt < J) {
                st.f.swap(ft);
                st.g.swap(gt);
                J = Jt;
                t_accepted = t;
                t *= 1.25;
                accepted = true;
                break;
            }
            t *= 0.4;
        }
        if (!accepted) break; // J at its rounding floor; switch to the polish flow
    }
    if (st.converged || st.iterations + 1 >= max_iters || t_accepted <= 0.0) return st;

    // Near the minimum the line search cannot measure J-decreases below
    // rounding, but the preconditioned fixed-point iteration still contracts
    // toward the critical point. Polish with Barzilai-Borwein steps on the
    // preconditioned residual, safeguarded against residual growth.
    {
        const std::size_t n = st.f.size();
        auto project_cone = [&](const RVec& xf, const RVec& xg, RVec& af, RVec& ag) {
            for (std::size_t i = 0; i < n; ++i) {
                if (xf[i] == 0.0 && af[i] > 0.0) af[i] = 0.0;
                if (xg[i] == 0.0 && ag[i] > 0.0) ag[i] = 0.0;
            }
        };
        auto residual = [&](const RVec& xf, const RVec& xg, RVec& pf, RVec& pg) {
            gradient(xf, xg, gf, gg);
            project_cone(xf, xg, gf, gg);
            pf = gf;
            pg = gg;
            precondition(pf, pg);
            return std::sqrt(dot_w(pf, pf, grid) + dot_w(pg, pg, grid));
        };

        RVec pf(n), pg(n), pf_new(n), pg_new(n), ft(n), gt(n);
        double res = residual(st.f, st.g, pf, pg);
        double tau = t_accepted;
        double best = res;
        int since_best = 0;
        for (int iter = st.iterations + 1; iter < max_iters; ++iter) {
            st.iterations = iter;
            const double xnorm = std::sqrt(dot_w(st.f, st.f, grid) + dot_w(st.g, st.g, grid));
            st.relgrad = res * xnorm / std::max(value(st.f, st.g), 1e-300);
            if (st.relgrad < tol) {
                st.converged = true;
                return st;
            }
            if (res < 0.999 * best) {
                best = res;
                since_best = 0;
            } else if (++since_best > 500) {
                return st; // residual floor reached above tolerance
            }

            bool accepted = false;
            for (int bt = 0; bt < 30; ++bt) {
                for (std::size_t i = 0; i < n; ++i) {
                    ft[i] = std::max(st.f[i] - tau * pf[i], 0.0);
                    gt[i] = std::max(st.g[i] - tau * pg[i], 0.0);
                }
                const double res_new = residual(ft, gt, pf_new, pg_new);
                if (std::isfinite(res_new) && res_new <= 1.2 * res) {
                    // BB2 step from the accepted displacement
                    double sy = 0.0, yy = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double sfi = ft[i] - st.f[i], sgi = gt[i] - st.g[i];
                        const double yfi = pf_new[i] - pf[i], ygi = pg_new[i] - pg[i];
                        sy += (sfi * yfi + sgi * ygi) * grid.quad_weights[i];
                        yy += (yfi * yfi + ygi * ygi) * grid.quad_weights[i];
                    }
                    if (yy > 0.0 && sy > 0.0) tau = std::min(sy / yy, 50.0 * t_accepted);
                    st.f.swap(ft);
                    st.g.swap(gt);
                    pf.swap(pf_new);
                    pg.swap(pg_new);
                    res = res_new;
                    accepted = true;
                    break;
                }
                tau *= 0.5;
                if (tau < 1e-8 * t_accepted) break;
            }
            if (!accepted) return st;
        }
    }
    return st;
}

// Damped Newton iterations on the radial stationary system
//   -1/2 Δφ + ωφ - w φψ = 0,  -κ/2 Δψ + (2ω+γ)ψ - 1/2 w φ² = 0,
// with a 2x2 block-tridiagonal direct solve. Quadratic convergence from the
// descent output; returns the final weighted residual norm.
double newton_polish_pair(RVec& f, RVec& g, const Grid& grid, const RVec& w,
                          const PhysParams& p, int max_newton = 20) {
    const std::size_t n = f.size();
    auto resid = [&](const RVec& a, const RVec& b, RVec& rf, RVec& rg) {
        RVec la = laplacian(a, grid), lb = laplacian(b, grid);
        for (std::size_t i = 0; i < n; ++i) {
            rf[i] = -0.5 * la[i] + p.omega * a[i] - w[i] * a[i] * b[i];
            rg[i] = -0.5 * p.kappa * lb[i] + (2.0 * p.omega + p.gamma) * b[i] -
                    0.5 * w[i] * a[i] * a[i];
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += (rf[i] * rf[i] + rg[i] * rg[i]) * grid.quad_weights[i];
        return std::sqrt(acc);
    };

    RVec rf(n), rg(n), rf2(n), rg2(n);
    double res = resid(f, g, rf, rg);
    const double scale = p.omega * std::sqrt(norm_sq(f, grid) + norm_sq(g, grid));

    // block-tridiagonal work arrays: D̃ (2x2 per node) and r̃
    std::vector<double> Da(n), Db(n), Dc(n), Dd(n), r0(n), r1(n), df(n), dg(n);
    for (int it = 0; it < max_newton; ++it) {
        if (res < 1e-14 * scale) break;
        // assemble and factor in one forward sweep
        for (std::size_t i = 0; i < n; ++i) {
            Da[i] = -0.5 * grid.fv_diag[i] + p.omega - w[i] * g[i];
            Db[i] = -w[i] * f[i];
            Dc[i] = -w[i] * f[i];
            Dd[i] = -0.5 * p.kappa * grid.fv_diag[i] + (2.0 * p.omega + p.gamma);
            r0[i] = rf[i];
            r1[i] = rg[i];
            if (i > 0) {
                const double lf = -0.5 * grid.fv_lower[i];
                const double lg = -0.5 * p.kappa * grid.fv_lower[i];
                const double uf = -0.5 * grid.fv_upper[i - 1];
                const double ug = -0.5 * p.kappa * grid.fv_upper[i - 1];
                // M = L_i * inv(D̃_{i-1}); L is diagonal (lf, lg)
                const double det = Da[i - 1] * Dd[i - 1] - Db[i - 1] * Dc[i - 1];
                const double ia = Dd[i - 1] / det, ib = -Db[i - 1] / det;
                const double ic = -Dc[i - 1] / det, id = Da[i - 1] / det;
                const double m00 = lf * ia, m01 = lf * ib;
                const double m10 = lg * ic, m11 = lg * id;
                Da[i] -= m00 * uf;
                Db[i] -= m01 * ug;
                Dc[i] -= m10 * uf;
                Dd[i] -= m11 * ug;
                r0[i] -= m00 * r0[i - 1] + m01 * r1[i - 1];
                r1[i] -= m10 * r0[i - 1] + m11 * r1[i - 1];
            }
        }
        {
            const std::size_t i = n - 1;
            const double det = Da[i] * Dd[i] - Db[i] * Dc[i];
            df[i] = (Dd[i] * r0[i] - Db[i] * r1[i]) / det;
            dg[i] = (-Dc[i] * r0[i] + Da[i] * r1[i]) / det;
        }
        for (std::size_t i = n - 1; i-- > 0;) {
            const double uf = -0.5 * grid.fv_upper[i];
            const double ug = -0.5 * p.kappa * grid.fv_upper[i];
            const double b0 = r0[i] - uf * df[i + 1];
            const double b1 = r1[i] - ug * dg[i + 1];
            const double det = Da[i] * Dd[i] - Db[i] * Dc[i];
            df[i] = (Dd[i] * b0 - Db[i] * b1) / det;
            dg[i] = (-Dc[i] * b0 + Da[i] * b1) / det;
        }
        // damped update
        double step = 1.0;
        bool ok = false;
        RVec ft(n), gt(n);
        for (int bt = 0; bt < 6; ++bt) {
            for (std::size_t i = 0; i < n; ++i) {
                ft[i] = f[i] - step * df[i];
                gt[i] = g[i] - step * dg[i];
            }
            const double res2 = resid(ft, gt, rf2, rg2);
            if (std::isfinite(res2) && res2 < res) {
                f.swap(ft);
                g.swap(gt);
                rf.swap(rf2);
                rg.swap(rg2);
                res = res2;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
    }
    return res / std::max(scale, 1e-300);
}

// Scalar analogue for  -1/2 ΔQ + ωQ - w Q² = 0.
double newton_polish_scalar(RVec& q, const Grid& grid, const RVec& w, double omega,
                            int max_newton = 20) {
    const std::size_t n = q.size();
    auto resid = [&](const RVec& a, RVec& r) {
        RVec la = laplacian(a, grid);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = -0.5 * la[i] + omega * a[i] - w[i] * a[i] * a[i];
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += r[i] * r[i] * grid.quad_weights[i];
        return std::sqrt(acc);
    };
    RVec r(n), r2(n), lo(n), di(n), up(n), dq(n), qt(n);
    double res = resid(q, r);
    const double scale = omega * std::sqrt(norm_sq(q, grid));
    for (int it = 0; it < max_newton; ++it) {
        if (res < 1e-14 * scale) break;
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = -0.5 * grid.fv_lower[i];
            di[i] = -0.5 * grid.fv_diag[i] + omega - 2.0 * w[i] * q[i];
            up[i] = -0.5 * grid.fv_upper[i];
            dq[i] = r[i];
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double m = lo[i] / di[i - 1];
            di[i] -= m * up[i - 1];
            dq[i] -= m * dq[i - 1];
        }
        dq[n - 1] /= di[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) dq[i] = (dq[i] - up[i] * dq[i + 1]) / di[i];
        double step = 1.0;
        bool ok = false;
        for (int bt = 0; bt < 6; ++bt) {
            for (std::size_t i = 0; i < n; ++i) qt[i] = q[i] - step * dq[i];
            const double resn = resid(qt, r2);
            if (std::isfinite(resn) && resn < res) {
                q.swap(qt);
                r.swap(r2);
                res = resn;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
    }
    return res / std::max(scale, 1e-300);
}

double tail_fit_rate(const RVec& prof, const Grid& g) {
    const double r_lo = 0.5 * g.extent, r_hi = 0.9 * g.extent;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node_r(i);
        if (r < r_lo || r > r_hi) continue;
        const double v = prof[i];
        if (v <= 1e-13) continue;
        const double y = std::log(v);
        sx += r;
        sy += y;
        sxx += r * r;
        sxy += r * y;
        ++npts;
    }
    if (npts < 8) throw TailBelowFloor("decay_fit: tail window is below the 1e-13 noise floor");
    const double denom = npts * sxx - sx * sx;
    const double slope = (npts * sxy - sx * sy) / denom;
    return -slope;
}

FieldPair complexify(const RVec& f, const RVec& g, GridPtr grid) {
    FieldPair out;
    out.grid = std::move(grid);
    out.u.assign(f.begin(), f.end());
    out.v.assign(g.begin(), g.end());
    return out;
}

} // namespace

GroundStateResult minimize_nehari(const PhysParams& p, GridPtr grid, const SolverOptions& opts,
                                  const FieldPair* init) {
    p.validate(/*allow_zero_alpha=*/true);
    p.validate_frequency();
    const Grid& g = *grid;
    PairFns fns{g, resolve_weight(g, p.alpha), p};

    auto [f, gg] = make_init(p, g, opts, init);
    if (!(fns.P(f, gg) > 0.0))
        throw NonpositiveP("minimize_nehari: init has P <= 0 after positivity projection");

    auto value = [&](const RVec& a, const RVec& b) {
        const double S = fns.S(a, b), P = fns.P(a, b);
        if (!(P > 0.0)) return std::numeric_limits<double>::infinity();
        return S * S * S / (54.0 * P * P);
    };
    auto gradient = [&](const RVec& a, const RVec& b, RVec& ga, RVec& gb) {
        const double S = fns.S(a, b), P = fns.P(a, b);
        const double pref = S * S / (54.0 * P * P);
        const double ratio = 2.0 * S / P;
        RVec la = laplacian(a, g), lb = laplacian(b, g);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double dS_a = -2.0 * la[i] + 4.0 * p.omega * a[i];
            const double dS_b = -2.0 * p.kappa * lb[i] + (8.0 * p.omega + 4.0 * p.gamma) * b[i];
            const double dP_a = 2.0 * fns.w[i] * a[i] * b[i];
            const double dP_b = fns.w[i] * a[i] * a[i];
            ga[i] = pref * (3.0 * dS_a - ratio * dP_a);
            gb[i] = pref * (3.0 * dS_b - ratio * dP_b);
        }
    };
    auto precondition = [&](RVec& ga, RVec& gb) {
        ga = solve_helmholtz(4.0 * p.omega, 2.0, ga, g);
        gb = solve_helmholtz(4.0 * (2.0 * p.omega + p.gamma), 2.0 * p.kappa, gb, g);
    };

    DescentState st;
    auto rescale_nehari = [&] {
        // B(λf, λg) = 0 at λ = S/(3P)
        const double S = fns.S(st.f, st.g), P = fns.P(st.f, st.g);
        const double lam = S / (3.0 * P);
        for (auto& x : st.f) x *= lam;
        for (auto& x : st.g) x *= lam;
    };
    if (g.kind == GridKind::Radial) {
        // the descent is a globalizer here; Newton does the sharpening. The
        // Nehari rescale first pins the amplitude (J is amplitude-invariant,
        // the stationary equation is not).
        st = project_descend(g, std::move(f), std::move(gg), value, gradient, precondition,
                             std::max(opts.tol, 1e-6), std::min(opts.max_iters, 5000));
        rescale_nehari();
        const double rel = newton_polish_pair(st.f, st.g, g, fns.w, p);
        // the residual evaluation itself has an eps/h² rounding floor
        const double h = g.spacing[0];
        st.converged = rel < std::max(1e-9, 1e-15 / (h * h));
    } else {
        st = project_descend(g, std::move(f), std::move(gg), value, gradient, precondition,
                             opts.tol, opts.max_iters);
    }
    rescale_nehari();

    GroundStateResult out;
    out.fields = complexify(st.f, st.g, grid);
    out.iterations = st.iterations;
    out.converged = st.converged;
    const ActionSet act = action_nehari(out.fields, p);
    out.d_omega = act.A_omega;
    {
        const double S2 = act.S;
        const double P2 = invariants(out.fields, p).P;
        out.c_omega = S2 * S2 * S2 / (54.0 * P2 * P2);
    }
    out.C_GN = weinstein(out.fields, p);
    {
        const InvariantSet inv = invariants(out.fields, p);
        const double r1_den = 0.5 * inv.K + p.omega * inv.M + std::abs(p.gamma) * inv.v_mass;
        const double r1 = std::abs(0.5 * inv.K + p.omega * inv.M + p.gamma * inv.v_mass -
                                   1.5 * inv.P) /
                          r1_den;
        const double r2 = std::abs(inv.K - 0.5 * p.d2a() * inv.P) / inv.K;
        out.pohozaev_res = {r1, r2};
    }
    {
        FieldPair grad = action_gradient(out.fields, p);
        double num = norm_sq(grad.u, g) + norm_sq(grad.v, g);
        double den = p.omega * p.omega * (norm_sq(out.fields.u, g) + norm_sq(out.fields.v, g));
        out.eq_residual = std::sqrt(num / std::max(den, 1e-300));
        if (g.kind == GridKind::Radial) {
            const double h = g.spacing[0];
            out.converged = st.converged && out.eq_residual < std::max(1e-8, 1e-14 / (h * h));
        }
    }
    if (g.kind == GridKind::Radial) {
        try {
            out.decay_rate = tail_fit_rate(st.f, g);
        } catch (const TailBelowFloor&) {
            out.decay_rate = 0.0;
        }
    }
    return out;
}

std::pair<double, double> pohozaev_residuals(const GroundStateResult& gs, const PhysParams& p) {
    if (!gs.converged) throw NotConverged("pohozaev_residuals: solver did not converge");
    const InvariantSet inv = invariants(gs.fields, p);
    const double r1_den = 0.5 * inv.K + p.omega * inv.M + std::abs(p.gamma) * inv.v_mass;
    const double r1 =
        std::abs(0.5 * inv.K + p.omega * inv.M + p.gamma * inv.v_mass - 1.5 * inv.P) / r1_den;
    const double r2 = std::abs(inv.K - 0.5 * p.d2a() * inv.P) / inv.K;
    return {r1, r2};
}

double gn_constant(const GroundStateResult& gs, const PhysParams& p) {
    if (!gs.converged) throw NotConverged("gn_constant: solver did not converge");
    return weinstein(gs.fields, p);
}

double gn_constant_crosscheck(const GroundStateResult& gs, const PhysParams& p) {
    if (!gs.converged) throw NotConverged("gn_constant_crosscheck: solver did not converge");
    const InvariantSet inv = invariants(gs.fields, p);
    const double d2a = p.d2a();
    if (d2a > 4.0) {
        const double lam = inv.K * std::pow(inv.M, p.sigma());
        return (2.0 / d2a) * std::pow(lam, -0.25 * (d2a - 4.0));
    }
    if (d2a == 4.0) return 0.5 / std::sqrt(inv.M);
    return weinstein(gs.fields, p);
}

ScalarQResult scalar_Q(const PhysParams& p, GridPtr grid, const SolverOptions& opts) {
    p.validate(/*allow_zero_alpha=*/true);
    if (!(p.omega > 0.0)) throw InvalidFrequency("scalar_Q: omega must be > 0");
    const Grid& g = *grid;
    const RVec w = resolve_weight(g, p.alpha);

    auto S_q = [&](const RVec& q) { return 0.5 * grad_norm_sq(q, g) + p.omega * norm_sq(q, g); };
    auto P_q = [&](const RVec& q) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += w[i] * q[i] * q[i] * q[i] * g.quad_weights[i];
        return acc;
    };
    auto value = [&](const RVec& q, const RVec&) {
        const double S = S_q(q), P = P_q(q);
        if (!(P > 0.0)) return std::numeric_limits<double>::infinity();
        return S * S * S / (6.0 * P * P);
    };
    auto gradient = [&](const RVec& q, const RVec&, RVec& gq, RVec& gz) {
        const double S = S_q(q), P = P_q(q);
        const double pref = S * S / (6.0 * P * P);
        const double ratio = 2.0 * S / P;
        RVec lq = laplacian(q, g);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double dS = -lq[i] + 2.0 * p.omega * q[i];
            const double dP = 3.0 * w[i] * q[i] * q[i];
            gq[i] = pref * (3.0 * dS - ratio * dP);
        }
        std::fill(gz.begin(), gz.end(), 0.0);
    };
    auto precondition = [&](RVec& gq, RVec&) {
        gq = solve_helmholtz(2.0 * p.omega, 1.0, gq, g);
    };

    RVec q0 = gaussian_profile(g, 0.5 * p.omega, 1.0);
    RVec z0(g.size(), 0.0);
    if (!(P_q(q0) > 0.0)) throw NonpositiveP("scalar_Q: init has P <= 0");
    DescentState st;
    if (g.kind == GridKind::Radial) {
        st = project_descend(g, std::move(q0), std::move(z0), value, gradient, precondition,
                             std::max(opts.tol, 1e-6), std::min(opts.max_iters, 5000));
        const double pin = S_q(st.f) / P_q(st.f);
        for (auto& x : st.f) x *= pin;
        const double rel = newton_polish_scalar(st.f, g, w, p.omega);
        const double h = g.spacing[0];
        st.converged = rel < std::max(1e-9, 1e-15 / (h * h));
    } else {
        st = project_descend(g, std::move(q0), std::move(z0), value, gradient, precondition,
                             opts.tol, opts.max_iters);
    }

    const double lam = S_q(st.f) / P_q(st.f);
    for (auto& x : st.f) x *= lam;

    ScalarQResult out;
    out.Q = st.f;
    out.grid = grid;
    out.iterations = st.iterations;
    out.converged = st.converged;
    out.action = S_q(st.f) / 6.0; // A = S/6 on the Nehari set
    {
        RVec lq = laplacian(st.f, g);
        RVec resid(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            resid[i] = 0.5 * lq[i] - p.omega * st.f[i] + w[i] * st.f[i] * st.f[i];
        out.eq_residual =
            std::sqrt(norm_sq(resid, g) / std::max(p.omega * p.omega * norm_sq(st.f, g), 1e-300));
    }
    return out;
}

double mountain_pass_level(const GroundStateResult& gs, const PhysParams& p) {
    if (!gs.converged) throw NotConverged("mountain_pass_level: solver did not converge");
    const ActionSet act = action_nehari(gs.fields, p);
    const double P = invariants(gs.fields, p).P;
    const double c = act.S * act.S * act.S / (54.0 * P * P);
    if (std::abs(c - gs.d_omega) > 1e-10 * std::abs(gs.d_omega))
        throw std::logic_error("mountain_pass_level: ray maximum does not match d_omega");
    return c;
}

double decay_fit_field(const CVec& f, const Grid& g) {
    if (g.kind != GridKind::Radial)
        throw ConfigError("decay_fit: requires a radial grid");
    RVec prof(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) prof[i] = std::abs(f[i]);
    return tail_fit_rate(prof, g);
}

double decay_fit(const GroundStateResult& gs) {
    return decay_fit_field(gs.fields.u, *gs.fields.grid);
}

std::vector<AlphaLimitRow> alpha_limit(const PhysParams& p0, const std::vector<double>& alphas,
                                       GridPtr grid, const SolverOptions& opts) {
    if (alphas.empty()) throw ConfigError("alpha_limit: empty alpha list");
    for (std::size_t i = 1; i < alphas.size(); ++i)
        if (!(alphas[i] < alphas[i - 1]))
            throw ConfigError("alpha_limit: alpha list must be strictly descending");
    if (alphas.back() < 0.0) throw ConfigError("alpha_limit: alpha must be >= 0");

    std::vector<GroundStateResult> results;
    results.reserve(alphas.size());
    for (double a : alphas) {
        PhysParams p = p0;
        p.alpha = a;
        results.push_back(minimize_nehari(p, grid, opts));
    }
    GroundStateResult reference;
    if (alphas.back() == 0.0) {
        reference = results.back();
    } else {
        PhysParams p = p0;
        p.alpha = 0.0;
        reference = minimize_nehari(p, grid, opts);
    }
    std::vector<AlphaLimitRow> rows;
    rows.reserve(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        rows.push_back({alphas[i], results[i].d_omega,
                        h1_distance(results[i].fields, reference.fields)});
    }
    return rows;
}

DMinusResult compute_d_minus(const PhysParams& p, GridPtr grid, const SolverOptions& opts,
                             const FieldPair* init, std::optional<double> d_omega_hint) {
    p.validate();
    p.validate_frequency();
    const double d2a = p.d2a();
    if (d2a < 4.0)
        throw ConfigError("compute_d_minus: requires d + 2*alpha >= 4");

    double d_omega;
    if (d_omega_hint) {
        d_omega = *d_omega_hint;
    } else {
        d_omega = minimize_nehari(p, grid, opts).d_omega;
    }

    if (d2a == 4.0) {
        // On {G=0}, A_ω = ωM + γ||ψ||²; for γ=0 the GN inequality pins the
        // exact mass floor ω/(4 C_GN²), attained by the GN optimizer family.
        if (p.gamma != 0.0)
            throw ConfigError("compute_d_minus: mass-critical case requires gamma = 0");
        PhysParams pg = p;
        pg.gamma = 0.0;
        pg.omega = 1.0;
        const double c = minimize_nehari(pg, grid, opts).C_GN;
        const double d_minus = p.omega / (4.0 * c * c);
        return {d_minus, std::min(d_omega, d_minus)};
    }

    const Grid& g = *grid;
    PairFns fns{g, resolve_weight(g, p.alpha), p};
    const double m = 4.0 / (d2a - 4.0);
    const double cN = (d2a - 4.0) / (2.0 * d2a);

    auto reduced = [&](const RVec& a, const RVec& b, double& K, double& P, double& T) {
        K = fns.K(a, b);
        P = fns.P(a, b);
        T = (P > 0.0) ? std::pow(K, 1.0 + m) * std::pow(0.5 * d2a * P, -m)
                      : std::numeric_limits<double>::infinity();
    };
    auto value = [&](const RVec& a, const RVec& b) {
        double K, P, T;
        reduced(a, b, K, P, T);
        if (!(P > 0.0)) return std::numeric_limits<double>::infinity();
        return cN * T + p.omega * fns.M(a, b) + p.gamma * norm_sq(b, g);
    };
    auto gradient = [&](const RVec& a, const RVec& b, RVec& ga, RVec& gb) {
        double K, P, T;
        reduced(a, b, K, P, T);
        RVec la = laplacian(a, g), lb = laplacian(b, g);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double dK_a = -2.0 * la[i];
            const double dK_b = -2.0 * p.kappa * lb[i];
            const double dP_a = 2.0 * fns.w[i] * a[i] * b[i];
            const double dP_b = fns.w[i] * a[i] * a[i];
            ga[i] = cN * T * ((1.0 + m) * dK_a / K - m * dP_a / P) + 2.0 * p.omega * a[i];
            gb[i] = cN * T * ((1.0 + m) * dK_b / K - m * dP_b / P) +
                    (4.0 * p.omega + 2.0 * p.gamma) * b[i];
        }
    };
    auto precondition = [&](RVec& ga, RVec& gb) {
        ga = solve_helmholtz(2.0 * p.omega, 1.0, ga, g);
        gb = solve_helmholtz(4.0 * p.omega + 2.0 * p.gamma, p.kappa, gb, g);
    };

    auto [f, gg] = make_init(p, g, opts, init);
    if (!(fns.P(f, gg) > 0.0))
        throw NoZeroCrossing("compute_d_minus: P <= 0 after positivity projection");
    DescentState st = project_descend(g, std::move(f), std::move(gg), value, gradient,
                                      precondition, opts.tol, opts.max_iters);
    const double d_minus = value(st.f, st.g);
    return {d_minus, std::min(d_omega, d_minus)};
}

double h1_norm(const FieldPair& a) {
    const Grid& g = *a.grid;
    return std::sqrt(norm_sq(a.u, g) + grad_norm_sq(a.u, g) + norm_sq(a.v, g) +
                     grad_norm_sq(a.v, g));
}

double h1_distance(const FieldPair& a, const FieldPair& b) {
    if (a.grid.get() != b.grid.get())
        throw ParamsMismatch("h1_distance: states live on different grids");
    FieldPair diff;
    diff.grid = a.grid;
    diff.u.resize(a.u.size());
    diff.v.resize(a.v.size());
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        diff.u[i] = a.u[i] - b.u[i];
        diff.v[i] = a.v[i] - b.v[i];
    }
    return h1_norm(diff);
}

} // namespace inls
