#include "inlslab/functionals.hpp"

#include <cmath>
#include <numbers>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

void check_state(const FieldPair& s) {
    if (!s.conforms()) throw ConfigError("state does not conform to its grid");
}

double sphere_surface(int d) {
    const double pi = std::numbers::pi;
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        case 4: return 2.0 * pi * pi;
        default: return 8.0 * pi * pi / 3.0;
    }
}

} // namespace

InvariantSet invariants(const FieldPair& state, const PhysParams& p) {
    return invariants(state, p, resolve_weight(*state.grid, p.alpha));
}

InvariantSet invariants(const FieldPair& state, const PhysParams& p, const RVec& w) {
    check_state(state);
    const Grid& g = *state.grid;
    double m_u = 0.0, m_v = 0.0, pval = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double qw = g.quad_weights[i];
        m_u += std::norm(state.u[i]) * qw;
        m_v += std::norm(state.v[i]) * qw;
        pval += w[i] * (state.u[i] * state.u[i] * std::conj(state.v[i])).real() * qw;
    }
    InvariantSet out;
    out.M = m_u + 2.0 * m_v;
    out.v_mass = m_v;
    out.K = grad_norm_sq(state.u, g) + p.kappa * grad_norm_sq(state.v, g);
    out.P = pval;
    out.E = 0.5 * out.K + p.gamma * m_v - out.P;
    out.G = out.K - 0.5 * p.d2a() * out.P;
    out.H = (p.gamma >= 0.0) ? out.E : out.E + 0.5 * std::abs(p.gamma) * out.M;
    return out;
}

ActionSet action_nehari(const FieldPair& state, const PhysParams& p) {
    const InvariantSet inv = invariants(state, p);
    ActionSet out;
    out.S = inv.K + 2.0 * p.omega * inv.M + 2.0 * p.gamma * inv.v_mass;
    out.B_omega = out.S - 3.0 * inv.P;
    out.A_omega = inv.E + p.omega * inv.M;
    return out;
}

double weinstein(const FieldPair& state, const PhysParams& p) {
    const InvariantSet inv = invariants(state, p);
    if (inv.M * inv.K == 0.0) throw ZeroState("weinstein: state has M*K = 0");
    return inv.P / (std::pow(inv.K, 0.25 * p.d2a()) * std::pow(inv.M, 0.25 * (6.0 - p.d2a())));
}

FieldPair action_gradient(const FieldPair& state, const PhysParams& p) {
    check_state(state);
    const Grid& g = *state.grid;
    const RVec w = resolve_weight(g, p.alpha);
    CVec lap_u = laplacian(state.u, g);
    CVec lap_v = laplacian(state.v, g);
    FieldPair out;
    out.grid = state.grid;
    out.u.resize(g.size());
    out.v.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex u = state.u[i], v = state.v[i];
        out.u[i] = -0.5 * lap_u[i] + p.omega * u - w[i] * std::conj(u) * v;
        out.v[i] = -0.5 * p.kappa * lap_v[i] + (2.0 * p.omega + p.gamma) * v -
                   0.5 * w[i] * u * u;
    }
    return out;
}

namespace {

// Exact summation-by-parts face form on radial grids: equals
// -Σ chi [Im(conj(u) Δ_h u) + cv κ Im(conj(v) Δ_h v)] w identically.
double radial_face_moment(const FieldPair& s, const CutoffFn& c, double cv_kappa) {
    const Grid& g = *s.grid;
    const std::size_t n = g.size();
    const double h = g.spacing[0];
    const double sd = sphere_surface(g.d);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double facew = g.face_weights[i];
        const double dchi = (c.chi[i] - c.chi[i - 1]) / h;
        const Complex du = s.u[i] - s.u[i - 1];
        const Complex mu = 0.5 * (s.u[i] + s.u[i - 1]);
        const Complex dv = s.v[i] - s.v[i - 1];
        const Complex mv = 0.5 * (s.v[i] + s.v[i - 1]);
        const double ju = (du * std::conj(mu)).imag();
        const double jv = (dv * std::conj(mv)).imag();
        acc += facew * dchi * (ju + cv_kappa * jv);
    }
    return sd * acc;
}

double cartesian_moment(const FieldPair& s, const CutoffFn& c, double cv_kappa) {
    const Grid& g = *s.grid;
    double acc = 0.0;
    for (int axis = 0; axis < g.d; ++axis) {
        CVec du = gradient_axis(s.u, g, axis);
        CVec dv = gradient_axis(s.v, g, axis);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = g.node_radius(i);
            double xa;
            if (g.d == 1) {
                xa = g.node_x(0, i);
            } else {
                const std::size_t n1 = static_cast<std::size_t>(g.shape[1]);
                xa = (axis == 0) ? g.node_x(0, i / n1) : g.node_x(1, i % n1);
            }
            const double dchi_a = c.dchi[i] * xa / r;
            const double ju = (du[i] * std::conj(s.u[i])).imag();
            const double jv = (dv[i] * std::conj(s.v[i])).imag();
            acc += dchi_a * (ju + cv_kappa * jv) * g.quad_weights[i];
        }
    }
    return acc;
}

} // namespace

VirialMoment virial_moment(const FieldPair& state, const CutoffFn& c, const PhysParams& p) {
    check_state(state);
    if (c.grid.get() != state.grid.get())
        throw ParamsMismatch("virial_moment: cutoff sampled on a different grid");
    const Grid& g = *state.grid;
    VirialMoment out;
    double vacc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        vacc += c.chi[i] * (std::norm(state.u[i]) + 2.0 * std::norm(state.v[i])) * g.quad_weights[i];
    out.V = vacc;
    if (g.kind == GridKind::Radial) {
        out.Mchi = radial_face_moment(state, c, 1.0);
        out.Vdot = (p.kappa == 0.5) ? out.Mchi : radial_face_moment(state, c, 2.0 * p.kappa);
    } else {
        out.Mchi = cartesian_moment(state, c, 1.0);
        out.Vdot = (p.kappa == 0.5) ? out.Mchi : cartesian_moment(state, c, 2.0 * p.kappa);
    }
    return out;
}

double virial_rate(const FieldPair& state, const CutoffFn& c, const PhysParams& p) {
    check_state(state);
    if (c.kind == CutoffKind::Quadratic) return 2.0 * invariants(state, p).G;
    const Grid& g = *state.grid;
    const RVec w = resolve_weight(g, p.alpha);

    // (1/4) ∫ Δ²chi (|u|² + κ|v|²) and the weighted nonlinear term
    double mass_term = 0.0, nonlin = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double qw = g.quad_weights[i];
        mass_term += c.bilap[i] * (std::norm(state.u[i]) + p.kappa * std::norm(state.v[i])) * qw;
        const double r = g.node_radius(i);
        const double coef = c.d2chi[i] + (g.d - 1 + 2.0 * p.alpha) * c.dchi[i] / r;
        nonlin += coef * w[i] * (state.u[i] * state.u[i] * std::conj(state.v[i])).real() * qw;
    }

    double grad_terms = 0.0;
    if (g.kind == GridKind::Radial) {
        // radial data: chi'/r |∇u|² + (chi''/r² - chi'/r³)|x·∇u|² = chi'' |u_r|²
        const std::size_t n = g.size();
        const double h = g.spacing[0];
        const double sd = sphere_surface(g.d);
        double acc = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double rf = g.face_r(i);
            const double facew = g.face_weights[i];
            const double d2 = c.d2chi_at(rf);
            const double su = std::norm(state.u[i] - state.u[i - 1]);
            const double sv = std::norm(state.v[i] - state.v[i - 1]);
            acc += facew * d2 * (su + p.kappa * sv);
        }
        grad_terms = sd * acc / h;
    } else {
        std::vector<CVec> du, dv;
        for (int a = 0; a < g.d; ++a) {
            du.push_back(gradient_axis(state.u, g, a));
            dv.push_back(gradient_axis(state.v, g, a));
        }
        const std::size_t n1 = (g.d == 2) ? static_cast<std::size_t>(g.shape[1]) : 1;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = g.node_radius(i);
            double gu = 0.0, gv = 0.0; // |∇u|², |∇v|²
            Complex xu = 0.0, xv = 0.0; // x·∇u, x·∇v
            for (int a = 0; a < g.d; ++a) {
                const double xa = (g.d == 1) ? g.node_x(0, i)
                                 : (a == 0) ? g.node_x(0, i / n1)
                                            : g.node_x(1, i % n1);
                gu += std::norm(du[static_cast<std::size_t>(a)][i]);
                gv += std::norm(dv[static_cast<std::size_t>(a)][i]);
                xu += xa * du[static_cast<std::size_t>(a)][i];
                xv += xa * dv[static_cast<std::size_t>(a)][i];
            }
            const double t2 = (c.dchi[i] / r) * (gu + p.kappa * gv);
            const double t3 =
                (c.d2chi[i] / (r * r) - c.dchi[i] / (r * r * r)) * (std::norm(xu) + p.kappa * std::norm(xv));
            grad_terms += (t2 + t3) * g.quad_weights[i];
        }
    }

    return 0.25 * mass_term + grad_terms - 0.5 * nonlin;
}

double local_mass(const FieldPair& state, double R) {
    check_state(state);
    const Grid& g = *state.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.node_radius(i) <= R)
            acc += (std::norm(state.u[i]) + 2.0 * std::norm(state.v[i])) * g.quad_weights[i];
    }
    return acc;
}

double weighted_cubic(const FieldPair& state, const PhysParams& p) {
    return weighted_cubic(state, p, resolve_weight(*state.grid, p.alpha));
}

double weighted_cubic(const FieldPair& state, const PhysParams& p, const RVec& w) {
    check_state(state);
    const Grid& g = *state.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double au = std::abs(state.u[i]), av = std::abs(state.v[i]);
        acc += w[i] * (au * au * au + av * av * av) * g.quad_weights[i];
    }
    return acc;
}

} // namespace inls
