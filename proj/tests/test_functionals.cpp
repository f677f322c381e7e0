#include <doctest.h>

#include <cmath>
#include <random>

#include "inlslab/errors.hpp"
#include "inlslab/functionals.hpp"

using namespace inls;

namespace {

GridPtr radial(int d, double extent, int n) {
    GridSpec spec;
    spec.kind = GridKind::Radial;
    spec.d = d;
    spec.extent = extent;
    spec.counts = {n};
    return build_grid(spec);
}

FieldPair gaussian_pair(GridPtr g, double au, double av, double bu = 1.0, double bv = 1.0) {
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_radius(i);
        s.u[i] = au * std::exp(-bu * r * r);
        s.v[i] = av * std::exp(-bv * r * r);
    }
    return s;
}

PhysParams params(int d, double alpha, double kappa, double gamma, double omega = 1.0) {
    PhysParams p;
    p.d = d;
    p.alpha = alpha;
    p.kappa = kappa;
    p.gamma = gamma;
    p.omega = omega;
    return p;
}

FieldPair random_complex_pair(GridPtr g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    const double a1 = coef(rng), a2 = coef(rng), b1 = coef(rng), b2 = coef(rng);
    const double p1 = coef(rng), p2 = coef(rng);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_radius(i);
        const double env = std::exp(-0.8 * r * r);
        s.u[i] = env * Complex(a1 + 0.3 * r * b1, 0.5 * std::sin(p1 * r));
        s.v[i] = env * Complex(a2 - 0.2 * r * b2, 0.4 * std::cos(p2 * r) - 0.4);
    }
    return s;
}

} // namespace

TEST_CASE("invariants: zero state and u=0 structure") {
    auto g = radial(2, 10.0, 512);
    PhysParams p = params(2, 1.0, 1.5, 0.3);
    FieldPair zero;
    zero.grid = g;
    zero.u.assign(g->size(), 0.0);
    zero.v.assign(g->size(), 0.0);
    InvariantSet z = invariants(zero, p);
    CHECK(z.M == 0.0);
    CHECK(z.K == 0.0);
    CHECK(z.P == 0.0);
    CHECK(z.E == 0.0);
    CHECK(z.G == 0.0);

    FieldPair s = gaussian_pair(g, 0.0, 1.3);
    InvariantSet i1 = invariants(s, p);
    CHECK(i1.P == 0.0);
    CHECK(i1.K == doctest::Approx(p.kappa * grad_norm_sq(s.v, *g)).epsilon(1e-14));
    CHECK(i1.G == doctest::Approx(i1.K).epsilon(1e-14));
    CHECK(i1.M == doctest::Approx(2.0 * norm_sq(s.v, *g)).epsilon(1e-14));
}

TEST_CASE("invariants agree with a 4x-resolution quadrature oracle") {
    PhysParams p = params(2, 1.0, 1.0, 0.0);
    auto eval = [&](int n) {
        auto g = radial(2, 12.0, n);
        return invariants(gaussian_pair(g, 1.0, 1.0), p);
    };
    const InvariantSet base = eval(8192);
    const InvariantSet fine = eval(32768);
    CHECK(base.M == doctest::Approx(fine.M).epsilon(1e-6));
    CHECK(base.K == doctest::Approx(fine.K).epsilon(1e-6));
    CHECK(base.P == doctest::Approx(fine.P).epsilon(1e-6));
    CHECK(base.E == doctest::Approx(fine.E).epsilon(1e-5));
}

TEST_CASE("invariant-set identities hold to 1e-12 relative") {
    auto g = radial(3, 10.0, 700);
    for (double gamma : {-0.4, 0.0, 0.7}) {
        PhysParams p = params(3, 0.8, 0.7, gamma);
        FieldPair s = random_complex_pair(g, 11);
        InvariantSet inv = invariants(s, p);
        // recompute from raw integrals
        const double K = grad_norm_sq(s.u, *g) + p.kappa * grad_norm_sq(s.v, *g);
        CHECK(inv.K == doctest::Approx(K).epsilon(1e-12));
        CHECK(inv.E == doctest::Approx(0.5 * inv.K + p.gamma * inv.v_mass - inv.P).epsilon(1e-12));
        CHECK(inv.G ==
              doctest::Approx(0.5 * p.d2a() * (inv.E - p.gamma * inv.v_mass) -
                              0.25 * (p.d2a() - 4.0) * inv.K)
                  .epsilon(1e-12));
        const double H_expect = (gamma >= 0) ? inv.E : inv.E + 0.5 * std::abs(gamma) * inv.M;
        CHECK(inv.H == doctest::Approx(H_expect).epsilon(1e-13));
    }
}

TEST_CASE("action identity A = B/3 + S/6 to 1e-12 relative") {
    auto g = radial(2, 10.0, 600);
    PhysParams p = params(2, 0.6, 0.5, 0.4, 1.3);
    FieldPair zero;
    zero.grid = g;
    zero.u.assign(g->size(), 0.0);
    zero.v.assign(g->size(), 0.0);
    ActionSet az = action_nehari(zero, p);
    CHECK(az.A_omega == 0.0);
    CHECK(az.B_omega == 0.0);
    CHECK(az.S == 0.0);

    FieldPair s = random_complex_pair(g, 3);
    ActionSet a = action_nehari(s, p);
    CHECK(a.A_omega ==
          doctest::Approx(a.B_omega / 3.0 + a.S / 6.0).epsilon(1e-12));
}

TEST_CASE("weinstein: amplitude invariance and zero-state error") {
    auto g = radial(2, 10.0, 400);
    PhysParams p = params(2, 1.0, 2.0, 0.0);
    FieldPair s = gaussian_pair(g, 1.1, 0.8);
    const double w1 = weinstein(s, p);
    FieldPair s2 = s;
    for (auto& z : s2.u) z *= 7.3;
    for (auto& z : s2.v) z *= 7.3;
    CHECK(weinstein(s2, p) == doctest::Approx(w1).epsilon(1e-14));

    FieldPair zero;
    zero.grid = g;
    zero.u.assign(g->size(), 0.0);
    zero.v.assign(g->size(), 0.0);
    CHECK_THROWS_AS(weinstein(zero, p), ZeroState);
}

TEST_CASE("action gradient matches central finite differences at O(eps^2)") {
    auto g = radial(2, 9.0, 300);
    PhysParams p = params(2, 0.9, 1.4, -0.3, 0.9);
    FieldPair s = gaussian_pair(g, 1.0, 0.7, 0.9, 1.2);
    FieldPair h = random_complex_pair(g, 21);
    FieldPair grad = action_gradient(s, p);
    double pairing = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
        pairing += 2.0 * ((std::conj(grad.u[i]) * h.u[i]).real() +
                          (std::conj(grad.v[i]) * h.v[i]).real()) *
                   g->quad_weights[i];
    auto action_at = [&](double eps) {
        FieldPair t = s;
        for (std::size_t i = 0; i < g->size(); ++i) {
            t.u[i] += eps * h.u[i];
            t.v[i] += eps * h.v[i];
        }
        return action_nehari(t, p).A_omega;
    };
    auto fd = [&](double eps) { return (action_at(eps) - action_at(-eps)) / (2.0 * eps); };
    const double e1 = std::abs(fd(1e-3) - pairing);
    const double e2 = std::abs(fd(5e-4) - pairing);
    CHECK(e1 < 1e-4 * std::abs(pairing) + 1e-12);
    CHECK(e2 < 0.3 * e1 + 1e-12); // ~O(eps^2)
}

TEST_CASE("virial moment: real states have zero momentum; mass resonance is exact") {
    auto g = radial(2, 16.0, 800);
    PhysParams p = params(2, 1.0, 0.75, 0.0);
    CutoffFn c = make_cutoff(CutoffKind::ChiR, 4.0, g);

    FieldPair real_state = gaussian_pair(g, 1.0, 0.6);
    VirialMoment vm = virial_moment(real_state, c, p);
    CHECK(vm.Mchi == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(vm.Vdot == doctest::Approx(0.0).epsilon(1e-14));

    PhysParams pr = params(2, 1.0, 0.5, 0.0); // mass resonance
    FieldPair s = random_complex_pair(g, 5);
    VirialMoment vr = virial_moment(s, c, pr);
    // identical formulas at kappa = 1/2
    CHECK(std::abs(vr.Vdot - vr.Mchi) <= 1e-12 * (std::abs(vr.Vdot) + std::abs(vr.Mchi)));
}

TEST_CASE("virial moment matches a dense-quadrature oracle on phased gaussians") {
    // Mchi for u = e^{-r^2} e^{i b x} on a cartesian grid, against 4x resolution
    PhysParams p = params(2, 1.0, 1.0, 0.0);
    auto eval = [&](int n) {
        GridSpec spec;
        spec.kind = GridKind::Cartesian;
        spec.d = 2;
        spec.extent = 8.0;
        spec.counts = {n, n};
        auto g = build_grid(spec);
        FieldPair s;
        s.grid = g;
        s.u.resize(g->size());
        s.v.resize(g->size());
        const std::size_t n1 = static_cast<std::size_t>(g->shape[1]);
        for (std::size_t j = 0; j < g->size(); ++j) {
            const double x = g->node_x(0, j / n1), y = g->node_x(1, j % n1);
            const double env = std::exp(-(x * x + y * y));
            s.u[j] = env * std::polar(1.0, 0.8 * x);
            s.v[j] = 0.5 * env * std::polar(1.0, -0.5 * y);
        }
        CutoffFn c = make_cutoff(CutoffKind::ChiR, 3.0, g);
        return virial_moment(s, c, p).Mchi;
    };
    const double coarse = eval(64), fine = eval(256);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-8));
}

TEST_CASE("virial_rate with quadratic weight returns exactly 2G") {
    auto g = radial(3, 12.0, 500);
    PhysParams p = params(3, 0.5, 0.8, 0.2);
    FieldPair s = random_complex_pair(g, 9);
    CutoffFn c = make_cutoff(CutoffKind::Quadratic, 1.0, g);
    const double rate = virial_rate(s, c, p);
    const double g2 = 2.0 * invariants(s, p).G;
    CHECK(rate == doctest::Approx(g2).epsilon(1e-12));
}
