#include <doctest.h>

#include <cmath>

#include "inlslab/errors.hpp"
#include "inlslab/evolution.hpp"
#include "inlslab/ground_state.hpp"

using namespace inls;

namespace {

GridPtr radial(int d, double extent, int n, double alpha) {
    GridSpec spec;
    spec.kind = GridKind::Radial;
    spec.d = d;
    spec.extent = extent;
    spec.counts = {n};
    spec.alpha = alpha;
    return build_grid(spec);
}

GridPtr cartesian2(double extent, int n, double alpha) {
    GridSpec spec;
    spec.kind = GridKind::Cartesian;
    spec.d = 2;
    spec.extent = extent;
    spec.counts = {n, n};
    spec.alpha = alpha;
    return build_grid(spec);
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

FieldPair gaussian_pair(GridPtr g, double amp, bool phased = false) {
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_radius(i);
        const double env = amp * std::exp(-r * r);
        if (phased) {
            s.u[i] = std::polar(env, 0.4 * r * r * std::exp(-0.2 * r * r));
            s.v[i] = std::polar(0.6 * env, -0.3 * r);
        } else {
            s.u[i] = env;
            s.v[i] = 0.6 * env;
        }
    }
    return s;
}

double state_dist(const FieldPair& a, const FieldPair& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i)
        acc += (std::norm(a.u[i] - b.u[i]) + std::norm(a.v[i] - b.v[i])) *
               a.grid->quad_weights[i];
    return std::sqrt(acc);
}

double state_norm(const FieldPair& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i)
        acc += (std::norm(a.u[i]) + std::norm(a.v[i])) * a.grid->quad_weights[i];
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("strang_step: dt -> 0 continuity") {
    auto g = radial(2, 12.0, 512, 1.0);
    PhysParams p = params(2, 1.0, 1.0, 0.3);
    FieldPair s = gaussian_pair(g, 1.0, true);
    FieldPair out = strang_step(s, p, 1e-12);
    CHECK(state_dist(out, s) / state_norm(s) < 1e-10);
}

TEST_CASE("strang_step: u = 0 gives the exact unitary linear flow for v") {
    GridSpec spec;
    spec.kind = GridKind::Cartesian;
    spec.d = 1;
    spec.extent = 10.0;
    spec.counts = {128};
    spec.alpha = 0.5;
    auto g = build_grid(spec);
    PhysParams p = params(1, 0.5, 0.8, 0.7);
    FieldPair s;
    s.grid = g;
    s.u.assign(g->size(), 0.0);
    s.v.resize(g->size());
    for (std::size_t j = 0; j < g->size(); ++j) {
        const double x = g->node_x(0, j);
        s.v[j] = std::polar(std::exp(-0.3 * x * x), 0.8 * x);
    }
    const double n0 = norm_sq(s.v, *g);
    FieldPair out = s;
    for (int k = 0; k < 200; ++k) out = strang_step(out, p, 1e-2);
    CHECK(std::abs(norm_sq(out.v, *g) - n0) / n0 < 1e-13);
    for (std::size_t j = 0; j < g->size(); ++j) CHECK(std::abs(out.u[j]) == 0.0);
}

TEST_CASE("strang order: measured against a fine-dt reference (d=2, alpha=1)") {
    auto g = cartesian2(8.0, 64, 1.0);
    PhysParams p = params(2, 1.0, 1.0, 0.2);
    FieldPair s0 = gaussian_pair(g, 1.0, true);
    const double t_end = 0.5;
    auto run = [&](double dt) {
        FieldPair s = s0;
        const long steps = std::lround(t_end / dt);
        for (long k = 0; k < steps; ++k) s = strang_step(s, p, dt);
        return s;
    };
    FieldPair ref = run(2.5e-4); // dt/16 of the coarsest rung
    const double e1 = state_dist(run(4e-3), ref);
    const double e2 = state_dist(run(2e-3), ref);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("standing wave: K drift below 1e-6 and M conserved" * doctest::timeout(120)) {
    auto g = radial(2, 16.0, 256, 1.0);
    PhysParams p = params(2, 1.0, 1.0, 0.0, 1.0);
    GroundStateResult gs = minimize_nehari(p, g);
    REQUIRE(gs.converged);
    EvolveConfig cfg;
    cfg.p = p;
    cfg.dt = 1e-5;
    cfg.t_end = 1.0;
    cfg.dt_min = 1e-9;
    cfg.diag_stride = 1000;
    cfg.cutoff_R = 4.0;
    Trajectory tr = evolve(gs.fields, cfg);
    REQUIRE(tr.status == EvolveStatus::Completed);
    const double k0 = tr.diag.front().K, m0 = tr.diag.front().M;
    const double lm0 = tr.diag.front().localmass;
    double kd = 0.0, md = 0.0, lmd = 0.0;
    for (const auto& r : tr.diag) {
        kd = std::max(kd, std::abs(r.K - k0) / k0);
        md = std::max(md, std::abs(r.M - m0) / m0);
        lmd = std::max(lmd, std::abs(r.localmass - lm0) / lm0);
    }
    CHECK(kd < 1e-6);
    CHECK(md < 1e-8);
    CHECK(lmd < 1e-6); // stationary modulus keeps the local mass constant
}

TEST_CASE("mass-subcritical large data runs globally with bounded K") {
    auto g = radial(2, 16.0, 512, 0.5);
    PhysParams p = params(2, 0.5, 1.0, 0.0);
    FieldPair s = gaussian_pair(g, 2.0);
    EvolveConfig cfg;
    cfg.p = p;
    cfg.dt = 2e-4;
    cfg.t_end = 1.5;
    cfg.dt_min = 1e-7;
    cfg.diag_stride = 100;
    cfg.cutoff_R = 4.0;
    Trajectory tr = evolve(s, cfg);
    CHECK(tr.status == EvolveStatus::Completed);
    double kmax = 0.0;
    for (const auto& r : tr.diag) kmax = std::max(kmax, r.K);
    CHECK(kmax < 20.0 * tr.diag.front().K);

    // G(0) > 0 for this data, so the negative-uniform-bound flag stays false
    BlowupReport rep = blowup_monitor(tr, cfg);
    CHECK(tr.diag.front().G > 0.0);
    CHECK(!rep.negative_uniform_bound);
}

TEST_CASE("scaled ground state blows up and the monitor sees the K- bound" *
          doctest::timeout(300)) {
    auto g = radial(2, 16.0, 512, 1.0);
    PhysParams p = params(2, 1.0, 0.5, 0.0, 1.0);
    GroundStateResult gs = minimize_nehari(p, g);
    REQUIRE(gs.converged);
    FieldPair s = gs.fields;
    for (auto& z : s.u) z *= 1.2;
    for (auto& z : s.v) z *= 1.2;

    EvolveConfig cfg;
    cfg.p = p;
    cfg.dt = 2e-4;
    cfg.t_end = 30.0;
    cfg.dt_min = 1e-5;
    cfg.diag_stride = 20;
    cfg.cutoff_R = 4.0;
    Trajectory tr = evolve(s, cfg);
    CHECK(tr.status == EvolveStatus::BlowupDetected);
    CHECK(tr.diag.back().K > 5.0 * tr.diag.front().K);

    BlowupReport rep = blowup_monitor(tr, cfg);
    CHECK(rep.negative_uniform_bound);
    const InvariantSet inv0 = invariants(s, p);
    // mass-critical est-GHK bound: G(t) <= 2 H(u0,v0)
    CHECK(inv0.H < 0.0);
    // slack covers the accumulated energy drift of the discrete flow
    CHECK(rep.sup_G <= 2.0 * inv0.H + 1e-3 * std::abs(inv0.H));
    CHECK(rep.delta >= -2.0 * inv0.H - 1e-3 * std::abs(inv0.H));

    // Lemma 9.6-type bound with the computed threshold
    DMinusResult dm = compute_d_minus(p, g, {}, nullptr, gs.d_omega);
    const double bound = 2.0 * (action_nehari(s, p).A_omega - dm.wp);
    CHECK(bound < 0.0);
    CHECK(rep.sup_G <= bound + 1e-3 * std::abs(bound));
}

TEST_CASE("small-data run shows the scattering signature" * doctest::timeout(120)) {
    auto g = radial(3, 32.0, 1024, 1.0);
    PhysParams p = params(3, 1.0, 1.0, 0.0);
    FieldPair s = gaussian_pair(g, 0.1);
    EvolveConfig cfg;
    cfg.p = p;
    cfg.dt = 1e-3;
    cfg.t_end = 2.5;
    cfg.dt_min = 1e-7;
    cfg.diag_stride = 50;
    cfg.cutoff_R = 4.0;
    Trajectory tr = evolve(s, cfg);
    REQUIRE(tr.status == EvolveStatus::Completed);
    ScatteringReport rep = scattering_diagnostics(tr, cfg);
    CHECK(rep.localmass_decreasing);
    CHECK(rep.P_end_ratio < 0.1);
    CHECK(rep.beta_fit <= 1.0 / (1.0 + p.alpha) + 0.1);
    // accumulated space-time norm is nondecreasing
    for (std::size_t i = 1; i < rep.spacetime_series.size(); ++i)
        CHECK(rep.spacetime_series[i] >= rep.spacetime_series[i - 1]);
}

TEST_CASE("virial chain: dV/dt matches the kappa-weighted momentum form at O(dt^2)") {
    auto g = radial(3, 12.0, 2048, 0.5);
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_r(i);
        s.u[i] = std::polar(1.3 * std::exp(-0.8 * r * r), 0.4 * r * r * std::exp(-0.2 * r * r));
        s.v[i] = std::polar(0.7 * std::exp(-1.1 * r * r), -0.3 * r);
    }
    CutoffFn chi = make_cutoff(CutoffKind::ChiR, 4.0, g);
    std::vector<double> dts{4e-3, 2e-3, 1e-3};

    // mass resonance: Vdot and Mchi coincide in formula
    {
        EvolveConfig cfg;
        cfg.p = params(3, 0.5, 0.5, 0.3);
        cfg.t_end = 0.4;
        VirialChainReport rep = verify_virial_chain(s, cfg, chi, dts);
        for (std::size_t k = 0; k < dts.size(); ++k) {
            CHECK(rep.err_vdot[k] == rep.err_mchi[k]); // same formula at kappa = 1/2
            CHECK(rep.err_vdot[k] < 3.0 * dts[k] * dts[k] * rep.scale);
        }
        CHECK(rep.err_vdot[0] / rep.err_vdot[2] > 12.0); // ~dt^2 over a 4x dt range
    }
    // non-resonant: dV/dt tracks the 2-kappa weighted form, not Mchi
    {
        EvolveConfig cfg;
        cfg.p = params(3, 0.5, 1.0, 0.3);
        cfg.t_end = 0.4;
        VirialChainReport rep = verify_virial_chain(s, cfg, chi, dts);
        CHECK(rep.err_vdot.back() < 3.0 * dts.back() * dts.back() * rep.scale);
        CHECK(rep.err_mchi.back() > 100.0 * rep.err_vdot.back());
    }
}

TEST_CASE("virial chain: dM/dt matches 2G for the quadratic weight at O(dt^2)") {
    auto g = radial(3, 12.0, 8192, 0.5);
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_r(i);
        s.u[i] = std::polar(1.3 * std::exp(-0.8 * r * r), 0.4 * r * r * std::exp(-0.2 * r * r));
        s.v[i] = std::polar(0.7 * std::exp(-1.1 * r * r), -0.3 * r);
    }
    CutoffFn quad = make_cutoff(CutoffKind::Quadratic, 1.0, g);
    EvolveConfig cfg;
    cfg.p = params(3, 0.5, 1.0, 0.3);
    cfg.t_end = 0.4;
    std::vector<double> dts{2e-2, 1e-2, 5e-3};
    VirialChainReport rep = verify_virial_chain(s, cfg, quad, dts);
    // log-log slope across the ladder
    const double slope = std::log2(rep.err_rate.front() / rep.err_rate.back()) / 2.0;
    CHECK(slope > 1.7);
    CHECK(slope < 2.3);
}

TEST_CASE("time reversal: forward then backward returns the state at O(dt^3)") {
    auto g = radial(2, 12.0, 512, 1.0);
    PhysParams p = params(2, 1.0, 0.7, 0.4);
    FieldPair s = gaussian_pair(g, 1.0, true);
    auto roundtrip_err = [&](double dt) {
        FieldPair fwd = strang_step(s, p, dt);
        // backward step via conjugation
        for (auto& z : fwd.u) z = std::conj(z);
        for (auto& z : fwd.v) z = std::conj(z);
        FieldPair back = strang_step(fwd, p, dt);
        for (auto& z : back.u) z = std::conj(z);
        for (auto& z : back.v) z = std::conj(z);
        return state_dist(back, s);
    };
    const double e1 = roundtrip_err(2e-3);
    const double e2 = roundtrip_err(1e-3);
    const double nn = state_norm(s);
    CHECK(e1 / nn < 5.0 * 2e-3 * 2e-3 * 2e-3);
    CHECK(e2 / nn < 5.0 * 1e-3 * 1e-3 * 1e-3);
    CHECK(e1 / e2 > 7.0); // at least cubic in dt

}

TEST_CASE("nonlinear substep conserves |u|^2 + 2|v|^2 to RK4 order") {
    auto g = radial(2, 16.0, 256, 1.0);
    PhysParams p = params(2, 1.0, 1.0, 0.0, 1.0);
    GroundStateResult gs = minimize_nehari(p, g);
    REQUIRE(gs.converged);
    auto mass_err_per_step = [&](double dt) {
        FieldPair out = strang_step(gs.fields, p, dt);
        const double m0 = invariants(gs.fields, p).M;
        return std::abs(invariants(out, p).M - m0) / m0;
    };
    const double e1 = mass_err_per_step(2e-3);
    const double e2 = mass_err_per_step(1e-3);
    CHECK(e1 / e2 > 16.0); // ~dt^5 local error
    CHECK(e1 / e2 < 64.0);
}

TEST_CASE("evolve config validation and divergence path") {
    auto g = radial(2, 12.0, 256, 1.0);
    EvolveConfig cfg;
    cfg.p = params(2, 1.0, 1.0, 0.0);
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt = 1e-3;
    cfg.dt_min = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt_min = 1e-8;
    CHECK_NOTHROW(cfg.validate());

    FieldPair bad;
    bad.grid = g;
    bad.u.assign(g->size(), std::numeric_limits<double>::infinity());
    bad.v.assign(g->size(), 0.0);
    Trajectory tr = evolve(bad, cfg);
    CHECK(tr.status == EvolveStatus::Diverged);
}

TEST_CASE("virial chain: dM/dt matches the four-term rate for chi_R at O(dt^2)") {
    auto g = radial(3, 12.0, 4096, 0.5);
    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_r(i);
        s.u[i] = std::polar(1.3 * std::exp(-0.8 * r * r), 0.4 * r * r * std::exp(-0.2 * r * r));
        s.v[i] = std::polar(0.7 * std::exp(-1.1 * r * r), -0.3 * r);
    }
    CutoffFn chi = make_cutoff(CutoffKind::ChiR, 4.0, g);
    EvolveConfig cfg;
    cfg.p = params(3, 0.5, 1.0, 0.3);
    cfg.t_end = 0.4;
    std::vector<double> dts{4e-2, 2e-2, 1e-2};
    VirialChainReport rep = verify_virial_chain(s, cfg, chi, dts);
    const double slope = std::log2(rep.err_rate.front() / rep.err_rate.back()) / 2.0;
    CHECK(slope > 1.7);
    CHECK(slope < 2.3);
}
