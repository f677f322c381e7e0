#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "inlslab/config.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/io.hpp"

using namespace inls;

namespace {
const char* kSample = R"(# sample run config
[params]
d = 2
alpha = 1.0
kappa = 0.5
gamma = 0.0
omega = 1.0

[grid]
kind = radial
extent = 16.0
counts = 1024

[solver]
tol = 1e-8
max_iters = 20000
init = gaussian
seed = 7

[evolve]
dt = 2e-4          # step
t_end = 1.5
dt_min = 1e-7
diag_stride = 10
cutoff_r = 4.0

[output]
dir = out
formats = csv,json
)";
} // namespace

TEST_CASE("config parse and canonical round-trip") {
    RunConfig cfg = parse_config_text(kSample, "sample");
    CHECK(cfg.params.d == 2);
    CHECK(cfg.params.kappa == 0.5);
    CHECK(cfg.grid.kind == GridKind::Radial);
    CHECK(cfg.grid.counts == std::vector<int>{1024});
    CHECK(cfg.solver.seed == 7);
    CHECK(cfg.evolve.dt == 2e-4);
    CHECK(cfg.evolve.p.alpha == 1.0); // evolve params mirror [params]

    const std::string canon = canonical_config(cfg);
    RunConfig cfg2 = parse_config_text(canon, "canon");
    CHECK(canonical_config(cfg2) == canon);
}

TEST_CASE("config errors carry file, line, and key") {
    try {
        parse_config_text("[params]\nd = 2\nbogus_key = 1\n", "conf");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("conf:3") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("d = 2\n", "conf"), ConfigError); // key before section
    CHECK_THROWS_AS(parse_config_text("[params]\nalpha bad\n", "conf"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[params]\nalpha = abc\n", "conf"), ConfigError);
}

TEST_CASE("energy-subcritical gate is named in the rejection") {
    RunConfig cfg = parse_config_text(kSample, "conf");
    cfg.params.d = 3;
    cfg.params.alpha = 1.8;
    try {
        cfg.params.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("energy-subcritical gate") != std::string::npos);
    }
}

TEST_CASE("environment overrides with the INLSLAB_ prefix") {
    RunConfig cfg = parse_config_text(kSample, "conf");
    setenv("INLSLAB_PARAMS_ALPHA", "0.25", 1);
    setenv("INLSLAB_SOLVER_SEED", "99", 1);
    apply_env_overrides(cfg);
    unsetenv("INLSLAB_PARAMS_ALPHA");
    unsetenv("INLSLAB_SOLVER_SEED");
    CHECK(cfg.params.alpha == 0.25);
    CHECK(cfg.solver.seed == 99);
    CHECK(cfg.evolve.p.alpha == 0.25);
}

TEST_CASE("format_double round-trips doubles losslessly") {
    for (double x : {1.0 / 3.0, 1e-300, -2.5e17, 3.141592653589793, 0.1, -0.0, 57.961356997066}) {
        const std::string s = format_double(x);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::memcmp(&back, &x, sizeof(double)) == 0);
    }
}

TEST_CASE("profile files round-trip bit-exactly with their sidecar") {
    namespace fs = std::filesystem;
    const std::string dir = "test_artifacts/io";
    fs::remove_all(dir);

    GridSpec spec;
    spec.kind = GridKind::Radial;
    spec.d = 3;
    spec.extent = 12.0;
    spec.counts = {128};
    spec.alpha = 0.8;
    auto g = build_grid(spec);

    FieldPair s;
    s.grid = g;
    s.u.resize(g->size());
    s.v.resize(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node_r(i);
        s.u[i] = Complex(std::sin(3.7 * r) * std::exp(-r), std::cos(r) / 3.0);
        s.v[i] = Complex(1.0 / (1.0 + r), -std::exp(-0.5 * r));
    }
    ProfileMeta meta;
    meta.kind = "snapshot";
    meta.params = PhysParams{3, 0.8, 1.5, -0.2, 2.0};
    meta.grid = spec;
    meta.t = 0.625;
    write_profile(dir + "/snap.csv", s, meta);

    auto [loaded, lmeta] = read_profile(dir + "/snap.csv");
    REQUIRE(loaded.u.size() == s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        CHECK(loaded.u[i] == s.u[i]);
        CHECK(loaded.v[i] == s.v[i]);
    }
    CHECK(lmeta.kind == "snapshot");
    CHECK(lmeta.params.kappa == 1.5);
    CHECK(lmeta.t == 0.625);

    // real ground-state profiles use the phi/psi column form
    FieldPair real_s = s;
    for (auto& z : real_s.u) z = std::abs(z);
    for (auto& z : real_s.v) z = std::abs(z);
    ProfileMeta gmeta = meta;
    gmeta.kind = "ground_state";
    gmeta.d_omega = 1.25;
    write_profile(dir + "/gs.csv", real_s, gmeta);
    auto [gs_loaded, gs_meta] = read_profile(dir + "/gs.csv");
    for (std::size_t i = 0; i < s.u.size(); ++i) CHECK(gs_loaded.u[i] == real_s.u[i]);
    CHECK(gs_meta.d_omega == 1.25);
}

TEST_CASE("diagnostics CSV carries the contract header") {
    Trajectory tr;
    DiagRecord r{};
    r.t = 0.5;
    r.M = 1.0 / 3.0;
    tr.diag.push_back(r);
    tr.times.push_back(0.5);
    const std::string path = "test_artifacts/io/diag.csv";
    write_diag_csv(path, tr);
    const std::string text = read_text_file(path);
    CHECK(text.rfind("t,M,K,P,E,G,H,Vchi,Mchi,localmass,spacetime_accum\n", 0) == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}
