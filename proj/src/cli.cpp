#include "inlslab/cli.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "inlslab/classify.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/functionals.hpp"
#include "inlslab/io.hpp"

namespace inls::cli {

using nlohmann::ordered_json;

namespace {

std::string artifact_path(const RunConfig& cfg, const std::string& name) {
    return cfg.output.dir + "/" + name;
}

FieldPair scaled_copy(const FieldPair& s, double mu) {
    FieldPair out = s;
    for (auto& z : out.u) z *= mu;
    for (auto& z : out.v) z *= mu;
    return out;
}

ProfileMeta gs_meta(const GroundStateResult& gs, const PhysParams& p, const GridSpec& spec,
                    const std::string& role) {
    ProfileMeta m;
    m.kind = "ground_state";
    m.gs_role = role;
    m.params = p;
    m.grid = spec;
    m.d_omega = gs.d_omega;
    m.c_omega = gs.c_omega;
    m.C_GN = gs.C_GN;
    m.pohozaev_r1 = gs.pohozaev_res.first;
    m.pohozaev_r2 = gs.pohozaev_res.second;
    m.decay_rate = gs.decay_rate;
    m.iterations = gs.iterations;
    m.converged = gs.converged;
    return m;
}

FieldPair gaussian_pair(GridPtr grid, double amplitude) {
    FieldPair s;
    s.grid = grid;
    s.u.resize(grid->size());
    s.v.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->node_radius(i);
        const double g = amplitude * std::exp(-r * r);
        s.u[i] = g;
        s.v[i] = g;
    }
    return s;
}

ordered_json verdict_to_json(const Verdict& v, const PhysParams& p) {
    ordered_json j;
    j["label"] = verdict_name(v.label);
    ordered_json ev = ordered_json::array();
    for (const auto& e : v.evidence) {
        ordered_json one;
        one["name"] = e.name;
        one["lhs"] = e.lhs;
        one["rhs"] = e.rhs;
        ev.push_back(one);
    }
    j["evidence"] = ev;
    j["params"] = params_to_json(p);
    return j;
}

Verdict merge_verdicts(const Verdict& global, const Verdict& blowup) {
    Verdict out;
    // a banded equality is boundary data; the raw H < 0 branch would read
    // discretization noise there
    if (global.label == VerdictLabel::Boundary)
        out.label = VerdictLabel::Boundary;
    else
        out.label = (blowup.label != VerdictLabel::Unknown) ? blowup.label : global.label;
    out.evidence = global.evidence;
    out.evidence.insert(out.evidence.end(), blowup.evidence.begin(), blowup.evidence.end());
    return out;
}

// runs fn(i) for i in [0, n) on a small worker pool, deterministically indexed
void parallel_rows(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const int nw = std::max(1, workers);
    if (nw == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

int cmd_ground_state(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.params.validate_frequency();
    GridPtr grid = build_grid(cfg.grid_with_alpha());
    GroundStateResult gs = minimize_nehari(cfg.params, grid, cfg.solver);

    write_profile(artifact_path(cfg, "ground_state.csv"), gs.fields,
                  gs_meta(gs, cfg.params, cfg.grid_with_alpha(), "standing"));
    ordered_json j = ground_state_summary(gs, cfg.params);
    if (gs.converged) {
        const double cc = gn_constant_crosscheck(gs, cfg.params);
        j["crosscheck_ok"] = std::abs(gs.C_GN - cc) / gs.C_GN < 1e-6;
    }
    write_text_file(artifact_path(cfg, "ground_state_summary.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << std::endl;
    return gs.converged ? kExitOk : kExitNotConverged;
}

int cmd_gn_constant(const RunConfig& cfg) {
    PhysParams p = cfg.params;
    p.gamma = 0.0;
    p.omega = 1.0;
    p.validate();
    GridPtr grid = build_grid(cfg.grid_with_alpha());
    GroundStateResult gs = minimize_nehari(p, grid, cfg.solver);
    write_profile(artifact_path(cfg, "gn_optimizer.csv"), gs.fields,
                  gs_meta(gs, p, cfg.grid_with_alpha(), "gn"));
    ordered_json j = ground_state_summary(gs, p);
    write_text_file(artifact_path(cfg, "gn_constant.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << std::endl;
    return gs.converged ? kExitOk : kExitNotConverged;
}

int cmd_evolve(const RunConfig& cfg) {
    EvolveConfig ecfg = cfg.evolve;
    ecfg.p = cfg.params;
    ecfg.validate();
    GridPtr grid = build_grid(cfg.grid_with_alpha());

    FieldPair state0;
    if (cfg.evolve_init.initial == "gaussian") {
        state0 = gaussian_pair(grid, cfg.evolve_init.amplitude);
    } else if (cfg.evolve_init.initial == "ground-state") {
        GroundStateResult gs = minimize_nehari(cfg.params, grid, cfg.solver);
        if (!gs.converged) return kExitNotConverged;
        state0 = scaled_copy(gs.fields, cfg.evolve_init.amplitude);
    } else if (cfg.evolve_init.initial == "profile") {
        if (cfg.evolve_init.profile_path.empty())
            throw ConfigError("evolve.profile: missing profile path for initial = profile");
        auto [loaded, meta] = read_profile(cfg.evolve_init.profile_path);
        state0 = scaled_copy(loaded, cfg.evolve_init.amplitude);
        if (meta.grid.kind != cfg.grid.kind || meta.grid.counts != cfg.grid.counts ||
            meta.grid.extent != cfg.grid.extent)
            throw ParamsMismatch("evolve.profile: profile grid does not match [grid]");
    } else {
        throw ConfigError("evolve.initial: expected gaussian | ground-state | profile, got '" +
                          cfg.evolve_init.initial + "'");
    }

    Trajectory tr = evolve(state0, ecfg);
    write_diag_csv(artifact_path(cfg, "diagnostics.csv"), tr);
    {
        ProfileMeta m;
        m.kind = "snapshot";
        m.params = cfg.params;
        m.grid = cfg.grid_with_alpha();
        m.t = tr.times.empty() ? 0.0 : tr.times.back();
        write_profile(artifact_path(cfg, "final_state.csv"), tr.final_state, m);
    }
    const BlowupReport rep = blowup_monitor(tr, ecfg);
    ordered_json j;
    j["status"] = tr.status == EvolveStatus::Completed     ? "Completed"
                  : tr.status == EvolveStatus::BlowupDetected ? "BlowupDetected"
                                                              : "Diverged";
    j["sup_G"] = rep.sup_G;
    j["negative_uniform_bound"] = rep.negative_uniform_bound;
    j["delta"] = rep.delta;
    j["detection_time"] = rep.detection_time;
    j["K_growth_rate"] = rep.K_growth_rate;
    if (tr.status == EvolveStatus::Completed) {
        const ScatteringReport sc = scattering_diagnostics(tr, ecfg);
        j["beta_fit"] = sc.beta_fit;
        j["P_end_ratio"] = sc.P_end_ratio;
        j["localmass_decreasing"] = sc.localmass_decreasing;
    }
    write_text_file(artifact_path(cfg, "evolve_report.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << std::endl;
    switch (tr.status) {
        case EvolveStatus::Completed: return kExitOk;
        case EvolveStatus::BlowupDetected: return kExitBlowup;
        case EvolveStatus::Diverged: return kExitDiverged;
    }
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const std::string& state_path, const std::string& gs_path,
                 std::optional<double> wp_flag) {
    auto [state, smeta] = read_profile(state_path);
    auto [gsf, gmeta] = read_profile(gs_path);
    if (!gmeta.params.same_triple(cfg.params))
        throw ParamsMismatch("classify: ground-state profile " + gs_path + " has params " +
                             gmeta.params.describe() + ", config wants " + cfg.params.describe());
    if (!smeta.params.same_triple(cfg.params))
        throw ParamsMismatch("classify: state profile " + state_path + " has params " +
                             smeta.params.describe() + ", config wants " + cfg.params.describe());
    if (gmeta.gs_role != "gn")
        throw ParamsMismatch("classify: threshold inequalities require a gn-role ground state "
                             "(gn-constant artifact), got role '" + gmeta.gs_role + "'");

    GroundStateResult gs;
    gs.fields = gsf;
    gs.converged = gmeta.converged;
    gs.d_omega = gmeta.d_omega;
    gs.C_GN = gmeta.C_GN;

    std::optional<double> wp = wp_flag;
    if (!wp && std::isfinite(cfg.classify.wp)) wp = cfg.classify.wp;
    if (!wp && cfg.classify.query_kminus) {
        GridPtr grid = state.grid;
        wp = compute_d_minus(cfg.params, grid, cfg.solver).wp;
    }

    const Verdict vg = global_threshold_check(state, gs, cfg.params, gmeta.params);
    const Verdict vb = blowup_threshold_check(state, gs, cfg.params, gmeta.params, wp);
    const Verdict merged = merge_verdicts(vg, vb);
    ordered_json j = verdict_to_json(merged, cfg.params);
    if (wp) j["wp"] = *wp;
    write_text_file(artifact_path(cfg, "verdict.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << std::endl;
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, int workers) {
    if (cfg.sweep.axis.empty() || cfg.sweep.values.empty())
        throw ConfigError("sweep.axis/sweep.values: sweep requires a nonempty axis");
    if (static_cast<int>(cfg.sweep.values.size()) > cfg.sweep.max_runs)
        throw ConfigError("sweep.values: " + std::to_string(cfg.sweep.values.size()) +
                          " runs exceed sweep.max_runs = " + std::to_string(cfg.sweep.max_runs));

    const std::size_t n = cfg.sweep.values.size();
    std::vector<std::string> rows(n);
    std::vector<bool> failed(n, false);
    std::ostringstream header;

    if (cfg.sweep.axis == "alpha") {
        // descending ground-state sweep with distances against the alpha=0 state
        for (std::size_t i = 1; i < n; ++i)
            if (!(cfg.sweep.values[i] < cfg.sweep.values[i - 1]))
                throw ConfigError("sweep.values: alpha axis must be strictly descending");
        GridPtr grid = build_grid(cfg.grid_with_alpha());
        PhysParams p0 = cfg.params;
        p0.alpha = 0.0;
        const GroundStateResult ref = minimize_nehari(p0, grid, cfg.solver);
        header << "alpha,d_omega,h1_distance,converged";
        parallel_rows(n, workers, [&](std::size_t i) {
            std::ostringstream row;
            try {
                PhysParams p = cfg.params;
                p.alpha = cfg.sweep.values[i];
                SolverOptions opts = cfg.solver;
                opts.seed = cfg.solver.seed + i;
                const GroundStateResult gs =
                    (cfg.sweep.values[i] == 0.0) ? ref : minimize_nehari(p, grid, opts);
                row << format_double(cfg.sweep.values[i]) << ',' << format_double(gs.d_omega)
                    << ',' << format_double(h1_distance(gs.fields, ref.fields)) << ','
                    << (gs.converged ? "true" : "false");
            } catch (const std::exception& e) {
                row << format_double(cfg.sweep.values[i]) << ",error: " << e.what();
                failed[i] = true;
            }
            rows[i] = row.str();
        });
    } else if (cfg.sweep.axis == "mu") {
        // amplitude dichotomy scan of ground-state-profile data
        GridPtr grid = build_grid(cfg.grid_with_alpha());
        const GroundStateResult gs_standing = minimize_nehari(cfg.params, grid, cfg.solver);
        PhysParams pg = cfg.params;
        pg.gamma = 0.0;
        pg.omega = 1.0;
        const GroundStateResult gs_gn = minimize_nehari(pg, grid, cfg.solver);
        const double wp =
            compute_d_minus(cfg.params, grid, cfg.solver, nullptr, gs_standing.d_omega).wp;
        header << "mu,label,M,K,H,A_omega,B_omega,G";
        parallel_rows(n, workers, [&](std::size_t i) {
            std::ostringstream row;
            const double mu = cfg.sweep.values[i];
            try {
                const FieldPair state = scaled_copy(gs_standing.fields, mu);
                const Verdict vg = global_threshold_check(state, gs_gn, cfg.params, pg);
                const Verdict vb =
                    blowup_threshold_check(state, gs_gn, cfg.params, pg, wp);
                const Verdict merged = merge_verdicts(vg, vb);
                const InvariantSet inv = invariants(state, cfg.params);
                const ActionSet act = action_nehari(state, cfg.params);
                row << format_double(mu) << ',' << verdict_name(merged.label) << ','
                    << format_double(inv.M) << ',' << format_double(inv.K) << ','
                    << format_double(inv.H) << ',' << format_double(act.A_omega) << ','
                    << format_double(act.B_omega) << ',' << format_double(inv.G);
            } catch (const std::exception& e) {
                row << format_double(mu) << ",error: " << e.what();
                failed[i] = true;
            }
            rows[i] = row.str();
        });
    } else {
        throw ConfigError("sweep.axis: expected 'alpha' or 'mu', got '" + cfg.sweep.axis + "'");
    }

    std::ostringstream csv;
    csv << header.str() << '\n';
    for (const auto& r : rows) csv << r << '\n';
    write_text_file(artifact_path(cfg, "sweep.csv"), csv.str());
    std::cout << csv.str();
    bool all_failed = true;
    for (bool f : failed) all_failed = all_failed && f;
    return all_failed ? kExitAllRowsFailed : kExitOk;
}

int run_main(int argc, char** argv) {
    CLI::App app{"inlslab: ground states, time evolution, and threshold classification for the "
                 "two-component inhomogeneous NLS system with |x|^-alpha quadratic coupling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = static_cast<int>(std::thread::hardware_concurrency());

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_option("--seed", seed, "seed for stochastic inits")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--workers", workers, "worker threads for sweeps");

    auto* c_gs = app.add_subcommand("ground-state", "solve the Nehari ground state");
    auto* c_gn = app.add_subcommand("gn-constant", "compute the sharp constant from the GN optimizer");
    auto* c_ev = app.add_subcommand("evolve", "split-step time evolution with diagnostics");
    auto* c_cl = app.add_subcommand("classify", "threshold / blow-up classification of a state");
    auto* c_sw = app.add_subcommand("sweep", "parameter sweeps (alpha or mu axis)");

    std::string state_path, gs_path;
    double wp_flag = std::numeric_limits<double>::quiet_NaN();
    c_cl->add_option("--state", state_path, "state profile (CSV + sidecar)")->required();
    c_cl->add_option("--gs", gs_path, "gn-role ground-state profile")->required();
    c_cl->add_option("--wp", wp_flag, "precomputed min(d_omega, d_omega^-)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig cfg = parse_config_file(config_path);
        apply_env_overrides(cfg);
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (seed_set) cfg.solver.seed = seed;

        if (c_gs->parsed()) return cmd_ground_state(cfg);
        if (c_gn->parsed()) return cmd_gn_constant(cfg);
        if (c_ev->parsed()) return cmd_evolve(cfg);
        if (c_cl->parsed()) {
            std::optional<double> wp;
            if (std::isfinite(wp_flag)) wp = wp_flag;
            return cmd_classify(cfg, state_path, gs_path, wp);
        }
        if (c_sw->parsed()) return cmd_sweep(cfg, workers);
    } catch (const NonFinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace inls::cli
