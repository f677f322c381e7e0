#include "inlslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "inlslab/errors.hpp"
#include "inlslab/io.hpp"

namespace inls {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Setter {
    RunConfig& cfg;
    std::string where; // "<file>:<line>" prefix for errors

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        throw ConfigError(where + ": key '" + key + "': " + msg);
    }

    double num(const std::string& key, const std::string& v) const {
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') fail(key, "expected a number, got '" + v + "'");
        return x;
    }
    long integer(const std::string& key, const std::string& v) const {
        const double x = num(key, v);
        if (x != static_cast<long>(x)) fail(key, "expected an integer, got '" + v + "'");
        return static_cast<long>(x);
    }
    bool boolean(const std::string& key, const std::string& v) const {
        const std::string s = lower(v);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        fail(key, "expected a boolean, got '" + v + "'");
    }
    std::vector<double> numbers(const std::string& key, const std::string& v) const {
        std::vector<double> out;
        std::stringstream ss(v);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            if (!cell.empty()) out.push_back(num(key, cell));
        }
        if (out.empty()) fail(key, "expected a comma-separated list of numbers");
        return out;
    }

    void apply(const std::string& section, const std::string& key, const std::string& value) {
        const std::string full = section + "." + key;
        if (section == "params") {
            if (key == "d") cfg.params.d = static_cast<int>(integer(full, value));
            else if (key == "alpha") cfg.params.alpha = num(full, value);
            else if (key == "kappa") cfg.params.kappa = num(full, value);
            else if (key == "gamma") cfg.params.gamma = num(full, value);
            else if (key == "omega") cfg.params.omega = num(full, value);
            else fail(full, "unknown key");
        } else if (section == "grid") {
            if (key == "kind") {
                const std::string k = lower(value);
                if (k == "radial") cfg.grid.kind = GridKind::Radial;
                else if (k == "cartesian") cfg.grid.kind = GridKind::Cartesian;
                else fail(full, "expected 'radial' or 'cartesian'");
            } else if (key == "extent") {
                cfg.grid.extent = num(full, value);
            } else if (key == "counts") {
                auto xs = numbers(full, value);
                cfg.grid.counts.clear();
                for (double x : xs) cfg.grid.counts.push_back(static_cast<int>(x));
            } else {
                fail(full, "unknown key");
            }
        } else if (section == "solver") {
            if (key == "tol") cfg.solver.tol = num(full, value);
            else if (key == "max_iters") cfg.solver.max_iters = static_cast<int>(integer(full, value));
            else if (key == "init") cfg.solver.init = value;
            else if (key == "seed") cfg.solver.seed = static_cast<std::uint64_t>(integer(full, value));
            else fail(full, "unknown key");
        } else if (section == "evolve") {
            if (key == "dt") cfg.evolve.dt = num(full, value);
            else if (key == "t_end") cfg.evolve.t_end = num(full, value);
            else if (key == "dt_min") cfg.evolve.dt_min = num(full, value);
            else if (key == "diag_stride") cfg.evolve.diag_stride = static_cast<int>(integer(full, value));
            else if (key == "snapshot_stride") cfg.evolve.snapshot_stride = static_cast<int>(integer(full, value));
            else if (key == "cutoff_r") cfg.evolve.cutoff_R = num(full, value);
            else if (key == "blowup_k_factor") cfg.evolve.blowup_K_factor = num(full, value);
            else if (key == "energy_drift_tol") cfg.evolve.energy_drift_tol = num(full, value);
            else if (key == "initial") cfg.evolve_init.initial = value;
            else if (key == "amplitude") cfg.evolve_init.amplitude = num(full, value);
            else if (key == "profile") cfg.evolve_init.profile_path = value;
            else fail(full, "unknown key");
        } else if (section == "output") {
            if (key == "dir") cfg.output.dir = value;
            else if (key == "formats") {
                cfg.output.formats.clear();
                std::stringstream ss(value);
                std::string cell;
                while (std::getline(ss, cell, ',')) {
                    cell = trim(cell);
                    if (!cell.empty()) cfg.output.formats.push_back(cell);
                }
            } else fail(full, "unknown key");
        } else if (section == "sweep") {
            if (key == "axis") cfg.sweep.axis = lower(value);
            else if (key == "values") cfg.sweep.values = numbers(full, value);
            else if (key == "max_runs") cfg.sweep.max_runs = static_cast<int>(integer(full, value));
            else fail(full, "unknown key");
        } else if (section == "classify") {
            if (key == "query_kminus") cfg.classify.query_kminus = boolean(full, value);
            else if (key == "wp") cfg.classify.wp = num(full, value);
            else fail(full, "unknown key");
        } else {
            fail(section, "unknown section");
        }
    }
};

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
    RunConfig cfg;
    cfg.evolve.p = cfg.params;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" + line + "'");
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where + ": key '" + key + "' appears before any [section]");
        Setter{cfg, where}.apply(section, key, value);
    }
    cfg.grid.d = cfg.params.d;
    cfg.evolve.p = cfg.params;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path), path);
}

void apply_env_overrides(RunConfig& cfg) {
    static const struct {
        const char* env;
        const char* section;
        const char* key;
    } keys[] = {
        {"INLSLAB_PARAMS_D", "params", "d"},
        {"INLSLAB_PARAMS_ALPHA", "params", "alpha"},
        {"INLSLAB_PARAMS_KAPPA", "params", "kappa"},
        {"INLSLAB_PARAMS_GAMMA", "params", "gamma"},
        {"INLSLAB_PARAMS_OMEGA", "params", "omega"},
        {"INLSLAB_GRID_KIND", "grid", "kind"},
        {"INLSLAB_GRID_EXTENT", "grid", "extent"},
        {"INLSLAB_GRID_COUNTS", "grid", "counts"},
        {"INLSLAB_SOLVER_TOL", "solver", "tol"},
        {"INLSLAB_SOLVER_MAX_ITERS", "solver", "max_iters"},
        {"INLSLAB_SOLVER_INIT", "solver", "init"},
        {"INLSLAB_SOLVER_SEED", "solver", "seed"},
        {"INLSLAB_EVOLVE_DT", "evolve", "dt"},
        {"INLSLAB_EVOLVE_T_END", "evolve", "t_end"},
        {"INLSLAB_EVOLVE_DT_MIN", "evolve", "dt_min"},
        {"INLSLAB_EVOLVE_DIAG_STRIDE", "evolve", "diag_stride"},
        {"INLSLAB_EVOLVE_CUTOFF_R", "evolve", "cutoff_r"},
        {"INLSLAB_OUTPUT_DIR", "output", "dir"},
        {"INLSLAB_SWEEP_AXIS", "sweep", "axis"},
        {"INLSLAB_SWEEP_VALUES", "sweep", "values"},
    };
    for (const auto& k : keys) {
        const char* v = std::getenv(k.env);
        if (v && *v) Setter{cfg, std::string("env ") + k.env}.apply(k.section, k.key, v);
    }
    cfg.grid.d = cfg.params.d;
    cfg.evolve.p = cfg.params;
}

std::string canonical_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[params]\n";
    os << "d = " << cfg.params.d << "\n";
    os << "alpha = " << format_double(cfg.params.alpha) << "\n";
    os << "kappa = " << format_double(cfg.params.kappa) << "\n";
    os << "gamma = " << format_double(cfg.params.gamma) << "\n";
    os << "omega = " << format_double(cfg.params.omega) << "\n\n";
    os << "[grid]\n";
    os << "kind = " << (cfg.grid.kind == GridKind::Radial ? "radial" : "cartesian") << "\n";
    os << "extent = " << format_double(cfg.grid.extent) << "\n";
    os << "counts = ";
    for (std::size_t i = 0; i < cfg.grid.counts.size(); ++i)
        os << (i ? "," : "") << cfg.grid.counts[i];
    os << "\n\n";
    os << "[solver]\n";
    os << "tol = " << format_double(cfg.solver.tol) << "\n";
    os << "max_iters = " << cfg.solver.max_iters << "\n";
    os << "init = " << cfg.solver.init << "\n";
    os << "seed = " << cfg.solver.seed << "\n\n";
    os << "[evolve]\n";
    os << "dt = " << format_double(cfg.evolve.dt) << "\n";
    os << "t_end = " << format_double(cfg.evolve.t_end) << "\n";
    os << "dt_min = " << format_double(cfg.evolve.dt_min) << "\n";
    os << "diag_stride = " << cfg.evolve.diag_stride << "\n";
    os << "snapshot_stride = " << cfg.evolve.snapshot_stride << "\n";
    os << "cutoff_r = " << format_double(cfg.evolve.cutoff_R) << "\n";
    os << "blowup_k_factor = " << format_double(cfg.evolve.blowup_K_factor) << "\n";
    os << "energy_drift_tol = " << format_double(cfg.evolve.energy_drift_tol) << "\n";
    os << "initial = " << cfg.evolve_init.initial << "\n";
    os << "amplitude = " << format_double(cfg.evolve_init.amplitude) << "\n";
    if (!cfg.evolve_init.profile_path.empty())
        os << "profile = " << cfg.evolve_init.profile_path << "\n";
    os << "\n[output]\n";
    os << "dir = " << cfg.output.dir << "\n";
    os << "formats = ";
    for (std::size_t i = 0; i < cfg.output.formats.size(); ++i)
        os << (i ? "," : "") << cfg.output.formats[i];
    os << "\n";
    if (!cfg.sweep.axis.empty()) {
        os << "\n[sweep]\n";
        os << "axis = " << cfg.sweep.axis << "\n";
        os << "values = ";
        for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i)
            os << (i ? "," : "") << format_double(cfg.sweep.values[i]);
        os << "\n";
        os << "max_runs = " << cfg.sweep.max_runs << "\n";
    }
    if (cfg.classify.query_kminus || std::isfinite(cfg.classify.wp)) {
        os << "\n[classify]\n";
        os << "query_kminus = " << (cfg.classify.query_kminus ? "true" : "false") << "\n";
        if (std::isfinite(cfg.classify.wp)) os << "wp = " << format_double(cfg.classify.wp) << "\n";
    }
    return os.str();
}

} // namespace inls
