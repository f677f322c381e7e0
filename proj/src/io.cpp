#include "inlslab/io.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

using nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ConfigError("failed to parse number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

bool is_real_profile(const FieldPair& s) {
    for (const auto& z : s.u)
        if (z.imag() != 0.0) return false;
    for (const auto& z : s.v)
        if (z.imag() != 0.0) return false;
    return true;
}

void write_coords_header(std::ostream& os, const Grid& g, bool real_profile) {
    if (g.kind == GridKind::Radial)
        os << "index,r";
    else if (g.d == 1)
        os << "index,x";
    else
        os << "index,x,y";
    if (real_profile)
        os << ",phi,psi\n";
    else
        os << ",u_re,u_im,v_re,v_im\n";
}

} // namespace

void write_profile(const std::string& path, const FieldPair& state, const ProfileMeta& meta) {
    const Grid& g = *state.grid;
    const bool real_profile = (meta.kind == "ground_state") && is_real_profile(state);
    std::ostringstream os;
    write_coords_header(os, g, real_profile);
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << i;
        if (g.kind == GridKind::Radial) {
            os << ',' << format_double(g.node_r(i));
        } else if (g.d == 1) {
            os << ',' << format_double(g.node_x(0, i));
        } else {
            const std::size_t n1 = static_cast<std::size_t>(g.shape[1]);
            os << ',' << format_double(g.node_x(0, i / n1)) << ','
               << format_double(g.node_x(1, i % n1));
        }
        if (real_profile) {
            os << ',' << format_double(state.u[i].real()) << ','
               << format_double(state.v[i].real());
        } else {
            os << ',' << format_double(state.u[i].real()) << ','
               << format_double(state.u[i].imag()) << ',' << format_double(state.v[i].real())
               << ',' << format_double(state.v[i].imag());
        }
        os << '\n';
    }
    write_text_file(path, os.str());

    ordered_json j;
    j["kind"] = meta.kind;
    j["gs_role"] = meta.gs_role;
    j["params"] = params_to_json(meta.params);
    j["grid"] = gridspec_to_json(meta.grid);
    j["d_omega"] = meta.d_omega;
    j["c_omega"] = meta.c_omega;
    j["C_GN"] = meta.C_GN;
    j["pohozaev_r1"] = meta.pohozaev_r1;
    j["pohozaev_r2"] = meta.pohozaev_r2;
    j["decay_rate"] = meta.decay_rate;
    j["iterations"] = meta.iterations;
    j["converged"] = meta.converged;
    j["t"] = meta.t;
    write_text_file(path + ".json", j.dump(2) + "\n");
}

std::pair<FieldPair, ProfileMeta> read_profile(const std::string& path) {
    ordered_json j = ordered_json::parse(read_text_file(path + ".json"));
    ProfileMeta meta;
    meta.kind = j.at("kind").get<std::string>();
    meta.gs_role = j.value("gs_role", std::string("standing"));
    meta.params = params_from_json(j.at("params"));
    meta.grid = gridspec_from_json(j.at("grid"));
    meta.d_omega = j.value("d_omega", 0.0);
    meta.c_omega = j.value("c_omega", 0.0);
    meta.C_GN = j.value("C_GN", 0.0);
    meta.pohozaev_r1 = j.value("pohozaev_r1", 0.0);
    meta.pohozaev_r2 = j.value("pohozaev_r2", 0.0);
    meta.decay_rate = j.value("decay_rate", 0.0);
    meta.iterations = j.value("iterations", 0);
    meta.converged = j.value("converged", false);
    meta.t = j.value("t", 0.0);

    GridPtr grid = build_grid(meta.grid);
    FieldPair state;
    state.grid = grid;
    state.u.resize(grid->size());
    state.v.resize(grid->size());

    std::istringstream is(read_text_file(path));
    std::string line;
    if (!std::getline(is, line)) throw ConfigError(path + ": empty profile file");
    const bool real_profile = line.find("phi") != std::string::npos;
    const int coord_cols = (meta.grid.kind == GridKind::Radial || meta.grid.d == 1) ? 1 : 2;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        const std::size_t want = 1 + coord_cols + (real_profile ? 2 : 4);
        if (cells.size() != want)
            throw ConfigError(path + ": bad column count on data row " + std::to_string(row));
        const std::size_t idx = static_cast<std::size_t>(std::stoull(cells[0]));
        if (idx >= grid->size()) throw ConfigError(path + ": index out of range");
        const std::size_t base = 1 + static_cast<std::size_t>(coord_cols);
        if (real_profile) {
            state.u[idx] = parse_double(cells[base]);
            state.v[idx] = parse_double(cells[base + 1]);
        } else {
            state.u[idx] = Complex(parse_double(cells[base]), parse_double(cells[base + 1]));
            state.v[idx] = Complex(parse_double(cells[base + 2]), parse_double(cells[base + 3]));
        }
        ++row;
    }
    if (row != grid->size()) throw ConfigError(path + ": profile row count does not match grid");
    return {std::move(state), std::move(meta)};
}

void write_diag_csv(const std::string& path, const Trajectory& tr) {
    std::ostringstream os;
    os << "t,M,K,P,E,G,H,Vchi,Mchi,localmass,spacetime_accum\n";
    for (const auto& r : tr.diag) {
        os << format_double(r.t) << ',' << format_double(r.M) << ',' << format_double(r.K) << ','
           << format_double(r.P) << ',' << format_double(r.E) << ',' << format_double(r.G) << ','
           << format_double(r.H) << ',' << format_double(r.Vchi) << ',' << format_double(r.Mchi)
           << ',' << format_double(r.localmass) << ',' << format_double(r.spacetime_accum)
           << '\n';
    }
    write_text_file(path, os.str());
}

ordered_json params_to_json(const PhysParams& p) {
    ordered_json j;
    j["d"] = p.d;
    j["alpha"] = p.alpha;
    j["kappa"] = p.kappa;
    j["gamma"] = p.gamma;
    j["omega"] = p.omega;
    return j;
}

PhysParams params_from_json(const ordered_json& j) {
    PhysParams p;
    p.d = j.at("d").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.omega = j.at("omega").get<double>();
    return p;
}

ordered_json gridspec_to_json(const GridSpec& g) {
    ordered_json j;
    j["kind"] = (g.kind == GridKind::Radial) ? "radial" : "cartesian";
    j["d"] = g.d;
    j["extent"] = g.extent;
    j["counts"] = g.counts;
    j["alpha"] = g.alpha;
    return j;
}

GridSpec gridspec_from_json(const ordered_json& j) {
    GridSpec g;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "radial")
        g.kind = GridKind::Radial;
    else if (kind == "cartesian")
        g.kind = GridKind::Cartesian;
    else
        throw ConfigError("grid.kind: expected 'radial' or 'cartesian', got '" + kind + "'");
    g.d = j.at("d").get<int>();
    g.extent = j.at("extent").get<double>();
    g.counts = j.at("counts").get<std::vector<int>>();
    g.alpha = j.value("alpha", -1.0);
    return g;
}

ordered_json ground_state_summary(const GroundStateResult& gs, const PhysParams& p) {
    ordered_json j;
    j["params"] = params_to_json(p);
    j["d_omega"] = gs.d_omega;
    j["c_omega"] = gs.c_omega;
    j["C_GN"] = gs.C_GN;
    if (gs.converged) {
        const double cc = gn_constant_crosscheck(gs, p);
        j["C_GN_crosscheck"] = cc;
        j["C_GN_crosscheck_relerr"] = std::abs(gs.C_GN - cc) / gs.C_GN;
    }
    j["pohozaev_r1"] = gs.pohozaev_res.first;
    j["pohozaev_r2"] = gs.pohozaev_res.second;
    j["decay_rate"] = gs.decay_rate;
    j["eq_residual"] = gs.eq_residual;
    j["iterations"] = gs.iterations;
    j["converged"] = gs.converged;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path fp(path);
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace inls
