#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "inlslab/evolution.hpp"
#include "inlslab/ground_state.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

/// Lossless, locale-independent float formatting (17 significant digits).
std::string format_double(double x);

/// Metadata carried by the JSON sidecar of a profile file.
struct ProfileMeta {
    std::string kind = "ground_state"; // "ground_state" | "snapshot"
    std::string gs_role = "standing";  // "standing" | "gn"
    PhysParams params;
    GridSpec grid;
    double d_omega = 0.0;
    double c_omega = 0.0;
    double C_GN = 0.0;
    double pohozaev_r1 = 0.0;
    double pohozaev_r2 = 0.0;
    double decay_rate = 0.0;
    int iterations = 0;
    bool converged = false;
    double t = 0.0; // snapshot time
};

/// CSV profile (columns: index, coordinate(s), field columns; real profiles
/// store phi,psi, snapshots store re/im parts) plus a JSON sidecar at
/// path + ".json". Round-trips bit-exactly.
void write_profile(const std::string& path, const FieldPair& state, const ProfileMeta& meta);
std::pair<FieldPair, ProfileMeta> read_profile(const std::string& path);

/// Diagnostics stream: header t,M,K,P,E,G,H,Vchi,Mchi,localmass,spacetime_accum.
void write_diag_csv(const std::string& path, const Trajectory& tr);

nlohmann::ordered_json params_to_json(const PhysParams& p);
PhysParams params_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json gridspec_to_json(const GridSpec& g);
GridSpec gridspec_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json ground_state_summary(const GroundStateResult& gs, const PhysParams& p);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace inls
