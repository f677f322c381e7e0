#pragma once

#include <optional>
#include <vector>

#include "inlslab/cutoff.hpp"
#include "inlslab/functionals.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

struct EvolveConfig {
    PhysParams p;
    double dt = 1e-4;
    double t_end = 1.0;
    double dt_min = 1e-7;
    int diag_stride = 1;
    double cutoff_R = 4.0;          // virial / local-mass diagnostic radius
    double blowup_K_factor = 1e3;
    int snapshot_stride = 0;        // 0: keep initial and final only
    double energy_drift_tol = 1e-8; // per-step relative E drift before dt halving

    void validate() const;
};

enum class EvolveStatus { Completed, BlowupDetected, Diverged };

struct DiagRecord {
    double t, M, K, P, E, G, H, Vchi, Mchi, localmass, spacetime_accum;
};

struct Trajectory {
    std::vector<double> times;        // diagnostic times
    std::vector<DiagRecord> diag;     // aligned with times
    std::vector<double> snapshot_times;
    std::vector<FieldPair> snapshots;
    EvolveStatus status = EvolveStatus::Completed;
    double detection_time = -1.0;     // first blow-up trigger, -1 if none
    double final_dt = 0.0;
    FieldPair final_state;
};

/// One Strang step: half linear flow (spectral multiplier on Cartesian,
/// Crank-Nicolson on Radial; the γ term is an exact phase on v), one RK4
/// substep of the pointwise nonlinear system
///   u' = i w conj(u) v,  v' = i (w/2) u²,
/// then another half linear flow. Throws NonFinite on non-finite output.
FieldPair strang_step(const FieldPair& state, const PhysParams& p, double dt);

/// Advances to t_end, recording diagnostics every diag_stride steps (they are
/// computed every step for the monitors). Halves dt and retries a step when
/// the per-step energy drift exceeds the tolerance; flags BlowupDetected when
/// K exceeds blowup_K_factor * K(0) or dt falls below dt_min.
Trajectory evolve(const FieldPair& state0, const EvolveConfig& cfg);

struct BlowupReport {
    double sup_G;
    bool negative_uniform_bound; // sup G <= -delta with delta = -sup G > 0
    double delta;
    double detection_time;       // -1 if no blow-up trigger
    double K_growth_rate;        // log-log tail fit of K(t), observational
    EvolveStatus status;
};
BlowupReport blowup_monitor(const Trajectory& tr, const EvolveConfig& cfg);

struct ScatteringReport {
    std::vector<double> times;
    std::vector<double> P_series;
    std::vector<double> localmass_series;
    std::vector<double> spacetime_series;
    double beta_fit;     // spacetime_accum(T) ~ T^beta on the tail
    double P_end_ratio;  // P(t_end)/P(0)
    bool localmass_decreasing;
};
ScatteringReport scattering_diagnostics(const Trajectory& tr, const EvolveConfig& cfg);

struct VirialChainReport {
    std::vector<double> dts;
    std::vector<double> err_vdot;  // |ΔV/Δt - Vdot| at each dt
    std::vector<double> err_mchi;  // |ΔV/Δt - Mchi| (coincides with err_vdot at κ=1/2)
    std::vector<double> err_rate;  // |ΔM/Δt - virial_rate| (Quadratic: rate = 2G)
    double scale;                  // reference magnitude for relative comparison
};

/// Central-difference checks of dV_chi/dt against the κ-weighted momentum
/// form and of dM_chi/dt against the virial rate, across a dt ladder.
VirialChainReport verify_virial_chain(const FieldPair& state0, const EvolveConfig& cfg,
                                      const CutoffFn& cutoff, const std::vector<double>& dts);

} // namespace inls
