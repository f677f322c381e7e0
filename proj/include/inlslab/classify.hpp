#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inlslab/ground_state.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

enum class Regime { MassSub, MassCritical, MassSuper, EnergyCritical, OutOfRange };

struct RegimeInfo {
    Regime label;
    double s_c;
};

std::string regime_name(Regime r);

/// Regime classification from (d, alpha): mass-critical iff alpha = (4-d)/2,
/// energy-critical iff alpha = (6-d)/2, OutOfRange when the admissibility
/// gate 0 < alpha < min(2,d) (and alpha < (6-d)/2 for d >= 3) fails.
RegimeInfo regime(int d, double alpha);

enum class VerdictLabel {
    GlobalSubcritical,
    GlobalBelowMass,
    GlobalBelowThreshold,
    GlobalAndScattering,
    BlowupOrGrowup,
    KMinusUnstable,
    Boundary,
    Unknown,
};

std::string verdict_name(VerdictLabel v);

struct Evidence {
    std::string name;
    double lhs;
    double rhs;
};

struct Verdict {
    VerdictLabel label;
    std::vector<Evidence> evidence;
};

/// Global-existence thresholds. gs must be the GN-normalized nonlinear ground
/// state (gamma = 0, omega = 1) computed at the same (d, alpha, kappa);
/// throws ParamsMismatch otherwise. Equalities within 1e-9 relative are
/// reported as Boundary.
Verdict global_threshold_check(const FieldPair& state0, const GroundStateResult& gs,
                               const PhysParams& p, const PhysParams& gs_params);

/// Blow-up sufficient conditions and K⁻ membership. wp (= min(d_ω, d_ω⁻)) is
/// consulted first when finite; pass std::nullopt to skip the K⁻ query.
Verdict blowup_threshold_check(const FieldPair& state0, const GroundStateResult& gs,
                               const PhysParams& p, const PhysParams& gs_params,
                               std::optional<double> wp);

struct StabilityVerdict {
    enum class Expectation { Stable, Unstable, Indeterminate } expected;
    std::string reason;
};

/// γ=0: stable iff d + 2α < 4; γ≠0: indeterminate (L''(ω) not evaluated).
StabilityVerdict stability_criterion(const PhysParams& p);

} // namespace inls
