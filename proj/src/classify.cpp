#include "inlslab/classify.hpp"

#include <cmath>

#include "inlslab/errors.hpp"
#include "inlslab/functionals.hpp"

namespace inls {

namespace {

const double kBoundaryBand = 1e-9; // relative width distinguishing equality from float noise

// -1: lhs < rhs, 0: within the boundary band, +1: lhs > rhs
int compare_banded(double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (std::abs(lhs - rhs) <= kBoundaryBand * scale) return 0;
    return lhs < rhs ? -1 : 1;
}

void check_gs(const GroundStateResult& gs, const PhysParams& p, const PhysParams& gs_params) {
    if (!gs.converged) throw NotConverged("classify: ground state did not converge");
    if (!gs_params.same_triple(p))
        throw ParamsMismatch("classify: ground state computed at different (d, alpha, kappa): " +
                             gs_params.describe() + " vs " + p.describe());
}

void check_gn_normalization(const PhysParams& gs_params) {
    if (gs_params.gamma != 0.0 || gs_params.omega != 1.0)
        throw ParamsMismatch(
            "classify: threshold inequalities consume the GN-normalized ground state "
            "(gamma = 0, omega = 1), got " +
            gs_params.describe());
}

} // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::MassSub: return "MassSub";
        case Regime::MassCritical: return "MassCritical";
        case Regime::MassSuper: return "MassSuper";
        case Regime::EnergyCritical: return "EnergyCritical";
        case Regime::OutOfRange: return "OutOfRange";
    }
    return "?";
}

RegimeInfo regime(int d, double alpha) {
    RegimeInfo out;
    out.s_c = 0.5 * d - 2.0 + alpha;
    const double mass_crit = 0.5 * (4.0 - d);
    const double energy_crit = 0.5 * (6.0 - d);
    const double tol = 1e-12 * std::max(1.0, std::abs(alpha));
    if (d >= 1 && d <= 5 && std::abs(alpha - energy_crit) <= tol) {
        out.label = Regime::EnergyCritical;
        return out;
    }
    PhysParams p;
    p.d = d;
    p.alpha = alpha;
    if (d < 1 || d > 5 || !p.alpha_in_gate()) {
        out.label = Regime::OutOfRange;
        return out;
    }
    if (std::abs(alpha - mass_crit) <= tol)
        out.label = Regime::MassCritical;
    else if (alpha > mass_crit)
        out.label = Regime::MassSuper;
    else
        out.label = Regime::MassSub;
    return out;
}

std::string verdict_name(VerdictLabel v) {
    switch (v) {
        case VerdictLabel::GlobalSubcritical: return "GlobalSubcritical";
        case VerdictLabel::GlobalBelowMass: return "GlobalBelowMass";
        case VerdictLabel::GlobalBelowThreshold: return "GlobalBelowThreshold";
        case VerdictLabel::GlobalAndScattering: return "GlobalAndScattering";
        case VerdictLabel::BlowupOrGrowup: return "BlowupOrGrowup";
        case VerdictLabel::KMinusUnstable: return "KMinusUnstable";
        case VerdictLabel::Boundary: return "Boundary";
        case VerdictLabel::Unknown: return "Unknown";
    }
    return "?";
}

Verdict global_threshold_check(const FieldPair& state0, const GroundStateResult& gs,
                               const PhysParams& p, const PhysParams& gs_params) {
    check_gs(gs, p, gs_params);
    check_gn_normalization(gs_params);
    const RegimeInfo reg = regime(p.d, p.alpha);
    Verdict out;
    out.label = VerdictLabel::Unknown;

    if (reg.label == Regime::MassSub) {
        out.label = VerdictLabel::GlobalSubcritical;
        out.evidence.push_back({"s_c < 0", reg.s_c, 0.0});
        return out;
    }

    const InvariantSet inv0 = invariants(state0, p);
    const InvariantSet ginv = invariants(gs.fields, gs_params);

    if (reg.label == Regime::MassCritical) {
        out.evidence.push_back({"M(u0,v0) < M(gn)", inv0.M, ginv.M});
        const int c = compare_banded(inv0.M, ginv.M);
        out.label = (c < 0)   ? VerdictLabel::GlobalBelowMass
                    : (c == 0) ? VerdictLabel::Boundary
                               : VerdictLabel::Unknown;
        return out;
    }

    if (reg.label == Regime::MassSuper) {
        const double sig = p.sigma();
        const double e0 = 0.5 * ginv.K - ginv.P; // E_0(gn): gamma-free energy
        const double lhsH = inv0.H * std::pow(inv0.M, sig);
        const double rhsH = e0 * std::pow(ginv.M, sig);
        const double lhsK = inv0.K * std::pow(inv0.M, sig);
        const double rhsK = ginv.K * std::pow(ginv.M, sig);
        out.evidence.push_back({"H*M^sigma < E0(gn)*M(gn)^sigma", lhsH, rhsH});
        out.evidence.push_back({"K*M^sigma < K(gn)*M(gn)^sigma", lhsK, rhsK});
        const int cH = compare_banded(lhsH, rhsH);
        const int cK = compare_banded(lhsK, rhsK);
        if (cH == 0 || cK == 0) {
            out.label = VerdictLabel::Boundary;
        } else if (cH < 0 && cK < 0) {
            const bool scatter_gate = (p.d >= 3 && p.d <= 5) && p.alpha < std::min(2.0, 0.5 * p.d);
            out.evidence.push_back({"alpha < min(2, d/2)", p.alpha, std::min(2.0, 0.5 * p.d)});
            out.label = scatter_gate ? VerdictLabel::GlobalAndScattering
                                     : VerdictLabel::GlobalBelowThreshold;
        } else {
            out.label = VerdictLabel::Unknown;
        }
        return out;
    }

    out.evidence.push_back({"regime admissible", static_cast<double>(reg.label == Regime::OutOfRange), 0.0});
    return out;
}

Verdict blowup_threshold_check(const FieldPair& state0, const GroundStateResult& gs,
                               const PhysParams& p, const PhysParams& gs_params,
                               std::optional<double> wp) {
    check_gs(gs, p, gs_params);
    const RegimeInfo reg = regime(p.d, p.alpha);
    const InvariantSet inv0 = invariants(state0, p);
    Verdict out;
    out.label = VerdictLabel::Unknown;

    if (wp && std::isfinite(*wp)) {
        const ActionSet act = action_nehari(state0, p);
        out.evidence.push_back({"A_omega < wp", act.A_omega, *wp});
        out.evidence.push_back({"B_omega < 0", act.B_omega, 0.0});
        out.evidence.push_back({"G < 0", inv0.G, 0.0});
        if (act.A_omega < *wp && act.B_omega < 0.0 && inv0.G < 0.0) {
            out.label = VerdictLabel::KMinusUnstable;
            return out;
        }
    }

    out.evidence.push_back({"H(u0,v0) < 0", inv0.H, 0.0});
    if (inv0.H < 0.0) {
        out.label = VerdictLabel::BlowupOrGrowup;
        return out;
    }

    if (reg.label == Regime::MassSuper) {
        check_gn_normalization(gs_params);
        const InvariantSet ginv = invariants(gs.fields, gs_params);
        const double sig = p.sigma();
        const double e0 = 0.5 * ginv.K - ginv.P;
        const double lhsH = inv0.H * std::pow(inv0.M, sig);
        const double rhsH = e0 * std::pow(ginv.M, sig);
        const double lhsK = inv0.K * std::pow(inv0.M, sig);
        const double rhsK = ginv.K * std::pow(ginv.M, sig);
        out.evidence.push_back({"H*M^sigma < E0(gn)*M(gn)^sigma", lhsH, rhsH});
        out.evidence.push_back({"K*M^sigma > K(gn)*M(gn)^sigma", lhsK, rhsK});
        if (compare_banded(lhsH, rhsH) < 0 && compare_banded(lhsK, rhsK) > 0) {
            out.label = VerdictLabel::BlowupOrGrowup;
            return out;
        }
    }
    return out;
}

StabilityVerdict stability_criterion(const PhysParams& p) {
    StabilityVerdict out;
    if (p.gamma == 0.0) {
        const bool stable = p.d2a() < 4.0;
        out.expected =
            stable ? StabilityVerdict::Expectation::Stable : StabilityVerdict::Expectation::Unstable;
        out.reason = stable ? "d+2*alpha < 4 (L''(omega) > 0 in the gamma=0 closed form)"
                            : "d+2*alpha >= 4 (criterion fails)";
    } else {
        out.expected = StabilityVerdict::Expectation::Indeterminate;
        out.reason = "L''(omega) sign not evaluated";
    }
    return out;
}

} // namespace inls
