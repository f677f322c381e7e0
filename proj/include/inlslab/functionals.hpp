#pragma once

#include "inlslab/cutoff.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

/// Conserved quantities and the Pohozaev functional of a state:
///   M = ||u||² + 2||v||²,  K = ||∇u||² + κ||∇v||²,
///   P = Re ∫ |x|^{-a} u² conj(v),  E = K/2 + γ||v||² - P,
///   G = K - (d+2a)/2 P,  H = E (γ>=0) or E + |γ|/2 M (γ<0).
struct InvariantSet {
    double M, K, P, E, G, H;
    double v_mass; // ||v||², needed by the action pieces
};

/// Action-side quantities: S = K + 2ωM + 2γ||v||², B_ω = S - 3P, A_ω = E + ωM.
struct ActionSet {
    double A_omega, B_omega, S;
};

InvariantSet invariants(const FieldPair& state, const PhysParams& p);
ActionSet action_nehari(const FieldPair& state, const PhysParams& p);

/// Weight-supplied overloads for hot loops (avoid per-call weight copies).
InvariantSet invariants(const FieldPair& state, const PhysParams& p, const RVec& weight);
double weighted_cubic(const FieldPair& state, const PhysParams& p, const RVec& weight);

/// Scale-invariant Weinstein quotient W = P / (K^{(d+2a)/4} M^{(6-d-2a)/4}).
/// Throws ZeroState when M*K = 0.
double weinstein(const FieldPair& state, const PhysParams& p);

/// Riesz representer of A'_ω: dA_ω[h] = 2 Re ∫ (conj(g.u) h_u + conj(g.v) h_v).
FieldPair action_gradient(const FieldPair& state, const PhysParams& p);

struct VirialMoment {
    double V;    // ∫ chi (|u|² + 2|v|²)
    double Mchi; // Im ∫ ∇chi · (∇u conj(u) + ∇v conj(v))
    double Vdot; // Im ∫ ∇chi · (∇u conj(u) + 2κ ∇v conj(v)) = dV/dt
};

/// On Radial grids the momenta use an exact summation-by-parts face form, so
/// Vdot equals the semi-discrete d/dt of V identically; when κ = 1/2 the
/// formulas for Vdot and Mchi coincide.
VirialMoment virial_moment(const FieldPair& state, const CutoffFn& c, const PhysParams& p);

/// d/dt Mchi per the radial identity (bi-Laplacian term, gradient terms, and
/// the |x|^{-a}-weighted nonlinear term). Quadratic kind returns exactly 2 G.
double virial_rate(const FieldPair& state, const CutoffFn& c, const PhysParams& p);

/// ∫_{|x| <= R} (|u|² + 2|v|²)
double local_mass(const FieldPair& state, double R);

/// ∫ |x|^{-a} (|u|³ + |v|³)
double weighted_cubic(const FieldPair& state, const PhysParams& p);

} // namespace inls
