#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace inls {

struct SolverOptions {
    double tol = 1e-8;        // relative projected-gradient norm
    int max_iters = 50000;
    std::string init = "gaussian"; // "gaussian" | "random"
    std::uint64_t seed = 0;
};

/// Converged minimizer of the action A_ω on the Nehari manifold {B_ω = 0}.
/// The profiles are real, nonnegative, and (for default inits) radially
/// decreasing; B_ω vanishes exactly after the final Nehari rescale.
struct GroundStateResult {
    FieldPair fields;                     // (phi, psi)
    double d_omega = 0.0;                 // action value A_ω = P/2
    double c_omega = 0.0;                 // mountain-pass level along the ray
    double C_GN = 0.0;                    // Weinstein quotient of the minimizer
    std::pair<double, double> pohozaev_res{0.0, 0.0};
    double decay_rate = 0.0;              // fitted exponential tail rate of phi
    int iterations = 0;
    bool converged = false;
    double eq_residual = 0.0;             // stationary-equation residual, weighted L²
};

/// Projected gradient flow on the scale-reduced objective J = S³/(54 P²)
/// (amplitude-invariant; its infimum equals d_ω), preconditioned by
/// (c - bΔ)^{-1}, with backtracking so J is nonincreasing along accepted
/// steps. Throws InvalidFrequency / NonpositiveP on bad inputs; soft-fails
/// with converged=false when the gradient stalls above tolerance.
GroundStateResult minimize_nehari(const PhysParams& p, GridPtr grid,
                                  const SolverOptions& opts = {},
                                  const FieldPair* init = nullptr);

/// r1: relative residual of the first Pohozaev identity (the B_ω identity),
/// r2: relative residual of the dilation identity K = (d+2a)/2 P.
std::pair<double, double> pohozaev_residuals(const GroundStateResult& gs, const PhysParams& p);

/// Sharp constant C_GN = W(phi, psi); throws NotConverged on a failed solve.
double gn_constant(const GroundStateResult& gs, const PhysParams& p);

/// Algebraic cross-check value: (2/(d+2a)) (K M^σ)^{-(d+2a-4)/4} when
/// d+2a > 4, or 1/(2 sqrt(M)) in the mass-critical case d+2a = 4.
double gn_constant_crosscheck(const GroundStateResult& gs, const PhysParams& p);

/// Positive radial solution of (1/2)ΔQ - ωQ + |x|^{-a} Q² = 0 via the same
/// Nehari gradient flow specialized to one component.
struct ScalarQResult {
    RVec Q;
    GridPtr grid;
    double action = 0.0;
    double eq_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
ScalarQResult scalar_Q(const PhysParams& p, GridPtr grid, const SolverOptions& opts = {});

/// Mountain-pass level along the amplitude ray through the minimizer
/// (closed form max of λ²S/2 - λ³P); equals d_ω on a Nehari point.
double mountain_pass_level(const GroundStateResult& gs, const PhysParams& p);

/// Least-squares exponential rate of the phi tail over [0.5, 0.9] R_max.
double decay_fit(const GroundStateResult& gs);
double decay_fit_field(const CVec& f, const Grid& g);

struct AlphaLimitRow {
    double alpha;
    double d_omega;
    double h1_distance; // to the alpha = 0 ground state
};

/// Ground-state sweep over a descending alpha list (alpha = 0 allowed);
/// distances are against the alpha = 0 state (solved as an extra reference
/// when the list does not end at 0).
std::vector<AlphaLimitRow> alpha_limit(const PhysParams& p0, const std::vector<double>& alphas,
                                       GridPtr grid, const SolverOptions& opts = {});

struct DMinusResult {
    double d_minus;
    double wp; // min(d_omega, d_minus)
};

/// Minimizes A_ω over the {G = 0} slice via the mass-preserving dilation
/// (closed form for d+2a > 4; mass-critical γ=0 uses the exact GN floor
/// ω/(4 C_GN²)). Requires d+2a >= 4.
DMinusResult compute_d_minus(const PhysParams& p, GridPtr grid,
                             const SolverOptions& opts = {}, const FieldPair* init = nullptr,
                             std::optional<double> d_omega_hint = std::nullopt);

/// H¹ distance ||(f1,g1) - (f2,g2)||_{H¹} under the grid quadrature.
double h1_distance(const FieldPair& a, const FieldPair& b);
double h1_norm(const FieldPair& a);

} // namespace inls
