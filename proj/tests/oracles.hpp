#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <functional>

#include "inlslab/ground_state.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/params.hpp"

namespace oracles {

/// Shooting-method solution of (1/2)ΔQ - ωQ + r^{-a} Q² = 0: RK4 integration
/// outward from a series start near r = 0, bisecting on Q(0). Returns node
/// samples on the given radial grid.
inls::RVec shooting_Q(const inls::PhysParams& p, const inls::Grid& grid);

/// Independent minimizer of A_ω: plain (unpreconditioned) projected gradient
/// descent on A with an explicit Nehari rescale every step.
double nehari_projected_gradient_d_omega(const inls::PhysParams& p, inls::GridPtr grid,
                                         int iters);

/// A_ω at a state, via the same functional code (for the oracle loop).
double action_value(const inls::FieldPair& s, const inls::PhysParams& p);

} // namespace oracles
