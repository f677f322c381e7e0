#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "inlslab/params.hpp"

namespace inls {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;
using RVec = std::vector<double>;

enum class GridKind { Cartesian, Radial };

struct GridSpec {
    GridKind kind = GridKind::Radial;
    int d = 2;
    double extent = 16.0;         // half-width L (Cartesian) or R_max (Radial)
    std::vector<int> counts{1024}; // per-axis sample counts (Radial: one entry)
    double alpha = -1.0;           // if >= 0, weight_alpha is populated at build
};

class SpectralEngine;

/// Spatial discretization. Immutable after construction; share via shared_ptr.
///
/// Radial grids are cell-centered: nodes r_i = (i+1/2) h on [0, R_max], cells
/// [ih, (i+1)h], quad weight = exact cell volume S_d (R_{i+1}^d - R_i^d)/d.
/// Cartesian grids are midpoint-offset uniform: x_j = -L + (j+1/2) h per axis
/// (no node at the origin), quad weight = h^d.
class Grid {
  public:
    GridKind kind;
    int d;
    double extent;
    std::vector<int> shape;
    std::vector<double> spacing;
    RVec quad_weights;
    RVec weight_alpha;               // empty unless built with alpha >= 0
    double weight_alpha_exponent;    // exponent of weight_alpha, < 0 if unset
    RVec spectral_multipliers;       // Cartesian: Laplacian symbol -(|k|^2) per node

    // Radial finite-volume Laplacian stencil (cached at build):
    //   (Δf)_i = fv_lower[i] f_{i-1} + fv_diag[i] f_i + fv_upper[i] f_{i+1}
    RVec fv_lower, fv_diag, fv_upper;
    RVec face_weights; // R_i^{d-1} at the n+1 cell faces (Radial)

    ~Grid();

    std::size_t size() const { return quad_weights.size(); }
    double volume() const;

    // Radial node/face radii
    double node_r(std::size_t i) const { return (static_cast<double>(i) + 0.5) * spacing[0]; }
    double face_r(std::size_t i) const { return static_cast<double>(i) * spacing[0]; }

    // Cartesian node coordinate along an axis
    double node_x(int axis, std::size_t idx) const {
        return -extent + (static_cast<double>(idx) + 0.5) * spacing[static_cast<std::size_t>(axis)];
    }

    // |x| at a flattened node index (both kinds)
    double node_radius(std::size_t flat) const;

    const SpectralEngine& spectral() const { return *spectral_; }
    bool has_spectral() const { return spectral_ != nullptr; }

    friend std::shared_ptr<const Grid> build_grid(const GridSpec& spec);

  private:
    Grid() = default;
    std::unique_ptr<SpectralEngine> spectral_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid per spec; rejects Cartesian d > 2, counts < 16, extent <= 0.
GridPtr build_grid(const GridSpec& spec);

/// Regularized samples of |x|^{-alpha}. Radial origin cell carries the exact
/// cell average of |x|^{-alpha}; Cartesian nodes are offset so none sits at 0.
/// alpha = 0 yields all ones. Rejects alpha >= d and alpha outside the gate.
RVec singular_weight(const Grid& g, double alpha);

/// weight_alpha if the grid was built with this exponent, else fresh samples.
RVec resolve_weight(const Grid& g, double alpha);

double integrate(std::span<const double> f, const Grid& g);
Complex integrate(std::span<const Complex> f, const Grid& g);

/// Discrete Laplacian: exact spectral multiplier (Cartesian) or second-order
/// finite volume with even symmetry at r=0 and homogeneous Dirichlet at R_max.
CVec laplacian(const CVec& f, const Grid& g);
RVec laplacian(const RVec& f, const Grid& g);

/// ||∇f||² = Re<-Δf, f> under the grid quadrature (summation-by-parts exact
/// on Radial grids, Parseval-exact on Cartesian grids).
double grad_norm_sq(const CVec& f, const Grid& g);
double grad_norm_sq(const RVec& f, const Grid& g);

double norm_sq(const CVec& f, const Grid& g);
double norm_sq(const RVec& f, const Grid& g);

/// Spectral partial derivative along an axis (Cartesian only).
CVec gradient_axis(const CVec& f, const Grid& g, int axis);

/// Solves (a - b Δ) x = rhs. Radial: complex tridiagonal (Thomas); Cartesian:
/// spectral division. Used by Crank-Nicolson steps and solver preconditioners.
CVec solve_helmholtz(Complex a, Complex b, const CVec& rhs, const Grid& g);
RVec solve_helmholtz(double a, double b, const RVec& rhs, const Grid& g);

struct FieldPair {
    CVec u;
    CVec v;
    GridPtr grid;

    bool conforms() const {
        return grid && u.size() == grid->size() && v.size() == grid->size();
    }
    bool finite() const;
};

bool all_finite(std::span<const Complex> f);
bool all_finite(std::span<const double> f);

} // namespace inls
