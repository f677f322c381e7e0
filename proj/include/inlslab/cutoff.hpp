#pragma once

#include "inlslab/grid.hpp"

namespace inls {

enum class CutoffKind { ChiR, PhiR, RhoR, Quadratic };

/// Radial cutoff sampled on a grid, with derivative and Laplacian samples.
/// ChiR: r^2 inside |x| <= R, flattened smoothly, gradient supported in
/// {|x| <= 2R}. PhiR: the virial weight with bounded second derivative used
/// by the space-time diagnostics. RhoR: plateau cutoff, 1 on |x| <= R/2 and
/// 0 on |x| >= R. Quadratic: chi = |x|^2 on the whole grid.
struct CutoffFn {
    CutoffKind kind;
    double R;
    GridPtr grid;
    RVec chi;
    RVec dchi;     // chi'
    RVec d2chi;    // chi''
    RVec lap;      // Δchi
    RVec bilap;    // Δ²chi

    double chi_at(double r) const;
    double dchi_at(double r) const;
    double d2chi_at(double r) const;
};

/// Samples the cutoff on the grid. Throws DomainTooSmall if the support
/// (2R for ChiR/PhiR, R for RhoR) exceeds the grid extent.
CutoffFn make_cutoff(CutoffKind kind, double R, GridPtr grid);

// Scale-free profile values (argument s = r/R); exposed for tests.
namespace cutoff_profile {
double zeta(double s);    // chi'(s) of the ChiR profile
double dzeta(double s);
double chi(double s);     // ∫_0^s zeta
double phi(double s);     // PhiR profile
double dphi(double s);
double eta(double s);     // phi''
double rho(double s);     // RhoR profile
} // namespace cutoff_profile

} // namespace inls
