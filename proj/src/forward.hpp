#pragma once

#include "fields.hpp"

namespace calkit {

/// Diagnostics from a Dirichlet solve.
struct SolveReport {
    int n_interior = 0;
    double residual = 0.0; // relative l2 residual of the interior system
    std::string solver;    // "ldlt", "sparselu"
};

/// Dirichlet problem for the Schrodinger operator: find v with
/// (-Lap_h + q) v = 0 at interior nodes and v = phi on the boundary.
/// The potential is admissible when the factorization succeeds and the
/// relative residual stays below 1e-6; otherwise Error(errc::solver) is
/// thrown (the operational stand-in for unique solvability).
ScalarField solve_schrodinger(const ScalarField& q, const BoundaryField& phi,
                              SolveReport* report = nullptr);

/// Source variant: (-Lap_h + q) v = f at interior nodes, v = 0 on the
/// boundary.
ScalarField solve_schrodinger_source(const ScalarField& q, const ScalarField& f,
                                     SolveReport* report = nullptr);

/// Face-coefficient averaging for the flux-form conductivity operator.
/// Harmonic is the default (robust under contrast and exact for constant
/// flux); arithmetic is available for studies that need a scheme with
/// nonzero truncation error on exponential profiles.
enum class FaceAverage { harmonic, arithmetic };

/// Dirichlet problem for the conductivity operator in flux form:
/// -div_h(a grad_h u) = 0 with averaged face coefficients.  Requires a real
/// and uniformly positive.
ScalarField solve_conductivity(const ScalarField& a, const BoundaryField& phi,
                               SolveReport* report = nullptr,
                               FaceAverage avg = FaceAverage::harmonic);

/// Outward normal derivative on the boundary node list (one-sided
/// second-order stencil, exact on quadratics).
BoundaryField neumann_trace(const ScalarField& v);

/// Dense Dirichlet-to-Neumann matrix of -Lap_h + q: column j is the normal
/// trace of the solution with the j-th boundary indicator as data.
DnMap dn_map_schrodinger(const ScalarField& q);

/// Dense map phi -> a * normal trace of the conductivity solution.
DnMap dn_map_conductivity(const ScalarField& a,
                          FaceAverage avg = FaceAverage::harmonic);

} // namespace calkit
