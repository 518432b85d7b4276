#pragma once

#include "fields.hpp"

namespace calkit {

/// Outward gradient samples on the boundary node list (rows follow
/// Grid::boundary order).
struct BoundaryVectorField {
    GridPtr grid;
    Eigen::Matrix<double, Eigen::Dynamic, 3> values;
};

/// The Schrodinger potential induced by a conductivity:
/// q = a^{-1/2} * Lap_h(a^{1/2}), with one-sided second-order stencils at
/// the boundary.  Requires real a > 0 and m >= 5.
ScalarField potential_of(const ScalarField& a);

/// Gradient of a real field sampled at the boundary nodes (second-order
/// stencils, one-sided where the node touches a face).
BoundaryVectorField boundary_gradient(const ScalarField& a);

/// Conductivity-to-Schrodinger transform of a DN map:
///   (L phi) = a^{-1/2} N_a(a^{-1/2} phi) + ((nu . grad a) / (2a)) phi
/// on the boundary nodes, assembled as D N D + diagonal with
/// D = diag(a^{-1/2}).  Derivation: v = a^{1/2} u maps the conductivity
/// solution u (with u|bdry = a^{-1/2} phi) to the Schrodinger solution with
/// potential potential_of(a) and trace phi, and
/// d_nu v = a^{1/2} d_nu u + (nu . grad a) / (2 a^{1/2}) u.
DnMap dn_transform(const DnMap& N_a, const BoundaryField& a_b,
                   const BoundaryVectorField& grad_a_b);

/// Residuals of the uniqueness step: y = a1^{1/2} - a2^{1/2} should satisfy
/// (-Lap + q2) y = 0 with zero trace whenever the two conductivities induce
/// the same potential and agree with their gradients on the boundary.
struct UniquenessReport {
    double interior_residual = 0.0; // L2 of (-Lap_h + q2) y over interior
    double boundary_norm = 0.0;     // surface L2 of y
    double potential_gap = 0.0;     // max |potential_of(a1) - potential_of(a2)|
};

UniquenessReport uniqueness_gap(const ScalarField& a1, const ScalarField& a2);

} // namespace calkit
