#pragma once

#include "fields.hpp"

namespace calkit {
namespace fd {

// Finite-difference stencils on the nodal cube grid.  All are second-order
// accurate; near a face the second derivative switches to the one-sided
// four-point form and the normal derivative uses the one-sided three-point
// form, both exact on quadratics.

/// Second derivative along one axis at node (i,j,k).
inline cplx d2_axis(const ScalarField& f, int i, int j, int k, int axis) {
    const Grid& g = *f.grid;
    int ijk[3] = {i, j, k};
    auto val = [&](int off) {
        int n[3] = {ijk[0], ijk[1], ijk[2]};
        n[axis] += off;
        return f.values[g.flat(n[0], n[1], n[2])];
    };
    const double h2 = g.h * g.h;
    const int p = ijk[axis];
    if (p == 0)
        return (2.0 * val(0) - 5.0 * val(1) + 4.0 * val(2) - val(3)) / h2;
    if (p == g.m - 1)
        return (2.0 * val(0) - 5.0 * val(-1) + 4.0 * val(-2) - val(-3)) / h2;
    return (val(1) - 2.0 * val(0) + val(-1)) / h2;
}

/// Seven-point Laplacian (one-sided parts near faces).  Interior nodes use
/// the classical centered stencil.
inline cplx laplacian(const ScalarField& f, int i, int j, int k) {
    return d2_axis(f, i, j, k, 0) + d2_axis(f, i, j, k, 1) + d2_axis(f, i, j, k, 2);
}

/// First derivative along one axis, one-sided three-point at the faces,
/// centered inside; second order everywhere.
inline cplx d1_axis(const ScalarField& f, int i, int j, int k, int axis) {
    const Grid& g = *f.grid;
    int ijk[3] = {i, j, k};
    auto val = [&](int off) {
        int n[3] = {ijk[0], ijk[1], ijk[2]};
        n[axis] += off;
        return f.values[g.flat(n[0], n[1], n[2])];
    };
    const double h2 = 2.0 * g.h;
    const int p = ijk[axis];
    if (p == 0) return (-3.0 * val(0) + 4.0 * val(1) - val(2)) / h2;
    if (p == g.m - 1) return (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / h2;
    return (val(1) - val(-1)) / h2;
}

/// Centered first derivative along one axis; requires an interior offset on
/// that axis.
inline cplx d1_centered(const ScalarField& f, int i, int j, int k, int axis) {
    const Grid& g = *f.grid;
    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
    lo[axis] -= 1;
    hi[axis] += 1;
    return (f.values[g.flat(hi[0], hi[1], hi[2])] -
            f.values[g.flat(lo[0], lo[1], lo[2])]) /
           (2.0 * g.h);
}

/// Outward normal derivative at a boundary record, one-sided three-point.
/// With f1, f2 the first and second nodes inward of f0, the combination
/// (3 f0 - 4 f1 + f2) / (2h) is the outward derivative on either face
/// orientation (the inward step flips together with the normal).
inline cplx normal_derivative(const ScalarField& f, const BoundaryNode& b) {
    const Grid& g = *f.grid;
    int axis = 0;
    for (int d = 0; d < 3; ++d)
        if (b.normal[d] != 0.0) axis = d;
    const int step = (b.normal[axis] > 0.0) ? -1 : 1; // inward
    int n1[3] = {b.ijk[0], b.ijk[1], b.ijk[2]};
    int n2[3] = {b.ijk[0], b.ijk[1], b.ijk[2]};
    n1[axis] += step;
    n2[axis] += 2 * step;
    const cplx f0 = f.values[b.flat];
    const cplx f1 = f.values[g.flat(n1[0], n1[1], n1[2])];
    const cplx f2 = f.values[g.flat(n2[0], n2[1], n2[2])];
    return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * g.h);
}

} // namespace fd
} // namespace calkit
