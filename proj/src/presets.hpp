#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fields.hpp"
#include "rng.hpp"

namespace calkit {

/// Sample a callable on every grid node.
template <class F>
ScalarField field_from(GridPtr grid, F&& fn) {
    ScalarField out(grid);
    const Grid& g = *grid;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k)
                out.values[g.flat(i, j, k)] = fn(g.node(i, j, k));
    return out;
}

/// Sample a callable on the boundary node list.
template <class F>
BoundaryField boundary_from(GridPtr grid, F&& fn) {
    BoundaryField out(grid);
    for (int b = 0; b < grid->n_boundary(); ++b) {
        const auto& n = grid->boundary[b].ijk;
        out.values[b] = fn(grid->node(n[0], n[1], n[2]));
    }
    return out;
}

/// Named nodal fields shared by the CLI, the C API and the test corpora.
/// Parameter counts are fixed per name:
///   zero                 ()
///   constant             (c)
///   gaussian_bump        (amp, sigma)           amp*exp(-|x|^2/(2 sigma^2))
///   offset_bump          (amp, sigma, cx,cy,cz) bump centered at c
///   exp_x1               ()                     e^{x1}
///   exp_neg_x1           ()                     e^{-x1}
///   exp_x1sq             ()                     e^{x1^2}
///   exp_sqrtc_x1         (c)                    e^{sqrt(c) x1}, c >= 0
///   linear_x1            ()                     x1
///   quad_x1sq_minus_x2sq ()                     x1^2 - x2^2
///   exp_x1_cos_sqrt2_x2  ()                     e^{x1} cos(sqrt(2) x2)
///   one_plus_cos2_bump   (amp)   1 + amp*prod_d cos^2(pi x_d / 2L); equals 1
///                                on the boundary with vanishing gradient
/// Throws std::invalid_argument for unknown names or wrong parameter counts.
ScalarField make_field_preset(GridPtr grid, const std::string& name,
                              const std::vector<double>& params);

/// Boundary trace of the named field preset (same names and parameters).
BoundaryField make_boundary_preset(GridPtr grid, const std::string& name,
                                   const std::vector<double>& params);

/// Smooth random function vanishing on the boundary together with its first
/// derivatives.  Consumes exactly 15 uniform draws: for each of three bumps,
/// amplitude in [-1,1], center in [-L/2,L/2]^3, width in [0.15L, 0.45L].
/// The sum of bumps is multiplied by the window prod_d (1 - (x_d/L)^2)^2.
ScalarField random_zero_trace(GridPtr grid, Lcg64& rng);

} // namespace calkit
