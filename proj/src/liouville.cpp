#include "liouville.hpp"

#include <cmath>

#include "discrete.hpp"
#include "errors.hpp"

namespace calkit {

namespace {

ScalarField sqrt_field(const ScalarField& a, const char* where) {
    if (!a.is_real())
        throw Error(errc::bad_argument, std::string(where) + ": a must be real");
    ScalarField r(a.grid);
    for (Eigen::Index i = 0; i < a.values.size(); ++i) {
        const double v = a.values[i].real();
        if (!(v > 0.0))
            throw Error(errc::bad_argument,
                        std::string(where) + ": a must be uniformly positive");
        r.values[i] = std::sqrt(v);
    }
    return r;
}

} // namespace

ScalarField potential_of(const ScalarField& a) {
    const Grid& g = *a.grid;
    if (g.m < 5)
        throw Error(errc::bad_argument,
                    "potential_of: one-sided stencils need m >= 5");
    ScalarField s = sqrt_field(a, "potential_of");
    ScalarField q(a.grid);
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k)
                q.values[g.flat(i, j, k)] =
                    fd::laplacian(s, i, j, k) / s.values[g.flat(i, j, k)];
    return q;
}

BoundaryVectorField boundary_gradient(const ScalarField& a) {
    if (!a.is_real())
        throw Error(errc::bad_argument, "boundary_gradient: field must be real");
    const Grid& g = *a.grid;
    BoundaryVectorField out;
    out.grid = a.grid;
    out.values.resize(g.n_boundary(), 3);
    for (int b = 0; b < g.n_boundary(); ++b) {
        const auto& n = g.boundary[b].ijk;
        for (int axis = 0; axis < 3; ++axis)
            out.values(b, axis) = fd::d1_axis(a, n[0], n[1], n[2], axis).real();
    }
    return out;
}

DnMap dn_transform(const DnMap& N_a, const BoundaryField& a_b,
                   const BoundaryVectorField& grad_a_b) {
    require_same_grid(*N_a.grid, *a_b.grid, "dn_transform");
    require_same_grid(*N_a.grid, *grad_a_b.grid, "dn_transform");
    const Grid& g = *N_a.grid;
    const int n = g.n_boundary();

    VecX inv_sqrt(n), diag(n);
    for (int b = 0; b < n; ++b) {
        const cplx av = a_b.values[b];
        if (av.imag() != 0.0 || !(av.real() > 0.0))
            throw Error(errc::bad_argument,
                        "dn_transform: boundary conductivity must be real "
                        "and positive");
        inv_sqrt[b] = 1.0 / std::sqrt(av.real());
        diag[b] = g.boundary[b].normal.dot(
                      grad_a_b.values.row(b).transpose()) /
                  (2.0 * av.real());
    }

    DnMap out;
    out.grid = N_a.grid;
    out.kind = "schrodinger";
    out.coefficient_hash = N_a.coefficient_hash;
    if (N_a.is_real()) {
        const MatX& M = std::get<MatX>(N_a.mat);
        MatX r = inv_sqrt.asDiagonal() * M * inv_sqrt.asDiagonal();
        r.diagonal() += diag;
        out.mat = std::move(r);
    } else {
        const MatXc& M = std::get<MatXc>(N_a.mat);
        MatXc r = inv_sqrt.cast<cplx>().asDiagonal() * M *
                  inv_sqrt.cast<cplx>().asDiagonal();
        r.diagonal() += diag.cast<cplx>();
        out.mat = std::move(r);
    }
    return out;
}

UniquenessReport uniqueness_gap(const ScalarField& a1, const ScalarField& a2) {
    require_same_grid(*a1.grid, *a2.grid, "uniqueness_gap");
    const Grid& g = *a1.grid;
    ScalarField s1 = sqrt_field(a1, "uniqueness_gap");
    ScalarField s2 = sqrt_field(a2, "uniqueness_gap");
    ScalarField q1 = potential_of(a1);
    ScalarField q2 = potential_of(a2);

    ScalarField y(a1.grid);
    y.values = s1.values - s2.values;

    UniquenessReport rep;
    rep.potential_gap = (q1.values - q2.values).lpNorm<Eigen::Infinity>();

    double acc = 0.0;
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const int fl = g.flat(i, j, k);
                const cplx r = -fd::laplacian(y, i, j, k) +
                               q2.values[fl] * y.values[fl];
                acc += g.volume_weight[fl] * std::norm(r);
            }
    rep.interior_residual = std::sqrt(acc);

    double bacc = 0.0;
    for (int b = 0; b < g.n_boundary(); ++b)
        bacc += g.boundary[b].weight * std::norm(y.values[g.boundary[b].flat]);
    rep.boundary_norm = std::sqrt(bacc);
    return rep;
}

} // namespace calkit
