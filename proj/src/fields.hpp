#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "geometry.hpp"

namespace calkit {

using cplx = std::complex<double>;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;

/// Complex scalar field sampled at the m^3 nodes of the cube grid,
/// flat index (i*m + j)*m + k.
struct ScalarField {
    GridPtr grid;
    VecXc values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g) : grid(std::move(g)) {
        values = VecXc::Zero(grid->n_nodes());
    }

    cplx& at(int i, int j, int k) { return values[grid->flat(i, j, k)]; }
    cplx at(int i, int j, int k) const { return values[grid->flat(i, j, k)]; }

    bool is_real(double tol = 0.0) const;

    /// Trapezoid L2 norm over the cube.
    double norm_l2() const;
};

/// Complex values on the boundary node list, one entry per Grid::boundary
/// record, in list order.
struct BoundaryField {
    GridPtr grid;
    VecXc values;

    BoundaryField() = default;
    explicit BoundaryField(GridPtr g) : grid(std::move(g)) {
        values = VecXc::Zero(grid->n_boundary());
    }

    /// Trapezoid L2 norm over the cube surface.
    double norm_l2() const;
};

/// Dense Dirichlet-to-Neumann matrix acting on boundary fields.  Real
/// coefficients produce a real matrix (stored as such to halve memory);
/// complex coefficients a complex one.
struct DnMap {
    GridPtr grid;
    std::string kind;             // "schrodinger" or "conductivity"
    std::string coefficient_hash; // fnv1a over the coefficient samples
    std::variant<MatX, MatXc> mat;

    int size() const { return grid->n_boundary(); }
    bool is_real() const { return std::holds_alternative<MatX>(mat); }

    cplx entry(int row, int col) const;
    BoundaryField apply(const BoundaryField& f) const;

    /// this - other as a dense complex matrix (kinds may differ).
    MatXc difference(const DnMap& other) const;
};

/// Complex samples on the M^3 periodicity-box grid, y in [-R,R)^3 with
/// spacing 2R/M, flat index (i*M + j)*M + k.  Used by the spectral solver.
struct QField {
    GridPtr grid;
    VecXc values;

    QField() = default;
    explicit QField(GridPtr g) : grid(std::move(g)) {
        const long n = static_cast<long>(grid->M) * grid->M * grid->M;
        values = VecXc::Zero(n);
    }

    int M() const { return grid->M; }
    long flat(int i, int j, int k) const {
        return (static_cast<long>(i) * M() + j) * M() + k;
    }
    double coord(int i) const { return -grid->R + (2.0 * grid->R / M()) * i; }

    /// Discrete L2 norm on the box, cell weight (2R/M)^3.
    double norm_l2() const;
};

/// FNV-1a hash of a field's raw bytes, rendered "fnv1a:%016x".  Identifies
/// coefficients in sidecar metadata.
std::string field_hash(const ScalarField& f);

/// Same sampling geometry (R, L, m, M), regardless of object identity.
bool grids_compatible(const Grid& a, const Grid& b);

/// Throws Error(errc::dimension) when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// Trilinear interpolation at x (clamped cells, zero outside [-L,L]^3).
cplx interp_cube(const ScalarField& f, const Vec3& x);

/// Periodic trilinear interpolation on the box grid.
cplx interp_box(const QField& f, const Vec3& y);

} // namespace calkit
