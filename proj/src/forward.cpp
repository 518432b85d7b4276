#include "forward.hpp"

#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "discrete.hpp"
#include "errors.hpp"

namespace calkit {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;

constexpr double kResidualTol = 1e-6; // admissibility cutoff
constexpr int kRhsBlock = 256;        // multi-RHS factor reuse block width

struct IndexMap {
    std::vector<int> to_int; // flat node -> interior index, -1 on boundary
    std::vector<int> nodes;  // interior index -> flat node
};

IndexMap interior_index(const Grid& g) {
    IndexMap im;
    im.to_int.assign(g.n_nodes(), -1);
    im.nodes.reserve(static_cast<size_t>(g.m - 2) * (g.m - 2) * (g.m - 2));
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const int fl = g.flat(i, j, k);
                im.to_int[fl] = static_cast<int>(im.nodes.size());
                im.nodes.push_back(fl);
            }
    return im;
}

/// Interior system A x = B phi for one of the two operators.  The coupling
/// matrix B (interior x boundary) is real in both cases; only the diagonal
/// can turn complex (complex Schrodinger potentials).
struct System {
    IndexMap idx;
    SpMat A;
    SpMatC Ac;
    bool complex_coeff = false;
    SpMat B;
};

/// coeff(c_flat, axis, dir) is the stencil coupling between a node and its
/// neighbor one step along axis in direction dir.
template <class CoeffFn>
System assemble(const Grid& g, bool complex_diag, const VecXc& diag_term,
                CoeffFn&& coeff) {
    System sys;
    sys.idx = interior_index(g);
    sys.complex_coeff = complex_diag;
    const int n_int = static_cast<int>(sys.idx.nodes.size());
    const int n_b = g.n_boundary();

    std::vector<Eigen::Triplet<double>> ta, tb;
    std::vector<Eigen::Triplet<cplx>> tac;
    ta.reserve(static_cast<size_t>(n_int) * 7);

    for (int r = 0; r < n_int; ++r) {
        const int fl = sys.idx.nodes[r];
        const int k = fl % g.m, j = (fl / g.m) % g.m, i = fl / (g.m * g.m);
        cplx diag = diag_term[fl];
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                int nb[3] = {ijk[0], ijk[1], ijk[2]};
                nb[axis] += dir;
                const int nfl = g.flat(nb[0], nb[1], nb[2]);
                const double c = coeff(fl, nfl);
                diag += c;
                const int nint = sys.idx.to_int[nfl];
                if (nint >= 0) {
                    if (complex_diag)
                        tac.emplace_back(r, nint, cplx(-c, 0.0));
                    else
                        ta.emplace_back(r, nint, -c);
                } else {
                    tb.emplace_back(r, g.boundary_slot(nfl), c);
                }
            }
        }
        if (complex_diag)
            tac.emplace_back(r, r, diag);
        else
            ta.emplace_back(r, r, diag.real());
    }

    if (complex_diag) {
        sys.Ac.resize(n_int, n_int);
        sys.Ac.setFromTriplets(tac.begin(), tac.end());
    } else {
        sys.A.resize(n_int, n_int);
        sys.A.setFromTriplets(ta.begin(), ta.end());
    }
    sys.B.resize(n_int, n_b);
    sys.B.setFromTriplets(tb.begin(), tb.end());
    return sys;
}

System assemble_schrodinger(const Grid& g, const ScalarField& q) {
    const double ih2 = 1.0 / (g.h * g.h);
    return assemble(g, !q.is_real(), q.values,
                    [ih2](int, int) { return ih2; });
}

System assemble_conductivity(const Grid& g, const ScalarField& a, FaceAverage avg) {
    if (!a.is_real())
        throw Error(errc::bad_argument, "conductivity must be real");
    double amin = a.values[0].real();
    for (Eigen::Index i = 0; i < a.values.size(); ++i)
        amin = std::min(amin, a.values[i].real());
    if (!(amin > 0.0))
        throw Error(errc::bad_argument, "conductivity must be uniformly positive");
    const double ih2 = 1.0 / (g.h * g.h);
    const VecXc zero = VecXc::Zero(g.n_nodes());
    const VecXc* av = &a.values;
    const bool harm = (avg == FaceAverage::harmonic);
    return assemble(g, false, zero, [ih2, av, harm](int fl, int nfl) {
        const double ac = (*av)[fl].real(), an = (*av)[nfl].real();
        return ih2 * (harm ? 2.0 * ac * an / (ac + an) : 0.5 * (ac + an));
    });
}

/// Factor-once solver with a residual gate.  Real systems try LDLT first and
/// fall back to SparseLU; complex systems go straight to SparseLU.
class Factor {
public:
    explicit Factor(const System& sys) : sys_(sys) {
        if (sys_.complex_coeff) {
            luc_.compute(sys_.Ac);
            if (luc_.info() != Eigen::Success)
                throw Error(errc::solver, "factorization failed (complex operator)");
            name_ = "sparselu";
            return;
        }
        ldlt_.compute(sys_.A);
        ldlt_ok_ = (ldlt_.info() == Eigen::Success);
        name_ = ldlt_ok_ ? "ldlt" : "sparselu";
        if (!ldlt_ok_) prepare_lu();
    }

    /// Solve with columns rhs, enforcing the relative residual gate.
    MatXc solve(const MatXc& rhs) {
        const double rnorm = rhs.norm();
        if (rnorm == 0.0) return MatXc::Zero(rhs.rows(), rhs.cols());
        MatXc x;
        if (sys_.complex_coeff) {
            x = luc_.solve(rhs);
            residual_ = check(sys_.Ac * x - rhs, rnorm, x);
            return x;
        }
        MatX packed(rhs.rows(), rhs.cols() * 2);
        packed << rhs.real(), rhs.imag();
        MatX xr = solve_real(packed);
        x = rhs; // shape
        x.real() = xr.leftCols(rhs.cols());
        x.imag() = xr.rightCols(rhs.cols());
        residual_ = check(sys_.A * xr - packed, rnorm, xr);
        return x;
    }

    MatX solve_real(const MatX& rhs) {
        if (ldlt_ok_) {
            MatX x = ldlt_.solve(rhs);
            const double rnorm = rhs.norm();
            if (rnorm == 0.0 || (x.allFinite() && (sys_.A * x - rhs).norm() <= kResidualTol * rnorm))
                return x;
            ldlt_ok_ = false; // indefinite or ill-conditioned; retry exactly
            prepare_lu();
            name_ = "sparselu";
        }
        return lu_.solve(rhs);
    }

    const std::string& name() const { return name_; }
    double residual() const { return residual_; }

private:
    void prepare_lu() {
        if (lu_ready_) return;
        lu_.compute(sys_.A);
        if (lu_.info() != Eigen::Success)
            throw Error(errc::solver, "factorization failed");
        lu_ready_ = true;
    }

    template <class M, class X>
    double check(const M& resid, double rnorm, const X& x) {
        const double r = resid.norm() / rnorm;
        if (!x.allFinite() || !(r <= kResidualTol))
            throw Error(errc::solver,
                        "interior solve rejected: relative residual " +
                            std::to_string(r) +
                            " (operator outside the solvable class)");
        return r;
    }

    const System& sys_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    Eigen::SparseLU<SpMat> lu_;
    Eigen::SparseLU<SpMatC> luc_;
    bool ldlt_ok_ = false;
    bool lu_ready_ = false;
    std::string name_ = "?";
    double residual_ = 0.0;
};

ScalarField dirichlet_solve(const System& sys, GridPtr grid,
                            const BoundaryField& phi, SolveReport* report) {
    Factor fac(sys);
    const VecXc rhs = sys.B * phi.values;
    const VecXc x = fac.solve(rhs);
    ScalarField v(grid);
    for (size_t r = 0; r < sys.idx.nodes.size(); ++r)
        v.values[sys.idx.nodes[r]] = x[static_cast<Eigen::Index>(r)];
    for (int b = 0; b < grid->n_boundary(); ++b)
        v.values[grid->boundary[b].flat] = phi.values[b];
    if (report) {
        report->n_interior = static_cast<int>(sys.idx.nodes.size());
        report->residual = fac.residual();
        report->solver = fac.name();
    }
    return v;
}

/// Normal-trace rows for every boundary indicator, reusing one factorization.
DnMap assemble_dn(const System& sys, GridPtr grid, const char* kind,
                  const ScalarField& coefficient, bool flux_weight) {
    const Grid& g = *grid;
    const int n_b = g.n_boundary();
    Factor fac(sys);

    const bool complex_map = sys.complex_coeff;
    DnMap dn;
    dn.grid = grid;
    dn.kind = kind;
    dn.coefficient_hash = field_hash(coefficient);
    if (complex_map)
        dn.mat = MatXc(n_b, n_b);
    else
        dn.mat = MatX(n_b, n_b);

    ScalarField col(grid); // scratch full field for trace evaluation
    for (int j0 = 0; j0 < n_b; j0 += kRhsBlock) {
        const int w = std::min(kRhsBlock, n_b - j0);
        MatXc x;
        if (complex_map) {
            const MatXc rhs = MatXc(sys.B.middleCols(j0, w));
            x = fac.solve(rhs);
        } else {
            const MatX rhs = MatX(sys.B.middleCols(j0, w));
            MatX xr = fac.solve_real(rhs);
            const double rnorm = rhs.norm();
            const double res = (sys.A * xr - rhs).norm() / rnorm;
            if (!xr.allFinite() || !(res <= kResidualTol))
                throw Error(errc::solver,
                            "interior solve rejected during map assembly "
                            "(relative residual " + std::to_string(res) + ")");
            x = xr.cast<cplx>();
        }
        for (int c = 0; c < w; ++c) {
            const int j = j0 + c;
            for (size_t r = 0; r < sys.idx.nodes.size(); ++r)
                col.values[sys.idx.nodes[r]] = x(static_cast<Eigen::Index>(r), c);
            for (int b = 0; b < n_b; ++b)
                col.values[g.boundary[b].flat] = (b == j) ? 1.0 : 0.0;
            for (int b = 0; b < n_b; ++b) {
                cplx t = fd::normal_derivative(col, g.boundary[b]);
                if (flux_weight) t *= coefficient.values[g.boundary[b].flat];
                if (complex_map)
                    std::get<MatXc>(dn.mat)(b, j) = t;
                else
                    std::get<MatX>(dn.mat)(b, j) = t.real();
            }
        }
    }
    return dn;
}

} // namespace

ScalarField solve_schrodinger(const ScalarField& q, const BoundaryField& phi,
                              SolveReport* report) {
    require_same_grid(*q.grid, *phi.grid, "solve_schrodinger");
    return dirichlet_solve(assemble_schrodinger(*q.grid, q), q.grid, phi, report);
}

ScalarField solve_schrodinger_source(const ScalarField& q, const ScalarField& f,
                                     SolveReport* report) {
    require_same_grid(*q.grid, *f.grid, "solve_schrodinger_source");
    const Grid& g = *q.grid;
    System sys = assemble_schrodinger(g, q);
    Factor fac(sys);
    VecXc rhs(sys.idx.nodes.size());
    for (size_t r = 0; r < sys.idx.nodes.size(); ++r)
        rhs[static_cast<Eigen::Index>(r)] = f.values[sys.idx.nodes[r]];
    const VecXc x = fac.solve(rhs);
    ScalarField v(q.grid);
    for (size_t r = 0; r < sys.idx.nodes.size(); ++r)
        v.values[sys.idx.nodes[r]] = x[static_cast<Eigen::Index>(r)];
    if (report) {
        report->n_interior = static_cast<int>(sys.idx.nodes.size());
        report->residual = fac.residual();
        report->solver = fac.name();
    }
    return v;
}

ScalarField solve_conductivity(const ScalarField& a, const BoundaryField& phi,
                               SolveReport* report, FaceAverage avg) {
    require_same_grid(*a.grid, *phi.grid, "solve_conductivity");
    return dirichlet_solve(assemble_conductivity(*a.grid, a, avg), a.grid, phi,
                           report);
}

BoundaryField neumann_trace(const ScalarField& v) {
    BoundaryField out(v.grid);
    for (int b = 0; b < v.grid->n_boundary(); ++b)
        out.values[b] = fd::normal_derivative(v, v.grid->boundary[b]);
    return out;
}

DnMap dn_map_schrodinger(const ScalarField& q) {
    return assemble_dn(assemble_schrodinger(*q.grid, q), q.grid, "schrodinger", q,
                       false);
}

DnMap dn_map_conductivity(const ScalarField& a, FaceAverage avg) {
    return assemble_dn(assemble_conductivity(*a.grid, a, avg), a.grid,
                       "conductivity", a, true);
}

} // namespace calkit
