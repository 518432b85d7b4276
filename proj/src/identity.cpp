#include "identity.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "errors.hpp"

namespace calkit {

namespace {

void require_dn_grid(const DnMap& lam, const Grid& g, const char* where) {
    if (!lam.grid)
        throw Error(errc::bad_argument, std::string(where) + ": map has no grid");
    require_same_grid(*lam.grid, g, where);
}

// Truncated series sum: (2L)^{-3} sum_k sym_k e^{i (pi/L) k . x} at the cube
// nodes, coefficients hermitian-averaged first so the sum is real up to
// roundoff (the imaginary part is discarded).  Per-axis phase tables keep
// this at three multiplies per term.
ScalarField invert_lattice(const GridPtr& grid, const VecXc& samples, int xi_max) {
    const Grid& g = *grid;
    const int n = 2 * xi_max + 1;
    const long total = static_cast<long>(n) * n * n;

    auto at = [&](int k1, int k2, int k3) -> cplx {
        return samples[(static_cast<long>(k1 + xi_max) * n + (k2 + xi_max)) * n +
                       (k3 + xi_max)];
    };
    VecXc sym(total);
    {
        long idx = 0;
        for (int k1 = -xi_max; k1 <= xi_max; ++k1)
            for (int k2 = -xi_max; k2 <= xi_max; ++k2)
                for (int k3 = -xi_max; k3 <= xi_max; ++k3, ++idx)
                    sym[idx] = 0.5 * (at(k1, k2, k3) + std::conj(at(-k1, -k2, -k3)));
    }

    std::vector<cplx> phase(static_cast<size_t>(n) * g.m);
    for (int kk = 0; kk < n; ++kk)
        for (int i = 0; i < g.m; ++i)
            phase[static_cast<size_t>(kk) * g.m + i] =
                std::polar(1.0, M_PI / g.L * (kk - xi_max) * g.coord(i));
    auto ph = [&](int kk, int i) { return phase[static_cast<size_t>(kk) * g.m + i]; };

    const double scale = 1.0 / (8.0 * g.L * g.L * g.L);
    ScalarField out(grid);
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                cplx acc = 0.0;
                long idx = 0;
                for (int k1 = 0; k1 < n; ++k1) {
                    const cplx p1 = ph(k1, i);
                    for (int k2 = 0; k2 < n; ++k2) {
                        const cplx p12 = p1 * ph(k2, j);
                        for (int k3 = 0; k3 < n; ++k3, ++idx)
                            acc += sym[idx] * (p12 * ph(k3, k));
                    }
                }
                out.values[g.flat(i, j, k)] = acc.real() * scale;
            }
    return out;
}

} // namespace

cplx alessandrini_pair(const DnMap& lamA, const DnMap& lamB,
                       const BoundaryField& f1, const BoundaryField& f2) {
    if (!f1.grid || !f2.grid)
        throw Error(errc::bad_argument, "alessandrini_pair: trace has no grid");
    const Grid& g = *f1.grid;
    require_same_grid(g, *f2.grid, "alessandrini_pair");
    require_dn_grid(lamA, g, "alessandrini_pair");
    require_dn_grid(lamB, g, "alessandrini_pair");

    const BoundaryField ga = lamA.apply(f1);
    const BoundaryField gb = lamB.apply(f1);
    cplx acc = 0.0;
    for (int b = 0; b < g.n_boundary(); ++b)
        acc += g.boundary[b].weight * (ga.values[b] - gb.values[b]) * f2.values[b];
    return acc;
}

cplx fourier_sample(const DnMap& lamA, const DnMap& lamB,
                    const ScalarField& qA, const ScalarField& qB,
                    const Vec3& xi, double rho, ProbeMode mode) {
    if (!qA.grid || !qB.grid)
        throw Error(errc::bad_argument, "fourier_sample: potential has no grid");
    require_same_grid(*qA.grid, *qB.grid, "fourier_sample");

    const Frame fr = make_frame(xi, rho);
    BoundaryField f1, f2;
    if (mode == ProbeMode::cgo) {
        f1 = cgo_traces(build_cgo(qA, fr, CgoKind::type1)).dirichlet;
        f2 = cgo_traces(build_cgo(qB, fr, CgoKind::type2)).dirichlet;
    } else {
        f1 = analytic_cgo_trace(qA.grid, fr, CgoKind::type1);
        f2 = analytic_cgo_trace(qB.grid, fr, CgoKind::type2);
    }
    return alessandrini_pair(lamA, lamB, f1, f2);
}

cplx fourier_quadrature(const ScalarField& f, const Vec3& xi) {
    if (!f.grid) throw Error(errc::bad_argument, "fourier_quadrature: field has no grid");
    const Grid& g = *f.grid;
    cplx acc = 0.0;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const int t = g.flat(i, j, k);
                acc += g.volume_weight[t] * f.values[t] *
                       std::polar(1.0, -xi.dot(g.node(i, j, k)));
            }
    return acc;
}

Reconstruction reconstruct_potential(const DnMap& lamA, const DnMap& lamB,
                                     const ScalarField& qA, const ScalarField& qB,
                                     int xi_max, double rho, ProbeMode mode) {
    if (!qA.grid || !qB.grid)
        throw Error(errc::bad_argument, "reconstruct_potential: potential has no grid");
    if (xi_max < 0)
        throw Error(errc::bad_argument, "reconstruct_potential: xi_max must be >= 0");
    if (!(rho > 0.0))
        throw Error(errc::bad_argument, "reconstruct_potential: rho must be positive");
    require_same_grid(*qA.grid, *qB.grid, "reconstruct_potential");
    const GridPtr grid = qA.grid;
    const Grid& g = *grid;

    const int n = 2 * xi_max + 1;
    const long total = static_cast<long>(n) * n * n;

    Reconstruction rec;
    rec.report.xi_max = xi_max;
    rec.report.rho = rho;
    rec.report.mode = mode;
    rec.samples = VecXc::Zero(total);

    ScalarField diff(grid);
    diff.values = qA.values - qB.values;
    VecXc exact = VecXc::Zero(total);

    long idx = 0;
    for (int k1 = -xi_max; k1 <= xi_max; ++k1)
        for (int k2 = -xi_max; k2 <= xi_max; ++k2)
            for (int k3 = -xi_max; k3 <= xi_max; ++k3, ++idx) {
                const Vec3 xi = M_PI / g.L * Vec3(k1, k2, k3);
                try {
                    rec.samples[idx] = fourier_sample(lamA, lamB, qA, qB, xi, rho, mode);
                } catch (const Error&) {
                    rec.report.failed.push_back({k1, k2, k3});
                    rec.samples[idx] = 0.0;
                }
                exact[idx] = fourier_quadrature(diff, xi);
            }

    rec.exact = exact;
    rec.q_rec = invert_lattice(grid, rec.samples, xi_max);
    const ScalarField floor_rec = invert_lattice(grid, exact, xi_max);

    const double ref = diff.norm_l2();
    auto rel = [&](const ScalarField& r) {
        if (!(ref > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        ScalarField e(grid);
        e.values = r.values - diff.values;
        return e.norm_l2() / ref;
    };
    rec.report.rel_error = rel(rec.q_rec);
    rec.report.truncation_error = rel(floor_rec);
    return rec;
}

ShadowReport shadow_term(const ScalarField& q1, const ScalarField& q2,
                         const Frame& frame, const Vec3& eta, double eps) {
    if (!q1.grid || !q2.grid)
        throw Error(errc::bad_argument, "shadow_term: potential has no grid");
    require_same_grid(*q1.grid, *q2.grid, "shadow_term");
    validate_frame(frame);
    if (!(eps > 0.0) || !(eps < 0.5))
        throw Error(errc::bad_argument, "shadow_term: eps must lie in (0, 1/2)");
    if ((frame.eta1 - eta).norm() >= eps)
        throw Error(errc::bad_argument,
                    "shadow_term: growth direction strays from eta by eps or more");
    const GridPtr grid = q1.grid;
    const Grid& g = *grid;

    const CgoSolution sol1 = build_cgo(q1, frame, CgoKind::type1);
    const CgoSolution sol2 = build_cgo(q2, frame, CgoKind::type2);

    // v carries the mismatch: (-Lap + q2) v = (q1 - q2) v1 with zero trace,
    // so for equal potentials it vanishes identically and so do all values.
    ScalarField rhs(grid);
    rhs.values = (q1.values - q2.values).cwiseProduct(sol1.v.values);
    const ScalarField v = solve_schrodinger_source(q2, rhs);

    const FaceSplit split = face_split(g, eta, eps);
    std::vector<char> in_u(g.n_boundary(), 0);
    for (int b : split.U) in_u[b] = 1;

    ShadowReport rep{};
    for (int b = 0; b < g.n_boundary(); ++b) {
        const BoundaryNode& node = g.boundary[b];
        const cplx term =
            node.weight * fd::normal_derivative(v, node) * sol2.v.values[node.flat];
        if (in_u[b])
            rep.value_U += term;
        else
            rep.value_V += term;
    }
    rep.value_full = rep.value_U + rep.value_V;

    const FaceSplit split1 = face_split(g, frame.eta1, eps / 2.0);
    for (int b : split1.U) {
        const BoundaryNode& node = g.boundary[b];
        const Vec3 x = g.node(node.ijk[0], node.ijk[1], node.ijk[2]);
        rep.u1_weighted += node.weight *
                           std::exp(-2.0 * frame.rho * frame.eta1.dot(x)) *
                           std::norm(fd::normal_derivative(v, node));
    }

    BoundaryField w2(grid);
    for (int b = 0; b < g.n_boundary(); ++b)
        w2.values[b] = sol2.w.values[g.boundary[b].flat];
    rep.w2_trace_l2 = w2.norm_l2();
    rep.bound = std::sqrt(rep.u1_weighted) * (1.0 + rep.w2_trace_l2);
    return rep;
}

} // namespace calkit
