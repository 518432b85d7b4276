#include "carleman.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "discrete.hpp"
#include "errors.hpp"
#include "presets.hpp"

namespace calkit {

namespace {

constexpr double kRho1 = 1.0;

// Calibrated by calibrate_constant over 100 seeded zero-trace functions at
// m = 25 against the unit bump potential, eta1 = e1, seed 2026; smallest
// power of two certifying every sample at rho = rho2(C) + 1.  The very
// first candidate already passes (worst corpus margin 0.027 at rho = 4),
// so the frozen constant is the floor of the scan.
constexpr double kConstant = 1.0;

void require_unit(const Vec3& eta1, const char* where) {
    if (std::abs(eta1.norm() - 1.0) > 1e-9)
        throw Error(errc::bad_argument, std::string(where) + ": eta1 must be a unit vector");
}

void require_rho(double rho, double L, const char* where) {
    if (!(rho > 0.0))
        throw Error(errc::bad_argument, std::string(where) + ": rho must be positive");
    // e^{2 rho x.eta1} must stay finite; |x.eta1| <= L sqrt(3) on the cube.
    if (2.0 * rho * L * std::sqrt(3.0) > 600.0)
        throw Error(errc::bad_argument,
                    std::string(where) + ": rho exceeds the exponential range budget");
}

void require_zero_trace(const ScalarField& f, const char* where) {
    if (!f.grid)
        throw Error(errc::bad_argument, std::string(where) + ": field has no grid");
    const Grid& g = *f.grid;
    const double scale = f.values.size() > 0 ? f.values.cwiseAbs().maxCoeff() : 0.0;
    double worst = 0.0;
    for (const BoundaryNode& b : g.boundary)
        worst = std::max(worst, std::abs(f.values[b.flat]));
    if (worst > 1e-12 * (1.0 + scale))
        throw Error(errc::bad_argument,
                    std::string(where) + ": nonzero boundary trace (max " +
                        std::to_string(worst) + ")");
}

void require_real(const ScalarField& f, const char* where) {
    const double scale = f.values.size() > 0 ? f.values.cwiseAbs().maxCoeff() : 0.0;
    const double worst = f.values.size() > 0 ? f.values.imag().cwiseAbs().maxCoeff() : 0.0;
    if (worst > 1e-12 * (1.0 + scale))
        throw Error(errc::bad_argument, std::string(where) + ": field must be real valued");
}

bool edge_node(const Grid& g, const BoundaryNode& b) {
    int extremes = 0;
    for (int d = 0; d < 3; ++d)
        extremes += (b.ijk[d] == 0 || b.ijk[d] == g.m - 1) ? 1 : 0;
    return extremes >= 2;
}

// w = e^{-rho x.eta1} v with the weight evaluated exactly at nodes.
ScalarField conjugate_down(const ScalarField& v, double rho, const Vec3& eta1) {
    ScalarField w(v.grid);
    const Grid& g = *v.grid;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const int t = g.flat(i, j, k);
                w.values[t] = std::exp(-rho * g.node(i, j, k).dot(eta1)) * v.values[t];
            }
    return w;
}

double directional_centered(const ScalarField& f, int i, int j, int k, const Vec3& eta1) {
    double acc = 0.0;
    for (int d = 0; d < 3; ++d)
        if (eta1[d] != 0.0) acc += eta1[d] * fd::d1_centered(f, i, j, k, d).real();
    return acc;
}

// Same derivative with the one-sided fallback, usable on every node.
double directional_onesided(const ScalarField& f, int i, int j, int k, const Vec3& eta1) {
    double acc = 0.0;
    for (int d = 0; d < 3; ++d)
        if (eta1[d] != 0.0) acc += eta1[d] * fd::d1_axis(f, i, j, k, d).real();
    return acc;
}

// Both sides of the weighted estimate, without any constant applied.  The
// boundary pieces and their edge-node share come back separately so callers
// can report them.
struct WeightedSides {
    double lhs_volume = 0.0;
    double rhs_volume = 0.0;
    double boundary_plus = 0.0;
    double boundary_minus = 0.0;
    double edge_plus = 0.0;
    double edge_minus = 0.0;
};

WeightedSides weighted_sides(const ScalarField& v, const ScalarField& q, double rho,
                             const Vec3& eta1) {
    const Grid& g = *v.grid;
    const double h3 = g.h * g.h * g.h;
    WeightedSides out;
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const int t = g.flat(i, j, k);
                const double e2 = std::exp(-2.0 * rho * g.node(i, j, k).dot(eta1));
                const cplx resid = -fd::laplacian(v, i, j, k) + q.values[t] * v.values[t];
                out.lhs_volume += rho * rho * e2 * std::norm(v.values[t]) * h3;
                out.rhs_volume += e2 * std::norm(resid) * h3;
            }
    for (const BoundaryNode& b : g.boundary) {
        const double s = b.normal.dot(eta1);
        if (s == 0.0) continue;
        const double dv = fd::normal_derivative(v, b).real();
        const Vec3 x(g.coord(b.ijk[0]), g.coord(b.ijk[1]), g.coord(b.ijk[2]));
        const double e2 = std::exp(-2.0 * rho * x.dot(eta1));
        const double c = rho * e2 * dv * dv * std::abs(s) * b.weight;
        const bool edge = edge_node(g, b);
        if (s > 0.0) {
            out.boundary_plus += c;
            if (edge) out.edge_plus += c;
        } else {
            out.boundary_minus += c;
            if (edge) out.edge_minus += c;
        }
    }
    return out;
}

} // namespace

PoincareSides poincare_ratio(const ScalarField& w, const Vec3& eta1) {
    require_unit(eta1, "poincare_ratio");
    require_zero_trace(w, "poincare_ratio");
    const Grid& g = *w.grid;
    const double h3 = g.h * g.h * g.h;
    const double ball2 = 3.0 * g.L * g.L; // (L sqrt 3)^2
    PoincareSides out;
    double grad = 0.0;
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const int t = g.flat(i, j, k);
                out.lhs += std::norm(w.values[t]) * h3;
                cplx dw = 0.0;
                for (int d = 0; d < 3; ++d)
                    if (eta1[d] != 0.0) dw += eta1[d] * fd::d1_centered(w, i, j, k, d);
                grad += std::norm(dw) * h3;
            }
    out.rhs = 4.0 * ball2 * grad;
    return out;
}

ConjugatedSides conjugated_inequality(const ScalarField& v, double rho, const Vec3& eta1) {
    require_unit(eta1, "conjugated_inequality");
    require_zero_trace(v, "conjugated_inequality");
    require_real(v, "conjugated_inequality");
    require_rho(rho, v.grid->L, "conjugated_inequality");
    const Grid& g = *v.grid;
    const ScalarField w = conjugate_down(v, rho, eta1);
    const double h3 = g.h * g.h * g.h;

    ConjugatedSides out;
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const int t = g.flat(i, j, k);
                const double gd = directional_centered(w, i, j, k, eta1);
                const double pw = fd::laplacian(w, i, j, k).real() + 2.0 * rho * gd +
                                  rho * rho * w.values[t].real();
                out.lhs += rho * rho * gd * gd * h3;
                out.rhs += pw * pw * h3;
            }
    for (const BoundaryNode& b : g.boundary) {
        const double s = b.normal.dot(eta1);
        if (s == 0.0) continue;
        const double dw = fd::normal_derivative(w, b).real();
        const double c = 2.0 * rho * dw * dw * std::abs(s) * b.weight;
        const bool edge = edge_node(g, b);
        if (s > 0.0) {
            out.boundary_plus += c;
            if (edge) out.edge_plus += c;
        } else {
            out.boundary_minus += c;
            if (edge) out.edge_minus += c;
        }
    }
    out.lhs += out.boundary_plus;
    out.rhs += out.boundary_minus;
    return out;
}

ProofIdentities proof_identities(const ScalarField& v, double rho, const Vec3& eta1) {
    require_unit(eta1, "proof_identities");
    require_zero_trace(v, "proof_identities");
    require_real(v, "proof_identities");
    require_rho(rho, v.grid->L, "proof_identities");
    const Grid& g = *v.grid;
    const ScalarField w = conjugate_down(v, rho, eta1);

    // The volume forms need the full trapezoid sum: the integrands carry the
    // e^{2 rho L} scale right at the boundary, so dropping the half-weighted
    // boundary slice would leave an O(h) error with an exponentially large
    // constant.  One-sided stencils serve the boundary nodes.
    ProofIdentities out;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const int t = g.flat(i, j, k);
                const double gd = directional_onesided(w, i, j, k, eta1);
                const double lap = fd::laplacian(w, i, j, k).real();
                const double wr = w.values[t].real();
                out.i1_volume += 2.0 * rho * lap * gd * g.volume_weight[t];
                const double term = 2.0 * rho * rho * rho * wr * gd * g.volume_weight[t];
                out.i2_volume += term;
                out.i2_abs += std::abs(term);
            }
    for (const BoundaryNode& b : g.boundary) {
        const double s = b.normal.dot(eta1);
        if (s == 0.0) continue;
        const double dw = fd::normal_derivative(w, b).real();
        out.i1_boundary += rho * dw * dw * s * b.weight;
        out.i1_boundary_abs += rho * dw * dw * std::abs(s) * b.weight;
    }
    return out;
}

CarlemanSides carleman_estimate(const ScalarField& v, const ScalarField& q, double rho,
                                const Vec3& eta1) {
    require_unit(eta1, "carleman_estimate");
    require_zero_trace(v, "carleman_estimate");
    require_real(v, "carleman_estimate");
    if (!q.grid)
        throw Error(errc::bad_argument, "carleman_estimate: potential has no grid");
    require_same_grid(*v.grid, *q.grid, "carleman_estimate");
    require_rho(rho, v.grid->L, "carleman_estimate");

    const double qinf = q.values.size() > 0 ? q.values.cwiseAbs().maxCoeff() : 0.0;
    const WeightedSides sides = weighted_sides(v, q, rho, eta1);

    CarlemanSides out;
    out.C_used = kConstant;
    out.rho2 = 2.0 * std::sqrt(kConstant) * qinf + kRho1;
    out.rho_low = rho < out.rho2;
    out.boundary_plus = sides.boundary_plus;
    out.boundary_minus = sides.boundary_minus;
    out.edge_plus = sides.edge_plus;
    out.edge_minus = sides.edge_minus;
    out.lhs = sides.lhs_volume + sides.boundary_plus;
    out.rhs = sides.rhs_volume + sides.boundary_minus;
    out.holds = out.lhs <= out.C_used * out.rhs;
    return out;
}

double carleman_rho1() { return kRho1; }
double carleman_constant() { return kConstant; }

CalibrationReport calibrate_constant(const ScalarField& q, const Vec3& eta1, int n_samples,
                                     unsigned long long seed) {
    require_unit(eta1, "calibrate_constant");
    if (!q.grid)
        throw Error(errc::bad_argument, "calibrate_constant: potential has no grid");
    if (n_samples < 1)
        throw Error(errc::bad_argument, "calibrate_constant: need at least one sample");

    const GridPtr grid = q.grid;
    const double qinf = q.values.size() > 0 ? q.values.cwiseAbs().maxCoeff() : 0.0;

    // The corpus is fixed by the seed; only rho moves with the candidate.
    Lcg64 rng(seed);
    std::vector<ScalarField> corpus;
    corpus.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) corpus.push_back(random_zero_trace(grid, rng));

    CalibrationReport rep;
    rep.rho1 = kRho1;
    rep.m = grid->m;
    rep.samples = n_samples;
    rep.seed = seed;

    for (int k = 0; k <= 40; ++k) {
        const double C = std::ldexp(1.0, k);
        const double rho2 = 2.0 * std::sqrt(C) * qinf + kRho1;
        const double rho = rho2 + 1.0;
        require_rho(rho, grid->L, "calibrate_constant");

        rep.table.clear();
        rep.worst_margin = 0.0;
        bool all_pass = true;
        for (int s = 0; s < n_samples; ++s) {
            const WeightedSides sides = weighted_sides(corpus[s], q, rho, eta1);
            CalibrationSample row;
            row.id = s;
            row.lhs = sides.lhs_volume + sides.boundary_plus;
            row.rhs = sides.rhs_volume + sides.boundary_minus;
            row.margin = row.rhs > 0.0 ? row.lhs / row.rhs
                                       : (row.lhs > 0.0 ? std::numeric_limits<double>::infinity()
                                                        : 0.0);
            row.pass = row.lhs <= C * row.rhs;
            rep.worst_margin = std::max(rep.worst_margin, row.margin);
            all_pass = all_pass && row.pass;
            rep.table.push_back(row);
        }
        if (all_pass) {
            rep.C = C;
            rep.rho2 = rho2;
            rep.rho_used = rho;
            return rep;
        }
    }
    throw Error(errc::max_iterations,
                "calibrate_constant: no power of two up to 2^40 certifies the corpus");
}

} // namespace calkit
