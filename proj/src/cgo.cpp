#include "cgo.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "discrete.hpp"
#include "errors.hpp"
#include "fft.hpp"

namespace calkit {

namespace {

// Signed frequency of an FFT bin; the caller has already dropped Nyquist.
inline int bin_freq(int t, int M) { return (t <= M / 2 - 1) ? t : t - M; }

// exp(sign * i pi y1 / 2R) sampled along the first box axis.  Multiplying by
// the sign -1 table turns the shifted series into a plain one (strip); the
// +1 table puts the half mode back (restore).
std::vector<cplx> half_mode_phase(const Grid& g, double sign) {
    std::vector<cplx> table(g.M);
    for (int i = 0; i < g.M; ++i) {
        const double y = -g.R + (2.0 * g.R / g.M) * i;
        table[i] = std::polar(1.0, sign * M_PI * y / (2.0 * g.R));
    }
    return table;
}

// Spectrum of the phase-stripped samples, unnormalized, left in ws.data().
void stripped_spectrum(const QField& F, Fourier3& ws) {
    const Grid& g = *F.grid;
    const std::vector<cplx> strip = half_mode_phase(g, -1.0);
    cplx* buf = ws.data();
    long t = 0;
    for (int i = 0; i < g.M; ++i) {
        const cplx s = strip[i];
        for (int jk = 0; jk < g.M * g.M; ++jk, ++t) buf[t] = s * F.values[t];
    }
    ws.forward();
}

// Periodic part p = e^{-i pi y1/2R} z of the solution: divide the stripped
// spectrum by the symbol, zero the dropped bins, transform back.  Returning
// the periodic part rather than z itself lets callers interpolate p with
// wraparound (exact for a periodic function) and restore the half mode
// analytically wherever they need the value.
QField periodic_part(const QField& F, const FourierLattice& lat, Fourier3& ws) {
    stripped_spectrum(F, ws);
    cplx* buf = ws.data();
    const long n = ws.size();
    for (long b = 0; b < n; ++b)
        buf[b] = lat.retained[b] ? buf[b] / lat.denominators[b] : cplx(0.0);
    ws.inverse();
    QField p(F.grid);
    const double scale = 1.0 / static_cast<double>(n);
    for (long b = 0; b < n; ++b) p.values[b] = scale * buf[b];
    return p;
}

double growth_at(const Frame& fr, CgoKind kind, const Vec3& x) {
    const double s = (kind == CgoKind::type1) ? 1.0 : -1.0;
    return std::exp(s * fr.rho * fr.eta1.dot(x));
}

cplx oscillation_at(const Frame& fr, CgoKind kind, const Vec3& x) {
    if (kind == CgoKind::type1)
        return std::polar(1.0, (fr.rho * fr.eta2 - fr.xi).dot(x));
    return std::polar(1.0, -fr.rho * fr.eta2.dot(x));
}

// Restriction to the cube of the periodic solve: zero-extend from the cube,
// resample onto the rotated box grid, solve, interpolate back.  Owns the DFT
// workspace so a fixed-point iteration plans once.
class KrhoWorkspace {
public:
    KrhoWorkspace(GridPtr grid, double rho, const Vec3& direction)
        : grid_(std::move(grid)),
          lat_(make_lattice(grid_, rho, direction)),
          fft_(grid_->M) {
        // Every corner of the rotated cube must stay inside the box;
        // otherwise the zero-extension wraps the domain onto itself and the
        // restriction is no longer the paper operator.
        const Grid& g = *grid_;
        for (int s = 0; s < 8; ++s) {
            const Vec3 corner(g.L * ((s & 1) ? 1.0 : -1.0),
                              g.L * ((s & 2) ? 1.0 : -1.0),
                              g.L * ((s & 4) ? 1.0 : -1.0));
            if ((lat_.S * corner).cwiseAbs().maxCoeff() > g.R + 1e-12)
                throw Error(errc::bad_argument,
                            "rotated cube does not fit the periodicity box; increase R");
        }
    }

    ScalarField apply(const ScalarField& G) {
        const Grid& g = *grid_;
        const int M = g.M;
        const Mat3 St = lat_.S.transpose();
        QField Gq(grid_);
        long t = 0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < M; ++k, ++t) {
                    const Vec3 y(Gq.coord(i), Gq.coord(j), Gq.coord(k));
                    Gq.values[t] = interp_cube(G, St * y);
                }
        const QField p = periodic_part(Gq, lat_, fft_);
        ScalarField out(grid_);
        for (int i = 0; i < g.m; ++i)
            for (int j = 0; j < g.m; ++j)
                for (int k = 0; k < g.m; ++k) {
                    const Vec3 y = lat_.S * g.node(i, j, k);
                    out.at(i, j, k) = interp_box(p, y) *
                                      std::polar(1.0, M_PI * y[0] / (2.0 * g.R));
                }
        return out;
    }

private:
    GridPtr grid_;
    FourierLattice lat_;
    Fourier3 fft_;
};

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    return sxy / sxx;
}

} // namespace

double FourierLattice::floor_bound() const { return M_PI * rho / grid->R; }

FourierLattice make_lattice(GridPtr grid, double rho, const Vec3& eta1) {
    if (!grid) throw Error(errc::bad_argument, "make_lattice: null grid");
    if (!(rho > 0.0)) throw Error(errc::bad_argument, "make_lattice: rho must be positive");
    if (std::abs(eta1.norm() - 1.0) > 1e-9)
        throw Error(errc::bad_argument, "make_lattice: eta1 must be a unit vector");

    FourierLattice lat;
    lat.grid = std::move(grid);
    lat.rho = rho;
    lat.S = rotation_to_e1(eta1);
    const Grid& g = *lat.grid;
    const int M = g.M;
    lat.alpha_max = M / 2 - 1;
    const long n = static_cast<long>(M) * M * M;
    lat.denominators = VecXc::Zero(n);
    lat.retained.assign(n, 0);

    const double R = g.R;
    const double bound = lat.floor_bound();
    const double k2 = M_PI * M_PI / (R * R);
    double min_ad = std::numeric_limits<double>::infinity();
    long t = 0;
    for (int ti = 0; ti < M; ++ti)
        for (int tj = 0; tj < M; ++tj)
            for (int tk = 0; tk < M; ++tk, ++t) {
                if (ti == M / 2 || tj == M / 2 || tk == M / 2) continue;
                const double a1h = bin_freq(ti, M) + 0.5;
                const double a2 = bin_freq(tj, M);
                const double a3 = bin_freq(tk, M);
                const cplx d(k2 * (a1h * a1h + a2 * a2 + a3 * a3) - rho * rho,
                             -2.0 * M_PI * rho / R * a1h);
                const double ad = std::abs(d);
                if (ad < bound * (1.0 - 1e-12))
                    throw Error(errc::internal,
                                "make_lattice: symbol below the pi rho / R floor");
                lat.denominators[t] = d;
                lat.retained[t] = 1;
                min_ad = std::min(min_ad, ad);
            }
    lat.min_abs_d = min_ad;
    return lat;
}

QField periodic_solve(const QField& F, double rho, const Vec3& eta1) {
    if (!F.grid) throw Error(errc::bad_argument, "periodic_solve: field has no grid");
    if (!F.values.allFinite())
        throw Error(errc::bad_argument, "periodic_solve: non-finite right-hand side");
    const FourierLattice lat = make_lattice(F.grid, rho, eta1);
    Fourier3 ws(F.grid->M);
    QField z = periodic_part(F, lat, ws);
    const std::vector<cplx> restore = half_mode_phase(*F.grid, +1.0);
    const int M = F.grid->M;
    long t = 0;
    for (int i = 0; i < M; ++i) {
        const cplx s = restore[i];
        for (int jk = 0; jk < M * M; ++jk, ++t) z.values[t] *= s;
    }
    return z;
}

double spectral_residual(const QField& F, const QField& z, double rho, const Vec3& eta1) {
    require_same_grid(*F.grid, *z.grid, "spectral_residual");
    const FourierLattice lat = make_lattice(F.grid, rho, eta1);
    Fourier3 ws(F.grid->M);

    stripped_spectrum(F, ws);
    VecXc Fhat = Eigen::Map<const VecXc>(ws.data(), ws.size());
    stripped_spectrum(z, ws);

    double num = 0.0, den = 0.0;
    const cplx* zhat = ws.data();
    for (long b = 0; b < ws.size(); ++b) {
        if (!lat.retained[b]) continue;
        num += std::norm(lat.denominators[b] * zhat[b] - Fhat[b]);
        den += std::norm(Fhat[b]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

CgoSolution build_cgo(const ScalarField& q, const Frame& frame, CgoKind kind,
                      double tol, int max_iter) {
    if (!q.grid) throw Error(errc::bad_argument, "build_cgo: potential has no grid");
    if (!q.values.allFinite())
        throw Error(errc::bad_argument, "build_cgo: non-finite potential");
    if (!(tol > 0.0)) throw Error(errc::bad_argument, "build_cgo: tol must be positive");
    if (max_iter < 1) throw Error(errc::bad_argument, "build_cgo: max_iter must be at least 1");
    validate_frame(frame);

    const GridPtr grid = q.grid;
    const Grid& g = *grid;
    const double sgn = (kind == CgoKind::type1) ? 1.0 : -1.0;
    KrhoWorkspace ws(grid, frame.rho, sgn * frame.eta1);

    // Driving term at the cube nodes.  Plugging the oscillatory factor into
    // the conjugated equation leaves -(|xi|^2 + q) times it for type1; type2
    // has no xi oscillation, so only -q times its phase survives.
    ScalarField F(grid);
    const double xi2 = frame.xi.squaredNorm();
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const Vec3 x = g.node(i, j, k);
                const cplx osc = oscillation_at(frame, kind, x);
                const cplx load = (kind == CgoKind::type1)
                                      ? (xi2 + q.at(i, j, k))
                                      : q.at(i, j, k);
                F.at(i, j, k) = -load * osc;
            }

    CgoSolution sol;
    sol.kind = kind;
    sol.frame = frame;

    ScalarField w(grid);
    bool converged = false;
    double prev = 0.0;
    int expanding = 0;
    for (int it = 1; it <= max_iter; ++it) {
        ScalarField G(grid);
        G.values = F.values - q.values.cwiseProduct(w.values);
        ScalarField next = ws.apply(G);
        ScalarField diff(grid);
        diff.values = next.values - w.values;
        const double delta = diff.norm_l2();
        sol.step_norms.push_back(delta);
        w = std::move(next);
        sol.iterations = it;
        if (delta <= tol) {
            converged = true;
            break;
        }
        if (it > 1 && delta >= prev) {
            if (++expanding == 3)
                throw Error(errc::contraction, "build_cgo: no contraction at this rho");
        } else {
            expanding = 0;
        }
        prev = delta;
    }
    if (!converged)
        throw Error(errc::max_iterations,
                    "build_cgo: successive differences above tol after max_iter sweeps");

    // The remainder's norm is recorded, not policed: inside the large-rho
    // regime it sits in the unit ball, while below that threshold (small rho
    // against |xi|^2 and the potential) the fixed point still converges to
    // the unique solution, just with a bigger remainder.
    sol.w_l2 = w.norm_l2();

    sol.v = ScalarField(grid);
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const Vec3 x = g.node(i, j, k);
                sol.v.at(i, j, k) = growth_at(frame, kind, x) *
                                    (oscillation_at(frame, kind, x) + w.at(i, j, k));
            }
    sol.w = std::move(w);

    // FD defect of the assembled solution, scaled against rho^2 v, the size
    // of the leading operator terms; shrinks ~h^2 at fixed rho.
    double num = 0.0, den = 0.0;
    const double rho2 = frame.rho * frame.rho;
    for (int i = 1; i < g.m - 1; ++i)
        for (int j = 1; j < g.m - 1; ++j)
            for (int k = 1; k < g.m - 1; ++k) {
                const cplx v = sol.v.at(i, j, k);
                num += std::norm(-fd::laplacian(sol.v, i, j, k) + q.at(i, j, k) * v);
                den += std::norm(rho2 * v);
            }
    sol.residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
    return sol;
}

double h2_surrogate_norm(const ScalarField& f) {
    if (!f.grid) throw Error(errc::bad_argument, "h2_surrogate_norm: field has no grid");
    const Grid& g = *f.grid;
    ScalarField d1[3] = {ScalarField(f.grid), ScalarField(f.grid), ScalarField(f.grid)};
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < g.m; ++i)
            for (int j = 0; j < g.m; ++j)
                for (int k = 0; k < g.m; ++k)
                    d1[a].at(i, j, k) = fd::d1_axis(f, i, j, k, a);

    double sum = 0.0;
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                double acc = std::norm(f.at(i, j, k));
                for (int a = 0; a < 3; ++a) {
                    acc += std::norm(fd::d2_axis(f, i, j, k, a));
                    for (int b = 0; b < 3; ++b)
                        if (b != a) acc += std::norm(fd::d1_axis(d1[a], i, j, k, b));
                }
                sum += g.volume_weight[g.flat(i, j, k)] * acc;
            }
    return std::sqrt(sum);
}

DecayStudy decay_study(const ScalarField& q, const Vec3& xi,
                       const std::vector<double>& rho_list) {
    if (rho_list.size() < 3)
        throw Error(errc::bad_argument, "decay_study: need at least three rho values");
    for (size_t i = 1; i < rho_list.size(); ++i)
        if (!(rho_list[i] > rho_list[i - 1]))
            throw Error(errc::bad_argument, "decay_study: rho values must increase");

    DecayStudy out;
    for (const double rho : rho_list) {
        const Frame fr = make_frame(xi, rho);
        const CgoSolution sol = build_cgo(q, fr, CgoKind::type1);
        out.rows.push_back({rho, sol.w_l2, h2_surrogate_norm(sol.w), sol.iterations});
    }
    out.exact_zero = true;
    for (const DecayRow& r : out.rows)
        if (r.w_l2 > 1e-14) out.exact_zero = false;
    if (!out.exact_zero) {
        std::vector<std::pair<double, double>> l2, h2;
        for (const DecayRow& r : out.rows) {
            l2.emplace_back(r.rho, r.w_l2);
            h2.emplace_back(r.rho, r.w_h2);
        }
        out.slope_l2 = loglog_slope(l2);
        out.slope_h2 = loglog_slope(h2);
    }
    return out;
}

CgoTraces cgo_traces(const CgoSolution& sol) {
    if (!sol.v.grid) throw Error(errc::bad_argument, "cgo_traces: solution has no grid");
    const Grid& g = *sol.v.grid;
    CgoTraces tr{BoundaryField(sol.v.grid), BoundaryField(sol.v.grid)};
    for (int b = 0; b < g.n_boundary(); ++b) {
        const BoundaryNode& node = g.boundary[b];
        const Vec3 x = g.node(node.ijk[0], node.ijk[1], node.ijk[2]);
        const cplx fac = oscillation_at(sol.frame, sol.kind, x) + sol.w.values[node.flat];
        tr.factor.values[b] = fac;
        tr.dirichlet.values[b] = growth_at(sol.frame, sol.kind, x) * fac;
    }
    return tr;
}

BoundaryField analytic_cgo_trace(const GridPtr& grid, const Frame& frame, CgoKind kind) {
    if (!grid) throw Error(errc::bad_argument, "analytic_cgo_trace: null grid");
    validate_frame(frame);
    BoundaryField tr(grid);
    for (int b = 0; b < grid->n_boundary(); ++b) {
        const BoundaryNode& node = grid->boundary[b];
        const Vec3 x = grid->node(node.ijk[0], node.ijk[1], node.ijk[2]);
        tr.values[b] = growth_at(frame, kind, x) * oscillation_at(frame, kind, x);
    }
    return tr;
}

int suggested_fourier_nodes(double R, double rho) {
    if (!(R > 0.0) || !(rho > 0.0))
        throw Error(errc::bad_argument, "suggested_fourier_nodes: R and rho must be positive");
    int M = std::max(32, static_cast<int>(std::ceil(8.0 * R * rho / M_PI)));
    if (M % 2 != 0) ++M;
    return M;
}

} // namespace calkit
