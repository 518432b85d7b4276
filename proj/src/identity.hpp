#pragma once

#include <array>
#include <vector>

#include "cgo.hpp"
#include "fields.hpp"
#include "forward.hpp"
#include "geometry.hpp"

namespace calkit {

// The integral identity connecting interior potentials to boundary data:
// whenever (-Lap + qA) v1 = 0 and (-Lap + qB) v2 = 0 on the cube,
//
//   int (qA - qB) v1 v2 dx  =  <(Lambda_A - Lambda_B) f1, f2>
//
// with f1, f2 the Dirichlet traces of v1, v2 and the pairing taken against
// the surface quadrature weights, bilinear in both slots (no conjugation;
// the sign convention follows from Green's second identity together with
// the symmetry of the maps).  Feeding the two CGO families with opposite
// exponential growth makes the product v1 v2 = e^{-i xi . x}(1 + ...), so
// the left side becomes a Fourier sample of qA - qB polluted only by the
// remainder terms, which shrink like 1/rho.  Everything in this module is
// a corollary of that one formula.

/// <(Lambda_A - Lambda_B) f1, f2> with trapezoid surface weights.
/// All four arguments must share one grid.
cplx alessandrini_pair(const DnMap& lamA, const DnMap& lamB,
                       const BoundaryField& f1, const BoundaryField& f2);

/// How the probe traces are produced.  cgo runs the spectral fixed point
/// for the full remainder; born drops the remainder and uses the bare
/// exponentials (exact when the potentials vanish, first-order otherwise).
enum class ProbeMode { cgo, born };

/// One Fourier sample of qA - qB through the boundary data: probes at
/// frequency xi with modulus rho are built for each potential (growing
/// family against qA, decaying against qB) and their traces are paired.
/// With exact data this tends to the value of int (qA-qB) e^{-i xi.x} dx
/// as rho grows.  The frame is make_frame(xi, rho); the box resolution is
/// taken from the grid.  Throws what build_cgo throws.
cplx fourier_sample(const DnMap& lamA, const DnMap& lamB,
                    const ScalarField& qA, const ScalarField& qB,
                    const Vec3& xi, double rho,
                    ProbeMode mode = ProbeMode::cgo);

/// Trapezoid quadrature of int f(x) e^{-i xi . x} dx over the cube, the
/// exact-data counterpart of fourier_sample.
cplx fourier_quadrature(const ScalarField& f, const Vec3& xi);

struct ReconstructionReport {
    int xi_max = 0;
    double rho = 0.0;
    ProbeMode mode = ProbeMode::cgo;
    /// Relative trapezoid L2 error of q_rec against qA - qB; NaN when the
    /// reference vanishes.
    double rel_error = 0.0;
    /// Error of the same truncated series built from exact quadrature
    /// samples of qA - qB.  No boundary data involved: this is the floor
    /// set by cutting the lattice at xi_max, and q_rec cannot beat it.
    double truncation_error = 0.0;
    /// Lattice points whose sampling failed (their coefficient is zeroed).
    std::vector<std::array<int, 3>> failed;
};

struct Reconstruction {
    ScalarField q_rec;  // real part of the truncated series, on the cube grid
    VecXc samples;      // raw samples, k1 slowest, k in [-xi_max, xi_max]^3
    VecXc exact;        // quadrature samples of qA - qB, same ordering
    ReconstructionReport report;
};

/// Sample the boundary data on the frequency lattice xi_k = (pi/L) k,
/// |k|_inf <= xi_max, symmetrize hermitianly (the difference is real, so
/// coefficients at k and -k are averaged as conjugates) and sum the series
///   q_rec(x) = (2L)^{-3} sum_k qhat_k e^{i xi_k . x}.
/// A sample that throws is recorded in the report and replaced by zero.
Reconstruction reconstruct_potential(const DnMap& lamA, const DnMap& lamB,
                                     const ScalarField& qA, const ScalarField& qB,
                                     int xi_max, double rho,
                                     ProbeMode mode = ProbeMode::cgo);

// Partial-data bookkeeping.  With y2 the decaying probe against q2 and v1
// the growing one against q1, the function v solving
//   (-Lap + q2) v = (q1 - q2) v1,   v = 0 on the boundary,
// carries the mismatch of the two potentials, and the quantity of interest
// is the flux pairing int_U dnu(v) y2 dsigma over the illuminated part
// U = { nu . eta >= 2 eps } of the surface.  Its complement piece is what a
// partial-data measurement cannot see; the weighted flux on the slightly
// larger set U1 = { nu . eta1 >= eps } is the ingredient a Carleman
// estimate controls, and bound packages it the way the estimate is used.

struct ShadowReport {
    cplx value_U;       // flux pairing over U
    cplx value_V;       // same integrand over the complement
    cplx value_full;    // whole boundary; equals value_U + value_V exactly
    double u1_weighted; // int_{U1} e^{-2 rho eta1.x} |dnu v|^2 dsigma
    double w2_trace_l2; // surface L2 of the decaying probe's remainder
    double bound;       // sqrt(u1_weighted) * (1 + w2_trace_l2)
};

/// Requires |frame.eta1 - eta| < eps (the frame must actually illuminate
/// the face family that eta selects) and q1, q2 on one grid.
ShadowReport shadow_term(const ScalarField& q1, const ScalarField& q2,
                         const Frame& frame, const Vec3& eta, double eps);

} // namespace calkit
