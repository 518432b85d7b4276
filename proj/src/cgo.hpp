#pragma once

#include <vector>

#include "fields.hpp"
#include "geometry.hpp"

namespace calkit {

// Complex geometric optics solutions of (-lap + q) v = 0 on the cube, built
// from a spectral solver for the conjugated drift equation
//
//     -lap z - 2 rho eta1.grad z - rho^2 z = F
//
// on the periodicity box.  The solver expands F in the shifted basis
// phi_alpha(y) = (2R)^{-3/2} e^{i pi y1 / 2R} e^{i pi alpha.y / R}, written in
// coordinates y = Sx rotated so that eta1 becomes the first axis.  Each mode
// divides by the symbol
//
//     d_alpha = (pi^2/R^2) [(a1 + 1/2)^2 + a2^2 + a3^2]
//               - rho^2 - (2 i pi rho / R) (a1 + 1/2),
//
// whose imaginary part alone gives |d_alpha| >= pi rho / R: the half-integer
// shift keeps the symbol away from zero on the whole lattice, which is the
// point of the basis.

/// The retained mode set and its denominators for one (grid, rho, direction)
/// combination.  Modes run over integer triples with |alpha|_inf <= M/2 - 1;
/// bins touching the Nyquist index M/2 carry no usable frequency sign and are
/// dropped from the lattice.
struct FourierLattice {
    GridPtr grid;
    double rho = 0.0;
    Mat3 S;                       // rotation with S*eta1 = e1
    int alpha_max = 0;            // M/2 - 1
    VecXc denominators;           // per FFT bin, flat (i*M + j)*M + k; 0 where dropped
    std::vector<unsigned char> retained; // 1 where the bin belongs to the lattice
    double min_abs_d = 0.0;       // over retained bins

    double floor_bound() const;   // pi rho / R
};

/// Assemble the lattice, checking |d_alpha| >= pi rho / R on every retained
/// bin (throws Error(errc::internal) if the bound ever fails, which would
/// mean the symbol is wrong).  Requires rho > 0 and |eta1| = 1.
FourierLattice make_lattice(GridPtr grid, double rho, const Vec3& eta1);

/// Solve the drift equation on the periodicity box.  F holds samples taken in
/// the rotated coordinates y = Sx on the M^3 box grid; the returned field is
/// sampled the same way.  eta1 fixes the drift direction of the equation the
/// samples represent; after rotation the symbol depends only on rho and R, so
/// the vector is validated but does not enter the arithmetic.
/// Throws Error(errc::bad_argument) for rho <= 0, a non-unit eta1, or
/// non-finite samples.
QField periodic_solve(const QField& F, double rho, const Vec3& eta1);

/// Relative spectral residual of a candidate solution: compares
/// d_alpha * z_hat against F_hat over the retained lattice, in the l2 sense.
double spectral_residual(const QField& F, const QField& z, double rho, const Vec3& eta1);

enum class CgoKind {
    type1, // v = e^{ rho eta1.x} (e^{ i rho eta2.x} e^{-i xi.x} + w)
    type2, // v = e^{-rho eta1.x} (e^{-i rho eta2.x} + w)
};

struct CgoSolution {
    CgoKind kind = CgoKind::type1;
    Frame frame;
    ScalarField v;          // assembled solution on the cube grid
    ScalarField w;          // remainder factor on the cube grid
    double w_l2 = 0.0;      // trapezoid L2 of w; <= 1 once rho clears the
                            // contraction threshold of the frame
    double residual = 0.0;  // FD residual of (-lap_h + q) v on interior nodes,
                            // relative to rho^2 ||v||
    int iterations = 0;     // fixed-point sweeps performed
    std::vector<double> step_norms; // ||w_{k+1} - w_k||_{L2} per sweep
};

/// Build a CGO solution by the fixed point w <- K_rho[F_rho - q w], starting
/// from w = 0, where K_rho resamples onto the rotated box grid (zero outside
/// the cube), applies periodic_solve, and interpolates back.  Stops when the
/// successive difference drops to tol.  Throws Error(errc::contraction) after
/// three consecutive expanding sweeps or if the remainder leaves the unit
/// ball, Error(errc::max_iterations) when tol is not reached in max_iter
/// sweeps, and Error(errc::bad_argument) for an invalid frame or a rotated
/// cube that does not fit the periodicity box.
CgoSolution build_cgo(const ScalarField& q, const Frame& frame, CgoKind kind,
                      double tol = 1e-10, int max_iter = 25);

/// Discrete H2 stand-in: the trapezoid L2 norm of the field values together
/// with the Frobenius norm of the full FD Hessian (axis second differences on
/// the diagonal, nested first differences off it).
double h2_surrogate_norm(const ScalarField& f);

struct DecayRow {
    double rho = 0.0;
    double w_l2 = 0.0;
    double w_h2 = 0.0;  // h2_surrogate_norm of the remainder
    int iterations = 0; // fixed-point sweeps the build needed
};

struct DecayStudy {
    std::vector<DecayRow> rows;
    double slope_l2 = 0.0; // least-squares slope of log ||w|| vs log rho
    double slope_h2 = 0.0;
    bool exact_zero = false; // every remainder vanished; slopes meaningless
};

/// Remainder decay across rho: builds a type1 CGO per entry of rho_list and
/// fits log-log slopes.  rho_list must be strictly increasing with at least
/// three entries.
DecayStudy decay_study(const ScalarField& q, const Vec3& xi,
                       const std::vector<double>& rho_list);

struct CgoTraces {
    BoundaryField dirichlet; // v at the boundary nodes
    BoundaryField factor;    // the parenthesized factor: oscillation + w
};

/// Boundary traces of a CGO solution.  The exponential factors are evaluated
/// exactly at the boundary nodes; the remainder contributes the value it
/// carries there, which the final fixed-point sweep interpolated from the box
/// grid.
CgoTraces cgo_traces(const CgoSolution& sol);

/// Boundary trace of the bare exponential probe (the remainder set to zero),
/// evaluated analytically at the boundary nodes.  This is the Born-level
/// stand-in for a CGO trace: exact for q = 0 and the cheap option when no
/// fixed point is wanted.
BoundaryField analytic_cgo_trace(const GridPtr& grid, const Frame& frame, CgoKind kind);

/// Default box resolution for a target rho: the smallest even M with
/// M >= max(32, ceil(8 R rho / pi)), so the lattice reaches past the
/// near-characteristic shell |alpha| ~ 2 R rho / pi where the symbol is
/// smallest.  Callers may override; the studies at fixed M do.
int suggested_fourier_nodes(double R, double rho);

} // namespace calkit
