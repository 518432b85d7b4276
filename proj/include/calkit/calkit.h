#ifndef CALKIT_H
#define CALKIT_H

/* C interface to the inverse-conductivity laboratory.  All state lives in
 * opaque handles; every fallible call either returns a status code directly
 * or returns NULL and leaves the status behind calkit_last_status().  The
 * matching message is in calkit_last_error().  Both are thread-local.
 *
 * Ownership is strict: whatever a calkit_*_create / _build / _load function
 * returns belongs to the caller and is released with the matching destroy
 * function.  Handles may be used from several threads only for concurrent
 * reads.
 */

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes.  Nonzero values mirror the library's error taxonomy. */
enum {
    CALKIT_OK = 0,
    CALKIT_E_BAD_ARGUMENT = 1,
    CALKIT_E_DIMENSION = 2,
    CALKIT_E_SOLVER = 3,
    CALKIT_E_CONTRACTION = 4,
    CALKIT_E_MAX_ITERATIONS = 5,
    CALKIT_E_IO = 6,
    CALKIT_E_INTERNAL = 7
};

const char* calkit_version(void);

/* Message and status of the most recent failure on this thread; the message
 * is empty and the status CALKIT_OK after any successful call. */
const char* calkit_last_error(void);
int calkit_last_status(void);

typedef struct calkit_grid calkit_grid;
typedef struct calkit_field calkit_field;
typedef struct calkit_bfield calkit_bfield;
typedef struct calkit_dnmap calkit_dnmap;
typedef struct calkit_cgo calkit_cgo;
typedef struct calkit_recon calkit_recon;
typedef struct calkit_calibration calkit_calibration;

/* ---- geometry ------------------------------------------------------- */

/* Cube [-L,L]^3 sampled at m^3 nodes (odd m >= 3) inside a periodicity box
 * [-R,R)^3 with M^3 spectral nodes (even M >= 8, R > L sqrt(3) for the
 * rotated solves). */
calkit_grid* calkit_grid_create(double R, double L, int m, int M);
void calkit_grid_destroy(calkit_grid* g);
int calkit_grid_m(const calkit_grid* g);
int calkit_grid_fourier_nodes(const calkit_grid* g);
double calkit_grid_L(const calkit_grid* g);
double calkit_grid_R(const calkit_grid* g);

/* JSON description of the sampling geometry.  snprintf contract: writes at
 * most cap-1 bytes plus a terminator, returns the full length, negative on
 * error. */
int calkit_grid_manifest(const calkit_grid* g, char* buf, int cap);

/* Smallest even spectral resolution that keeps the mode lattice past the
 * near-characteristic shell for modulus rho. */
int calkit_suggested_fourier_nodes(double R, double rho);

/* Deterministic completion of a frequency into the probing frame: unit
 * directions orthogonal to xi and to each other.  Either output may be
 * NULL. */
int calkit_frame(const double xi[3], double rho, double eta1[3], double eta2[3]);

/* ---- fields ---------------------------------------------------------- */

/* Named nodal field; see the documented preset list (zero, constant,
 * gaussian_bump, offset_bump, exp_x1, one_plus_cos2_bump, ...).  params
 * carries the per-name parameter tuple. */
calkit_field* calkit_field_preset(const calkit_grid* g, const char* name,
                                  const double* params, int n_params);

/* The index-th member of the seeded corpus of smooth functions vanishing on
 * the boundary with their gradients.  Bit-exact across platforms for a fixed
 * (seed, index). */
calkit_field* calkit_field_random_zero_trace(const calkit_grid* g,
                                             unsigned long long seed, int index);

calkit_field* calkit_field_load(const char* path);
calkit_field* calkit_field_load_on(const char* path, const calkit_grid* g);
int calkit_field_dump(const calkit_field* f, const char* path);
void calkit_field_destroy(calkit_field* f);

int calkit_field_get(const calkit_field* f, int i, int j, int k,
                     double* re, double* im);
/* Trapezoid L2 norm over the cube; negative on error. */
double calkit_field_norm_l2(const calkit_field* f);
double calkit_field_max_abs(const calkit_field* f);
/* Content hash, snprintf contract as above. */
int calkit_field_hash(const calkit_field* f, char* buf, int cap);

/* Boundary data on the surface node list. */
calkit_bfield* calkit_boundary_preset(const calkit_grid* g, const char* name,
                                      const double* params, int n_params);
void calkit_bfield_destroy(calkit_bfield* f);
double calkit_bfield_norm_l2(const calkit_bfield* f);

/* ---- forward problems ------------------------------------------------ */

/* Dirichlet solves; residual (relative, of the interior system) is written
 * through when non-NULL. */
calkit_field* calkit_solve_conductivity(const calkit_field* a,
                                        const calkit_bfield* phi, double* residual);
calkit_field* calkit_solve_schrodinger(const calkit_field* q,
                                       const calkit_bfield* phi, double* residual);

/* The potential a^{-1/2} lap(a^{1/2}) induced by a conductivity. */
calkit_field* calkit_potential_of(const calkit_field* a);

/* Dense boundary operator of the coefficient; kind is "schrodinger" or
 * "conductivity". */
calkit_dnmap* calkit_dn_map(const calkit_field* coeff, const char* kind);

/* Conductivity-to-Schrodinger transform of a conductivity map, using the
 * boundary trace and gradient of a. */
calkit_dnmap* calkit_dn_transform(const calkit_dnmap* conductivity_map,
                                  const calkit_field* a);

void calkit_dnmap_destroy(calkit_dnmap* m);
int calkit_dnmap_size(const calkit_dnmap* m);
int calkit_dnmap_entry(const calkit_dnmap* m, int row, int col,
                       double* re, double* im);
/* Frobenius norm of the difference; negative on error. */
double calkit_dnmap_diff_norm(const calkit_dnmap* a, const calkit_dnmap* b);
/* CSV of re,im cell pairs plus a JSON sidecar at path + ".json". */
int calkit_dnmap_write_csv(const calkit_dnmap* m, const char* path);

/* ---- complex exponential solutions ----------------------------------- */

/* Solution of (-lap + q) v = 0 with phase built from frequency xi and
 * modulus rho; kind 1 grows along the frame direction and carries the
 * e^{-i xi.x} oscillation, kind 2 decays.  The spectral resolution is the
 * grid's. */
calkit_cgo* calkit_cgo_build(const calkit_field* q, const double xi[3],
                             double rho, int kind);
void calkit_cgo_destroy(calkit_cgo* s);
double calkit_cgo_remainder_l2(const calkit_cgo* s);
double calkit_cgo_residual(const calkit_cgo* s);
int calkit_cgo_iterations(const calkit_cgo* s);
/* which is "v" (assembled solution) or "w" (remainder factor); the returned
 * field is a fresh handle. */
calkit_field* calkit_cgo_field(const calkit_cgo* s, const char* which);

typedef struct {
    double rho;
    double w_l2;
    double w_h2;
    int iterations;
} calkit_decay_row;

/* Remainder decay across a strictly increasing list of at least three
 * moduli.  rows must hold n_rho entries; the slopes are least-squares fits
 * of log norm against log rho.  exact_zero is set when every remainder
 * vanished (slopes meaningless). */
int calkit_decay_study(const calkit_field* q, const double xi[3],
                       const double* rho_list, int n_rho, calkit_decay_row* rows,
                       double* slope_l2, double* slope_h2, int* exact_zero);

/* ---- boundary pairing and reconstruction ----------------------------- */

/* One Fourier sample of qA - qB through the boundary operators.  born
 * nonzero uses bare exponential probes (no fixed point); zero runs the
 * spectral remainder solve. */
int calkit_fourier_sample(const calkit_dnmap* lamA, const calkit_dnmap* lamB,
                          const calkit_field* qA, const calkit_field* qB,
                          const double xi[3], double rho, int born,
                          double* re, double* im);

/* Exact-data counterpart: trapezoid quadrature of f against e^{-i xi.x}. */
int calkit_fourier_quadrature(const calkit_field* f, const double xi[3],
                              double* re, double* im);

/* Truncated Fourier inversion from boundary data on the lattice
 * |k|_inf <= xi_max with spacing pi/L. */
calkit_recon* calkit_reconstruct(const calkit_dnmap* lamA, const calkit_dnmap* lamB,
                                 const calkit_field* qA, const calkit_field* qB,
                                 int xi_max, double rho, int born);
void calkit_recon_destroy(calkit_recon* r);
double calkit_recon_rel_error(const calkit_recon* r);
double calkit_recon_truncation_error(const calkit_recon* r);
int calkit_recon_failed_count(const calkit_recon* r);
/* Integer frequency triple of the idx-th failed lattice point. */
int calkit_recon_failed(const calkit_recon* r, int idx, int k[3]);
int calkit_recon_sample_count(const calkit_recon* r);
/* Sample idx in lattice order: integer frequency triple, value, and the
 * defect against exact quadrature.  Any output pointer may be NULL. */
int calkit_recon_sample(const calkit_recon* r, int idx, int k[3],
                        double* re, double* im, double* residual);
calkit_field* calkit_recon_field(const calkit_recon* r);
int calkit_recon_write_csv(const calkit_recon* r, const char* path);

/* Flux pairing of the mismatch field over the illuminated boundary part
 * { nu . eta >= 2 eps }, its complement, and the certificate that bounds
 * the illuminated piece. */
typedef struct {
    double value_u[2];
    double value_v[2];
    double value_full[2];
    double u1_weighted;
    double w2_trace_l2;
    double bound;
} calkit_shadow_report;

int calkit_shadow_term(const calkit_field* q1, const calkit_field* q2,
                       const double xi[3], double rho, const double eta[3],
                       double eps, calkit_shadow_report* out);

/* ---- weighted inequalities ------------------------------------------- */

/* Directional Poincare sides for a zero-trace field: lhs = int |w|^2,
 * rhs = 4 R_ball^2 int |eta1 . grad w|^2. */
int calkit_poincare(const calkit_field* w, const double eta1[3],
                    double* lhs, double* rhs);

typedef struct {
    double lhs;
    double rhs;
    double constant;
    double rho2;
    int holds;
    int rho_low;
} calkit_carleman_sides;

/* Weighted lower bound at the calibrated constant; rho_low flags an
 * evaluation below the threshold rho2 (the inequality is then not
 * certified even if it numerically holds). */
int calkit_carleman_estimate(const calkit_field* v, const calkit_field* q,
                             double rho, const double eta1[3],
                             calkit_carleman_sides* out);

/* Fix the constant on an n-sample seeded corpus; the report carries the
 * constant, thresholds, and the per-sample table. */
calkit_calibration* calkit_calibrate(const calkit_field* q, const double eta1[3],
                                     int n_samples, unsigned long long seed);
void calkit_calibration_destroy(calkit_calibration* c);
double calkit_calibration_constant(const calkit_calibration* c);
double calkit_calibration_rho1(const calkit_calibration* c);
double calkit_calibration_rho2(const calkit_calibration* c);
double calkit_calibration_rho_used(const calkit_calibration* c);
double calkit_calibration_worst_margin(const calkit_calibration* c);
int calkit_calibration_rows(const calkit_calibration* c);
int calkit_calibration_row(const calkit_calibration* c, int idx, int* id,
                           double* lhs, double* rhs, double* margin, int* pass);
int calkit_calibration_write_csv(const calkit_calibration* c, const char* path);

/* ---- hashing ---------------------------------------------------------- */

/* Content hash of a file's bytes, snprintf contract. */
int calkit_file_hash(const char* path, char* buf, int cap);

#ifdef __cplusplus
}
#endif

#endif /* CALKIT_H */
