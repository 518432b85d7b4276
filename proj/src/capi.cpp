#include "calkit/calkit.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleman.hpp"
#include "cgo.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "forward.hpp"
#include "geometry.hpp"
#include "identity.hpp"
#include "io.hpp"
#include "liouville.hpp"
#include "presets.hpp"
#include "rng.hpp"

// Handle definitions.  Each is a plain wrapper so the C side owns exactly
// one C++ object per handle and destruction is a delete.

struct calkit_grid {
    calkit::GridPtr g;
};
struct calkit_field {
    calkit::ScalarField f;
};
struct calkit_bfield {
    calkit::BoundaryField f;
};
struct calkit_dnmap {
    calkit::DnMap m;
};
struct calkit_cgo {
    calkit::CgoSolution s;
};
struct calkit_recon {
    calkit::Reconstruction r;
};
struct calkit_calibration {
    calkit::CalibrationReport r;
};

namespace {

using calkit::Error;
using calkit::errc;
using calkit::Vec3;

thread_local std::string t_message;
thread_local int t_status = CALKIT_OK;

void clear_error() {
    t_status = CALKIT_OK;
    t_message.clear();
}

int record(int code, const char* what) {
    t_status = code;
    t_message = what;
    return code;
}

// The errc values were chosen to match the public codes one to one.
int classify(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e))
        return record(static_cast<int>(err->code()), e.what());
    if (dynamic_cast<const std::invalid_argument*>(&e))
        return record(CALKIT_E_BAD_ARGUMENT, e.what());
    return record(CALKIT_E_INTERNAL, e.what());
}

template <class F>
int guard_status(F&& fn) {
    try {
        fn();
        clear_error();
        return CALKIT_OK;
    } catch (const std::exception& e) {
        return classify(e);
    } catch (...) {
        return record(CALKIT_E_INTERNAL, "unknown error");
    }
}

template <class H, class F>
H* guard_handle(F&& fn) {
    try {
        H* h = fn();
        clear_error();
        return h;
    } catch (const std::exception& e) {
        classify(e);
        return nullptr;
    } catch (...) {
        record(CALKIT_E_INTERNAL, "unknown error");
        return nullptr;
    }
}

template <class T>
const T& deref(const T* p, const char* what) {
    if (!p) throw Error(errc::bad_argument, std::string(what) + ": null handle");
    return *p;
}

const double* require_triple(const double* v, const char* what) {
    if (!v) throw Error(errc::bad_argument, std::string(what) + ": null vector");
    return v;
}

Vec3 to_vec(const double* v, const char* what) {
    require_triple(v, what);
    return Vec3(v[0], v[1], v[2]);
}

std::vector<double> to_params(const double* params, int n, const char* what) {
    if (n < 0) throw Error(errc::bad_argument, std::string(what) + ": negative parameter count");
    if (n > 0 && !params)
        throw Error(errc::bad_argument, std::string(what) + ": null parameter array");
    return std::vector<double>(params, params + n);
}

// snprintf contract used by every string getter.
int copy_out(const std::string& s, char* buf, int cap) {
    if (buf && cap > 0) {
        const int n = std::min<int>(cap - 1, static_cast<int>(s.size()));
        std::memcpy(buf, s.data(), static_cast<size_t>(n));
        buf[n] = '\0';
    }
    return static_cast<int>(s.size());
}

void store(double* slot, double value) {
    if (slot) *slot = value;
}

} // namespace

extern "C" {

const char* calkit_version(void) { return "1.0.0"; }

const char* calkit_last_error(void) { return t_message.c_str(); }

int calkit_last_status(void) { return t_status; }

/* ---- geometry ------------------------------------------------------- */

calkit_grid* calkit_grid_create(double R, double L, int m, int M) {
    return guard_handle<calkit_grid>(
        [&] { return new calkit_grid{calkit::make_grid(R, L, m, M)}; });
}

void calkit_grid_destroy(calkit_grid* g) { delete g; }

int calkit_grid_m(const calkit_grid* g) { return g && g->g ? g->g->m : -1; }

int calkit_grid_fourier_nodes(const calkit_grid* g) { return g && g->g ? g->g->M : -1; }

double calkit_grid_L(const calkit_grid* g) { return g && g->g ? g->g->L : -1.0; }

double calkit_grid_R(const calkit_grid* g) { return g && g->g ? g->g->R : -1.0; }

int calkit_grid_manifest(const calkit_grid* g, char* buf, int cap) {
    int written = -1;
    const int rc = guard_status([&] {
        written = copy_out(deref(g, "calkit_grid_manifest").g->manifest(), buf, cap);
    });
    return rc == CALKIT_OK ? written : -1;
}

int calkit_suggested_fourier_nodes(double R, double rho) {
    int out = -1;
    const int rc =
        guard_status([&] { out = calkit::suggested_fourier_nodes(R, rho); });
    return rc == CALKIT_OK ? out : -1;
}

int calkit_frame(const double xi[3], double rho, double eta1[3], double eta2[3]) {
    return guard_status([&] {
        const calkit::Frame fr = calkit::make_frame(to_vec(xi, "calkit_frame"), rho);
        for (int d = 0; d < 3; ++d) {
            if (eta1) eta1[d] = fr.eta1[d];
            if (eta2) eta2[d] = fr.eta2[d];
        }
    });
}

/* ---- fields ---------------------------------------------------------- */

calkit_field* calkit_field_preset(const calkit_grid* g, const char* name,
                                  const double* params, int n_params) {
    return guard_handle<calkit_field>([&] {
        const auto& grid = deref(g, "calkit_field_preset");
        if (!name) throw Error(errc::bad_argument, "calkit_field_preset: null name");
        return new calkit_field{calkit::make_field_preset(
            grid.g, name, to_params(params, n_params, "calkit_field_preset"))};
    });
}

calkit_field* calkit_field_random_zero_trace(const calkit_grid* g,
                                             unsigned long long seed, int index) {
    return guard_handle<calkit_field>([&] {
        const auto& grid = deref(g, "calkit_field_random_zero_trace");
        if (index < 0)
            throw Error(errc::bad_argument, "calkit_field_random_zero_trace: negative index");
        calkit::Lcg64 rng(seed);
        // Each corpus member consumes exactly 15 draws; skip to the slot.
        for (int t = 0; t < 15 * index; ++t) rng.next_u64();
        return new calkit_field{calkit::random_zero_trace(grid.g, rng)};
    });
}

calkit_field* calkit_field_load(const char* path) {
    return guard_handle<calkit_field>([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_field_load: null path");
        return new calkit_field{calkit::load_field(path)};
    });
}

calkit_field* calkit_field_load_on(const char* path, const calkit_grid* g) {
    return guard_handle<calkit_field>([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_field_load_on: null path");
        return new calkit_field{
            calkit::load_field(path, deref(g, "calkit_field_load_on").g)};
    });
}

int calkit_field_dump(const calkit_field* f, const char* path) {
    return guard_status([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_field_dump: null path");
        calkit::dump_field(deref(f, "calkit_field_dump").f, path);
    });
}

void calkit_field_destroy(calkit_field* f) { delete f; }

int calkit_field_get(const calkit_field* f, int i, int j, int k, double* re,
                     double* im) {
    return guard_status([&] {
        const auto& field = deref(f, "calkit_field_get").f;
        const calkit::Grid& grid = *field.grid;
        if (i < 0 || j < 0 || k < 0 || i >= grid.m || j >= grid.m || k >= grid.m)
            throw Error(errc::bad_argument, "calkit_field_get: node index out of range");
        const calkit::cplx v = field.at(i, j, k);
        store(re, v.real());
        store(im, v.imag());
    });
}

double calkit_field_norm_l2(const calkit_field* f) {
    double out = -1.0;
    const int rc =
        guard_status([&] { out = deref(f, "calkit_field_norm_l2").f.norm_l2(); });
    return rc == CALKIT_OK ? out : -1.0;
}

double calkit_field_max_abs(const calkit_field* f) {
    double out = -1.0;
    const int rc = guard_status([&] {
        out = deref(f, "calkit_field_max_abs").f.values.cwiseAbs().maxCoeff();
    });
    return rc == CALKIT_OK ? out : -1.0;
}

int calkit_field_hash(const calkit_field* f, char* buf, int cap) {
    int written = -1;
    const int rc = guard_status([&] {
        written = copy_out(calkit::field_hash(deref(f, "calkit_field_hash").f), buf, cap);
    });
    return rc == CALKIT_OK ? written : -1;
}

calkit_bfield* calkit_boundary_preset(const calkit_grid* g, const char* name,
                                      const double* params, int n_params) {
    return guard_handle<calkit_bfield>([&] {
        const auto& grid = deref(g, "calkit_boundary_preset");
        if (!name) throw Error(errc::bad_argument, "calkit_boundary_preset: null name");
        return new calkit_bfield{calkit::make_boundary_preset(
            grid.g, name, to_params(params, n_params, "calkit_boundary_preset"))};
    });
}

void calkit_bfield_destroy(calkit_bfield* f) { delete f; }

double calkit_bfield_norm_l2(const calkit_bfield* f) {
    double out = -1.0;
    const int rc =
        guard_status([&] { out = deref(f, "calkit_bfield_norm_l2").f.norm_l2(); });
    return rc == CALKIT_OK ? out : -1.0;
}

/* ---- forward problems ------------------------------------------------ */

calkit_field* calkit_solve_conductivity(const calkit_field* a,
                                        const calkit_bfield* phi, double* residual) {
    return guard_handle<calkit_field>([&] {
        calkit::SolveReport rep;
        auto* out = new calkit_field{
            calkit::solve_conductivity(deref(a, "calkit_solve_conductivity").f,
                                       deref(phi, "calkit_solve_conductivity").f, &rep)};
        store(residual, rep.residual);
        return out;
    });
}

calkit_field* calkit_solve_schrodinger(const calkit_field* q,
                                       const calkit_bfield* phi, double* residual) {
    return guard_handle<calkit_field>([&] {
        calkit::SolveReport rep;
        auto* out = new calkit_field{
            calkit::solve_schrodinger(deref(q, "calkit_solve_schrodinger").f,
                                      deref(phi, "calkit_solve_schrodinger").f, &rep)};
        store(residual, rep.residual);
        return out;
    });
}

calkit_field* calkit_potential_of(const calkit_field* a) {
    return guard_handle<calkit_field>([&] {
        return new calkit_field{calkit::potential_of(deref(a, "calkit_potential_of").f)};
    });
}

calkit_dnmap* calkit_dn_map(const calkit_field* coeff, const char* kind) {
    return guard_handle<calkit_dnmap>([&] {
        const auto& c = deref(coeff, "calkit_dn_map").f;
        const std::string k = kind ? kind : "";
        if (k == "schrodinger") return new calkit_dnmap{calkit::dn_map_schrodinger(c)};
        if (k == "conductivity") return new calkit_dnmap{calkit::dn_map_conductivity(c)};
        throw Error(errc::bad_argument,
                    "calkit_dn_map: kind must be 'schrodinger' or 'conductivity'");
    });
}

calkit_dnmap* calkit_dn_transform(const calkit_dnmap* conductivity_map,
                                  const calkit_field* a) {
    return guard_handle<calkit_dnmap>([&] {
        const auto& na = deref(conductivity_map, "calkit_dn_transform").m;
        const auto& cond = deref(a, "calkit_dn_transform").f;
        if (!cond.grid) throw Error(errc::bad_argument, "calkit_dn_transform: field has no grid");
        calkit::BoundaryField a_b(cond.grid);
        for (int b = 0; b < cond.grid->n_boundary(); ++b)
            a_b.values[b] = cond.values[cond.grid->boundary[b].flat];
        return new calkit_dnmap{
            calkit::dn_transform(na, a_b, calkit::boundary_gradient(cond))};
    });
}

void calkit_dnmap_destroy(calkit_dnmap* m) { delete m; }

int calkit_dnmap_size(const calkit_dnmap* m) { return m ? m->m.size() : -1; }

int calkit_dnmap_entry(const calkit_dnmap* m, int row, int col, double* re,
                       double* im) {
    return guard_status([&] {
        const auto& map = deref(m, "calkit_dnmap_entry").m;
        if (row < 0 || col < 0 || row >= map.size() || col >= map.size())
            throw Error(errc::bad_argument, "calkit_dnmap_entry: index out of range");
        const calkit::cplx v = map.entry(row, col);
        store(re, v.real());
        store(im, v.imag());
    });
}

double calkit_dnmap_diff_norm(const calkit_dnmap* a, const calkit_dnmap* b) {
    double out = -1.0;
    const int rc = guard_status([&] {
        out = deref(a, "calkit_dnmap_diff_norm")
                  .m.difference(deref(b, "calkit_dnmap_diff_norm").m)
                  .norm();
    });
    return rc == CALKIT_OK ? out : -1.0;
}

int calkit_dnmap_write_csv(const calkit_dnmap* m, const char* path) {
    return guard_status([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_dnmap_write_csv: null path");
        calkit::write_dn_csv(deref(m, "calkit_dnmap_write_csv").m, path);
    });
}

/* ---- complex exponential solutions ----------------------------------- */

calkit_cgo* calkit_cgo_build(const calkit_field* q, const double xi[3], double rho,
                             int kind) {
    return guard_handle<calkit_cgo>([&] {
        const auto& pot = deref(q, "calkit_cgo_build").f;
        if (kind != 1 && kind != 2)
            throw Error(errc::bad_argument, "calkit_cgo_build: kind must be 1 or 2");
        const calkit::Frame frame =
            calkit::make_frame(to_vec(xi, "calkit_cgo_build"), rho);
        return new calkit_cgo{calkit::build_cgo(
            pot, frame, kind == 1 ? calkit::CgoKind::type1 : calkit::CgoKind::type2)};
    });
}

void calkit_cgo_destroy(calkit_cgo* s) { delete s; }

double calkit_cgo_remainder_l2(const calkit_cgo* s) {
    return s ? s->s.w_l2 : -1.0;
}

double calkit_cgo_residual(const calkit_cgo* s) { return s ? s->s.residual : -1.0; }

int calkit_cgo_iterations(const calkit_cgo* s) { return s ? s->s.iterations : -1; }

calkit_field* calkit_cgo_field(const calkit_cgo* s, const char* which) {
    return guard_handle<calkit_field>([&] {
        const auto& sol = deref(s, "calkit_cgo_field").s;
        const std::string w = which ? which : "";
        if (w == "v") return new calkit_field{sol.v};
        if (w == "w") return new calkit_field{sol.w};
        throw Error(errc::bad_argument, "calkit_cgo_field: which must be 'v' or 'w'");
    });
}

int calkit_decay_study(const calkit_field* q, const double xi[3],
                       const double* rho_list, int n_rho, calkit_decay_row* rows,
                       double* slope_l2, double* slope_h2, int* exact_zero) {
    return guard_status([&] {
        const auto& pot = deref(q, "calkit_decay_study").f;
        if (!rho_list || n_rho <= 0 || !rows)
            throw Error(errc::bad_argument, "calkit_decay_study: null or empty output");
        const calkit::DecayStudy study =
            calkit::decay_study(pot, to_vec(xi, "calkit_decay_study"),
                                std::vector<double>(rho_list, rho_list + n_rho));
        for (int i = 0; i < n_rho; ++i) {
            rows[i].rho = study.rows[i].rho;
            rows[i].w_l2 = study.rows[i].w_l2;
            rows[i].w_h2 = study.rows[i].w_h2;
            rows[i].iterations = study.rows[i].iterations;
        }
        store(slope_l2, study.slope_l2);
        store(slope_h2, study.slope_h2);
        if (exact_zero) *exact_zero = study.exact_zero ? 1 : 0;
    });
}

/* ---- boundary pairing and reconstruction ----------------------------- */

int calkit_fourier_sample(const calkit_dnmap* lamA, const calkit_dnmap* lamB,
                          const calkit_field* qA, const calkit_field* qB,
                          const double xi[3], double rho, int born, double* re,
                          double* im) {
    return guard_status([&] {
        const calkit::cplx v = calkit::fourier_sample(
            deref(lamA, "calkit_fourier_sample").m, deref(lamB, "calkit_fourier_sample").m,
            deref(qA, "calkit_fourier_sample").f, deref(qB, "calkit_fourier_sample").f,
            to_vec(xi, "calkit_fourier_sample"), rho,
            born ? calkit::ProbeMode::born : calkit::ProbeMode::cgo);
        store(re, v.real());
        store(im, v.imag());
    });
}

int calkit_fourier_quadrature(const calkit_field* f, const double xi[3], double* re,
                              double* im) {
    return guard_status([&] {
        const calkit::cplx v = calkit::fourier_quadrature(
            deref(f, "calkit_fourier_quadrature").f, to_vec(xi, "calkit_fourier_quadrature"));
        store(re, v.real());
        store(im, v.imag());
    });
}

calkit_recon* calkit_reconstruct(const calkit_dnmap* lamA, const calkit_dnmap* lamB,
                                 const calkit_field* qA, const calkit_field* qB,
                                 int xi_max, double rho, int born) {
    return guard_handle<calkit_recon>([&] {
        return new calkit_recon{calkit::reconstruct_potential(
            deref(lamA, "calkit_reconstruct").m, deref(lamB, "calkit_reconstruct").m,
            deref(qA, "calkit_reconstruct").f, deref(qB, "calkit_reconstruct").f, xi_max,
            rho, born ? calkit::ProbeMode::born : calkit::ProbeMode::cgo)};
    });
}

void calkit_recon_destroy(calkit_recon* r) { delete r; }

double calkit_recon_rel_error(const calkit_recon* r) {
    return r ? r->r.report.rel_error : -1.0;
}

double calkit_recon_truncation_error(const calkit_recon* r) {
    return r ? r->r.report.truncation_error : -1.0;
}

int calkit_recon_failed_count(const calkit_recon* r) {
    return r ? static_cast<int>(r->r.report.failed.size()) : -1;
}

int calkit_recon_failed(const calkit_recon* r, int idx, int k[3]) {
    return guard_status([&] {
        const auto& failed = deref(r, "calkit_recon_failed").r.report.failed;
        if (idx < 0 || idx >= static_cast<int>(failed.size()))
            throw Error(errc::bad_argument, "calkit_recon_failed: index out of range");
        if (!k) throw Error(errc::bad_argument, "calkit_recon_failed: null output");
        for (int d = 0; d < 3; ++d) k[d] = failed[idx][d];
    });
}

int calkit_recon_sample_count(const calkit_recon* r) {
    return r ? static_cast<int>(r->r.samples.size()) : -1;
}

int calkit_recon_sample(const calkit_recon* r, int idx, int k[3], double* re,
                        double* im, double* residual) {
    return guard_status([&] {
        const auto& rec = deref(r, "calkit_recon_sample").r;
        if (idx < 0 || idx >= rec.samples.size())
            throw Error(errc::bad_argument, "calkit_recon_sample: index out of range");
        const int n = 2 * rec.report.xi_max + 1;
        if (k) {
            k[0] = idx / (n * n) - rec.report.xi_max;
            k[1] = (idx / n) % n - rec.report.xi_max;
            k[2] = idx % n - rec.report.xi_max;
        }
        store(re, rec.samples[idx].real());
        store(im, rec.samples[idx].imag());
        store(residual, std::abs(rec.samples[idx] - rec.exact[idx]));
    });
}

calkit_field* calkit_recon_field(const calkit_recon* r) {
    return guard_handle<calkit_field>([&] {
        return new calkit_field{deref(r, "calkit_recon_field").r.q_rec};
    });
}

int calkit_recon_write_csv(const calkit_recon* r, const char* path) {
    return guard_status([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_recon_write_csv: null path");
        calkit::write_recon_csv(deref(r, "calkit_recon_write_csv").r, path);
    });
}

int calkit_shadow_term(const calkit_field* q1, const calkit_field* q2,
                       const double xi[3], double rho, const double eta[3],
                       double eps, calkit_shadow_report* out) {
    return guard_status([&] {
        if (!out) throw Error(errc::bad_argument, "calkit_shadow_term: null output");
        const calkit::Frame frame =
            calkit::make_frame(to_vec(xi, "calkit_shadow_term"), rho);
        const calkit::ShadowReport rep = calkit::shadow_term(
            deref(q1, "calkit_shadow_term").f, deref(q2, "calkit_shadow_term").f, frame,
            to_vec(eta, "calkit_shadow_term"), eps);
        out->value_u[0] = rep.value_U.real();
        out->value_u[1] = rep.value_U.imag();
        out->value_v[0] = rep.value_V.real();
        out->value_v[1] = rep.value_V.imag();
        out->value_full[0] = rep.value_full.real();
        out->value_full[1] = rep.value_full.imag();
        out->u1_weighted = rep.u1_weighted;
        out->w2_trace_l2 = rep.w2_trace_l2;
        out->bound = rep.bound;
    });
}

/* ---- weighted inequalities ------------------------------------------- */

int calkit_poincare(const calkit_field* w, const double eta1[3], double* lhs,
                    double* rhs) {
    return guard_status([&] {
        const calkit::PoincareSides sides = calkit::poincare_ratio(
            deref(w, "calkit_poincare").f, to_vec(eta1, "calkit_poincare"));
        store(lhs, sides.lhs);
        store(rhs, sides.rhs);
    });
}

int calkit_carleman_estimate(const calkit_field* v, const calkit_field* q, double rho,
                             const double eta1[3], calkit_carleman_sides* out) {
    return guard_status([&] {
        if (!out) throw Error(errc::bad_argument, "calkit_carleman_estimate: null output");
        const calkit::CarlemanSides sides = calkit::carleman_estimate(
            deref(v, "calkit_carleman_estimate").f, deref(q, "calkit_carleman_estimate").f,
            rho, to_vec(eta1, "calkit_carleman_estimate"));
        out->lhs = sides.lhs;
        out->rhs = sides.rhs;
        out->constant = sides.C_used;
        out->rho2 = sides.rho2;
        out->holds = sides.holds ? 1 : 0;
        out->rho_low = sides.rho_low ? 1 : 0;
    });
}

calkit_calibration* calkit_calibrate(const calkit_field* q, const double eta1[3],
                                     int n_samples, unsigned long long seed) {
    return guard_handle<calkit_calibration>([&] {
        return new calkit_calibration{
            calkit::calibrate_constant(deref(q, "calkit_calibrate").f,
                                       to_vec(eta1, "calkit_calibrate"), n_samples, seed)};
    });
}

void calkit_calibration_destroy(calkit_calibration* c) { delete c; }

double calkit_calibration_constant(const calkit_calibration* c) {
    return c ? c->r.C : -1.0;
}

double calkit_calibration_rho1(const calkit_calibration* c) {
    return c ? c->r.rho1 : -1.0;
}

double calkit_calibration_rho2(const calkit_calibration* c) {
    return c ? c->r.rho2 : -1.0;
}

double calkit_calibration_rho_used(const calkit_calibration* c) {
    return c ? c->r.rho_used : -1.0;
}

double calkit_calibration_worst_margin(const calkit_calibration* c) {
    return c ? c->r.worst_margin : -1.0;
}

int calkit_calibration_rows(const calkit_calibration* c) {
    return c ? static_cast<int>(c->r.table.size()) : -1;
}

int calkit_calibration_row(const calkit_calibration* c, int idx, int* id, double* lhs,
                           double* rhs, double* margin, int* pass) {
    return guard_status([&] {
        const auto& rep = deref(c, "calkit_calibration_row").r;
        if (idx < 0 || idx >= static_cast<int>(rep.table.size()))
            throw Error(errc::bad_argument, "calkit_calibration_row: index out of range");
        const calkit::CalibrationSample& row = rep.table[idx];
        if (id) *id = row.id;
        store(lhs, row.lhs);
        store(rhs, row.rhs);
        store(margin, row.margin);
        if (pass) *pass = row.pass ? 1 : 0;
    });
}

int calkit_calibration_write_csv(const calkit_calibration* c, const char* path) {
    return guard_status([&] {
        if (!path)
            throw Error(errc::bad_argument, "calkit_calibration_write_csv: null path");
        calkit::write_calibration_csv(deref(c, "calkit_calibration_write_csv").r, path);
    });
}

/* ---- hashing ---------------------------------------------------------- */

int calkit_file_hash(const char* path, char* buf, int cap) {
    int written = -1;
    const int rc = guard_status([&] {
        if (!path) throw Error(errc::bad_argument, "calkit_file_hash: null path");
        written = copy_out(calkit::file_hash(path), buf, cap);
    });
    return rc == CALKIT_OK ? written : -1;
}

} // extern "C"
