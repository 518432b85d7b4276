#include <CLI11.hpp>
#include <json.hpp>

#include <calkit/calkit.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

// Batch driver.  Every run is: resolve a grid and inputs from flags plus an
// optional flat key=value config, call the shared library, write the
// artifact files into --out, and finish with a JSON manifest that names the
// command, the config hash, the input hashes, the resolved parameters, and
// the produced files.  CSV and field outputs are deterministic for a fixed
// config and seed; manifests additionally carry the wall time.
//
// Exit codes: 0 success, 1 usage (bad flags, malformed config, missing or
// mismatched files), 2 numerical failure (solver breakdown, non-contraction,
// or a certified inequality evaluated outside its validity range).

namespace {

using nlohmann::json;

struct UsageFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void raise_last(const std::string& where) {
    const int status = calkit_last_status();
    const std::string msg = where + ": " + calkit_last_error();
    if (status == CALKIT_E_BAD_ARGUMENT || status == CALKIT_E_DIMENSION ||
        status == CALKIT_E_IO)
        throw UsageFail(msg);
    throw NumericalFail(msg);
}

void check(int rc, const std::string& where) {
    if (rc != CALKIT_OK) raise_last(where);
}

template <class T>
T* check_handle(T* p, const std::string& where) {
    if (!p) raise_last(where);
    return p;
}

struct Deleter {
    void operator()(calkit_grid* p) const { calkit_grid_destroy(p); }
    void operator()(calkit_field* p) const { calkit_field_destroy(p); }
    void operator()(calkit_bfield* p) const { calkit_bfield_destroy(p); }
    void operator()(calkit_dnmap* p) const { calkit_dnmap_destroy(p); }
    void operator()(calkit_cgo* p) const { calkit_cgo_destroy(p); }
    void operator()(calkit_recon* p) const { calkit_recon_destroy(p); }
    void operator()(calkit_calibration* p) const { calkit_calibration_destroy(p); }
};
template <class T>
using Ptr = std::unique_ptr<T, Deleter>;

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageFail(what + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

void parse_triple(const std::string& text, const std::string& what, double out[3]) {
    const std::vector<double> v = parse_list(text, what);
    if (v.size() != 3) throw UsageFail(what + ": expected three comma-separated numbers");
    for (int d = 0; d < 3; ++d) out[d] = v[d];
}

std::string hash_of_file(const std::string& path) {
    char buf[32];
    if (calkit_file_hash(path.c_str(), buf, sizeof buf) < 0)
        raise_last("hashing '" + path + "'");
    return buf;
}

std::string hash_of_field(const calkit_field* f) {
    char buf[32];
    if (calkit_field_hash(f, buf, sizeof buf) < 0) raise_last("hashing field");
    return buf;
}

// Options shared by every command.  The grid keys double as the declared
// geometry for file inputs, which must match their headers.
struct Common {
    std::string config;
    std::string out = ".";
    unsigned long long seed = 2026;
    int m = 17;
    double L = 1.0;
    double R = 2.0;
    int M = 32;
};

void add_common(CLI::App* sub, Common& c) {
    sub->set_config("--config", "", "flat key=value file; command-line flags win");
    sub->add_option("--out", c.out, "output directory")
        ->envname("CALKIT_OUT")
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "corpus seed")->capture_default_str();
    sub->add_option("--m", c.m, "cube nodes per axis (odd)")->capture_default_str();
    sub->add_option("--L", c.L, "cube half-width")->capture_default_str();
    sub->add_option("--R", c.R, "periodicity box half-width")->capture_default_str();
    sub->add_option("--M", c.M, "spectral nodes per axis; 0 picks from rho")
        ->capture_default_str();
}

Ptr<calkit_grid> make_grid(const Common& c, double rho_for_M = 0.0) {
    int M = c.M;
    if (M == 0) {
        if (!(rho_for_M > 0.0)) throw UsageFail("M=0 needs a positive rho to size the box");
        M = calkit_suggested_fourier_nodes(c.R, rho_for_M);
        if (M < 0) raise_last("sizing the spectral box");
    }
    return Ptr<calkit_grid>(
        check_handle(calkit_grid_create(c.R, c.L, c.m, M), "creating grid"));
}

// A field input is either a named preset with parameters or a dump file.
struct FieldSpec {
    std::string preset;
    std::string params;
    std::string file;
};

void add_field_spec(CLI::App* sub, const std::string& key, FieldSpec& spec,
                    const std::string& what) {
    sub->add_option("--" + key + "-preset", spec.preset, what + " preset name")
        ->capture_default_str();
    sub->add_option("--" + key + "-params", spec.params,
                    what + " preset parameters, comma list")
        ->capture_default_str();
    sub->add_option("--" + key + "-file", spec.file, what + " field dump path");
}

Ptr<calkit_field> resolve_field(const FieldSpec& spec, const calkit_grid* g,
                                const std::string& label, json& inputs) {
    Ptr<calkit_field> f;
    json rec;
    if (!spec.file.empty()) {
        f.reset(check_handle(calkit_field_load_on(spec.file.c_str(), g),
                             "loading " + label + " from '" + spec.file + "'"));
        rec["file"] = spec.file;
    } else {
        const std::vector<double> params = parse_list(spec.params, label + " params");
        f.reset(check_handle(
            calkit_field_preset(g, spec.preset.c_str(), params.data(),
                                static_cast<int>(params.size())),
            "building " + label + " preset '" + spec.preset + "'"));
        rec["preset"] = spec.preset;
        rec["params"] = params;
    }
    rec["hash"] = hash_of_field(f.get());
    inputs[label] = rec;
    return f;
}

std::string out_path(const Common& c, const std::string& name) {
    return (std::filesystem::path(c.out) / name).string();
}

json grid_json(const calkit_grid* g) {
    return json{{"m", calkit_grid_m(g)},
                {"L", calkit_grid_L(g)},
                {"R", calkit_grid_R(g)},
                {"M", calkit_grid_fourier_nodes(g)}};
}

// One manifest per run; outputs maps file name to content hash so every
// artifact is tied to the command and config that produced it.
struct Manifest {
    std::string command;
    json parameters = json::object();
    json inputs = json::object();
    json outputs = json::object();
    json results = json::object();
    std::string warning;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void add_output(const Common& c, const std::string& name) {
        outputs[name] = hash_of_file(out_path(c, name));
    }

    void write(const Common& c) {
        json doc;
        doc["command"] = command;
        doc["config_hash"] = c.config.empty() ? json(nullptr) : json(hash_of_file(c.config));
        doc["parameters"] = parameters;
        doc["inputs"] = inputs;
        doc["outputs"] = outputs;
        doc["results"] = results;
        if (!warning.empty()) doc["warning"] = warning;
        doc["versions"] = json{{"calkit", calkit_version()}};
        doc["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string path = out_path(c, command + "_manifest.json");
        std::ofstream f(path);
        if (!f) throw UsageFail("cannot write manifest '" + path + "'");
        f << doc.dump(2) << "\n";
    }
};

void prepare_out(const Common& c) {
    std::error_code ec;
    std::filesystem::create_directories(c.out, ec);
    if (ec) throw UsageFail("cannot create output directory '" + c.out + "'");
}

struct CsvFile {
    std::FILE* f = nullptr;
    std::string path;

    CsvFile(const Common& c, const std::string& name) : path(out_path(c, name)) {
        f = std::fopen(path.c_str(), "w");
        if (!f) throw UsageFail("cannot write '" + path + "'");
    }
    ~CsvFile() {
        if (f) std::fclose(f);
    }
    void close() {
        if (f && std::fclose(f) != 0) {
            f = nullptr;
            throw UsageFail("write failed on '" + path + "'");
        }
        f = nullptr;
    }
};

/* ---- commands --------------------------------------------------------- */

struct ForwardOpts {
    Common c;
    std::string kind = "conductivity";
    FieldSpec coeff{"one_plus_cos2_bump", "0.4", ""};
    std::string boundary_preset = "linear_x1";
    std::string boundary_params;
};

int run_forward(const ForwardOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "forward";
    Ptr<calkit_grid> g = make_grid(o.c);
    Ptr<calkit_field> coeff = resolve_field(o.coeff, g.get(), "coefficient", man.inputs);
    const std::vector<double> bp = parse_list(o.boundary_params, "boundary params");
    Ptr<calkit_bfield> phi(check_handle(
        calkit_boundary_preset(g.get(), o.boundary_preset.c_str(), bp.data(),
                               static_cast<int>(bp.size())),
        "building boundary preset '" + o.boundary_preset + "'"));
    man.inputs["boundary"] = json{{"preset", o.boundary_preset}, {"params", bp}};

    double residual = 0.0;
    Ptr<calkit_field> u;
    if (o.kind == "conductivity")
        u.reset(check_handle(calkit_solve_conductivity(coeff.get(), phi.get(), &residual),
                             "conductivity solve"));
    else if (o.kind == "schrodinger")
        u.reset(check_handle(calkit_solve_schrodinger(coeff.get(), phi.get(), &residual),
                             "schrodinger solve"));
    else
        throw UsageFail("kind must be 'conductivity' or 'schrodinger'");

    check(calkit_field_dump(u.get(), out_path(o.c, "forward_solution.field").c_str()),
          "writing solution");
    man.parameters = json{{"kind", o.kind},
                          {"grid", grid_json(g.get())},
                          {"boundary_preset", o.boundary_preset}};
    man.results = json{{"residual", residual},
                       {"solution_norm_l2", calkit_field_norm_l2(u.get())},
                       {"solution_hash", hash_of_field(u.get())}};
    man.add_output(o.c, "forward_solution.field");
    man.write(o.c);
    return 0;
}

struct DnmapOpts {
    Common c;
    std::string kind = "schrodinger";
    FieldSpec coeff{"gaussian_bump", "1.0,0.4", ""};
};

int run_dnmap(const DnmapOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "dnmap";
    Ptr<calkit_grid> g = make_grid(o.c);
    Ptr<calkit_field> coeff = resolve_field(o.coeff, g.get(), "coefficient", man.inputs);
    Ptr<calkit_dnmap> dn(check_handle(calkit_dn_map(coeff.get(), o.kind.c_str()),
                                      "assembling the boundary operator"));
    check(calkit_dnmap_write_csv(dn.get(), out_path(o.c, "dnmap.csv").c_str()),
          "writing dnmap.csv");
    man.parameters = json{{"kind", o.kind}, {"grid", grid_json(g.get())}};
    man.results = json{{"size", calkit_dnmap_size(dn.get())}};
    man.add_output(o.c, "dnmap.csv");
    man.add_output(o.c, "dnmap.csv.json");
    man.write(o.c);
    return 0;
}

struct LiouvilleOpts {
    Common c;
    FieldSpec a{"one_plus_cos2_bump", "0.4", ""};
    bool compare = false;
};

int run_liouville(const LiouvilleOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "liouville";
    Ptr<calkit_grid> g = make_grid(o.c);
    Ptr<calkit_field> a = resolve_field(o.a, g.get(), "conductivity", man.inputs);
    Ptr<calkit_field> q(
        check_handle(calkit_potential_of(a.get()), "computing the induced potential"));
    check(calkit_field_dump(q.get(), out_path(o.c, "liouville_potential.field").c_str()),
          "writing potential");
    man.parameters = json{{"grid", grid_json(g.get())}, {"compare", o.compare}};
    man.results = json{{"potential_hash", hash_of_field(q.get())},
                       {"potential_norm_l2", calkit_field_norm_l2(q.get())}};
    if (o.compare) {
        // Transform the conductivity map and set it against the potential
        // map assembled directly; the gap is pure discretization.
        Ptr<calkit_dnmap> na(check_handle(calkit_dn_map(a.get(), "conductivity"),
                                          "assembling the conductivity map"));
        Ptr<calkit_dnmap> lam(check_handle(calkit_dn_map(q.get(), "schrodinger"),
                                           "assembling the potential map"));
        Ptr<calkit_dnmap> lifted(check_handle(calkit_dn_transform(na.get(), a.get()),
                                              "transforming the conductivity map"));
        const double defect = calkit_dnmap_diff_norm(lifted.get(), lam.get());
        if (defect < 0.0) raise_last("comparing the maps");
        man.results["transform_defect_frobenius"] = defect;
    }
    man.add_output(o.c, "liouville_potential.field");
    man.write(o.c);
    return 0;
}

struct CgoOpts {
    Common c;
    FieldSpec q{"gaussian_bump", "1.0,0.4", ""};
    std::string xi = "3.141592653589793,0,0";
    double rho = 4.0;
    int kind = 1;
};

int run_cgo(const CgoOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "cgo";
    double xi[3];
    parse_triple(o.xi, "xi", xi);
    Ptr<calkit_grid> g = make_grid(o.c, o.rho);
    Ptr<calkit_field> q = resolve_field(o.q, g.get(), "potential", man.inputs);
    Ptr<calkit_cgo> sol(check_handle(calkit_cgo_build(q.get(), xi, o.rho, o.kind),
                                     "building the exponential solution"));
    Ptr<calkit_field> v(check_handle(calkit_cgo_field(sol.get(), "v"), "extracting v"));
    Ptr<calkit_field> w(check_handle(calkit_cgo_field(sol.get(), "w"), "extracting w"));
    check(calkit_field_dump(v.get(), out_path(o.c, "cgo_v.field").c_str()), "writing v");
    check(calkit_field_dump(w.get(), out_path(o.c, "cgo_w.field").c_str()), "writing w");

    double eta1[3], eta2[3];
    check(calkit_frame(xi, o.rho, eta1, eta2), "completing the frame");
    man.parameters = json{{"grid", grid_json(g.get())},
                          {"xi", {xi[0], xi[1], xi[2]}},
                          {"rho", o.rho},
                          {"kind", o.kind}};
    man.results = json{{"frame",
                        {{"eta1", {eta1[0], eta1[1], eta1[2]}},
                         {"eta2", {eta2[0], eta2[1], eta2[2]}}}},
                       {"iterations", calkit_cgo_iterations(sol.get())},
                       {"remainder_l2", calkit_cgo_remainder_l2(sol.get())},
                       {"residual", calkit_cgo_residual(sol.get())},
                       {"v_norm_l2", calkit_field_norm_l2(v.get())}};
    man.add_output(o.c, "cgo_v.field");
    man.add_output(o.c, "cgo_w.field");
    man.write(o.c);
    return 0;
}

struct DecayOpts {
    Common c;
    FieldSpec q{"gaussian_bump", "1.0,0.4", ""};
    std::string xi = "3.141592653589793,0,0";
    std::string rho_list = "2,4,8";
};

int run_decay(const DecayOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "decay";
    double xi[3];
    parse_triple(o.xi, "xi", xi);
    const std::vector<double> rhos = parse_list(o.rho_list, "rho_list");
    if (rhos.size() < 3) throw UsageFail("rho_list needs at least three entries");
    Ptr<calkit_grid> g = make_grid(o.c, rhos.back());
    Ptr<calkit_field> q = resolve_field(o.q, g.get(), "potential", man.inputs);

    std::vector<calkit_decay_row> rows(rhos.size());
    double slope_l2 = 0.0, slope_h2 = 0.0;
    int exact_zero = 0;
    check(calkit_decay_study(q.get(), xi, rhos.data(), static_cast<int>(rhos.size()),
                             rows.data(), &slope_l2, &slope_h2, &exact_zero),
          "running the decay sweep");

    CsvFile csv(o.c, "decay.csv");
    std::fprintf(csv.f, "rho,w_l2,w_h2,iterations\n");
    for (const calkit_decay_row& r : rows)
        std::fprintf(csv.f, "%.17g,%.17g,%.17g,%d\n", r.rho, r.w_l2, r.w_h2, r.iterations);
    csv.close();

    man.parameters = json{{"grid", grid_json(g.get())},
                          {"xi", {xi[0], xi[1], xi[2]}},
                          {"rho_list", rhos}};
    man.results = json{{"slope_l2", slope_l2},
                       {"slope_h2", slope_h2},
                       {"exact_zero", exact_zero != 0}};
    man.add_output(o.c, "decay.csv");
    man.write(o.c);
    return 0;
}

struct ReconstructOpts {
    Common c;
    FieldSpec qa{"gaussian_bump", "1.0,0.4", ""};
    FieldSpec qb{"zero", "", ""};
    int xi_max = 1;
    double rho = 4.0;
    std::string mode = "cgo";
};

int run_reconstruct(const ReconstructOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "reconstruct";
    if (o.mode != "cgo" && o.mode != "born")
        throw UsageFail("mode must be 'cgo' or 'born'");
    Ptr<calkit_grid> g = make_grid(o.c, o.rho);
    Ptr<calkit_field> qa = resolve_field(o.qa, g.get(), "qa", man.inputs);
    Ptr<calkit_field> qb = resolve_field(o.qb, g.get(), "qb", man.inputs);
    Ptr<calkit_dnmap> la(
        check_handle(calkit_dn_map(qa.get(), "schrodinger"), "boundary operator of qa"));
    Ptr<calkit_dnmap> lb(
        check_handle(calkit_dn_map(qb.get(), "schrodinger"), "boundary operator of qb"));
    Ptr<calkit_recon> rec(check_handle(
        calkit_reconstruct(la.get(), lb.get(), qa.get(), qb.get(), o.xi_max, o.rho,
                           o.mode == "born" ? 1 : 0),
        "reconstructing"));

    check(calkit_recon_write_csv(rec.get(), out_path(o.c, "recon_samples.csv").c_str()),
          "writing samples");
    Ptr<calkit_field> qr(check_handle(calkit_recon_field(rec.get()), "extracting q_rec"));
    check(calkit_field_dump(qr.get(), out_path(o.c, "recon_field.field").c_str()),
          "writing the reconstructed field");

    json failed = json::array();
    for (int i = 0; i < calkit_recon_failed_count(rec.get()); ++i) {
        int k[3];
        check(calkit_recon_failed(rec.get(), i, k), "reading failed lattice points");
        failed.push_back({k[0], k[1], k[2]});
    }
    man.parameters = json{{"grid", grid_json(g.get())},
                          {"xi_max", o.xi_max},
                          {"rho", o.rho},
                          {"mode", o.mode}};
    man.results = json{{"samples", calkit_recon_sample_count(rec.get())},
                       {"failed", failed},
                       {"rel_error", calkit_recon_rel_error(rec.get())},
                       {"truncation_error", calkit_recon_truncation_error(rec.get())}};
    man.add_output(o.c, "recon_samples.csv");
    man.add_output(o.c, "recon_field.field");
    man.write(o.c);
    return 0;
}

struct ShadowOpts {
    Common c;
    FieldSpec q1{"gaussian_bump", "1.0,0.4", ""};
    FieldSpec q2{"zero", "", ""};
    std::string xi = "3.141592653589793,0,0";
    std::string rho_list = "4,8";
    std::string eta;
    double eps = 0.25;
};

int run_shadow(const ShadowOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "shadow";
    double xi[3];
    parse_triple(o.xi, "xi", xi);
    const std::vector<double> rhos = parse_list(o.rho_list, "rho_list");
    if (rhos.empty()) throw UsageFail("rho_list is empty");
    Ptr<calkit_grid> g = make_grid(o.c, rhos.back());
    Ptr<calkit_field> q1 = resolve_field(o.q1, g.get(), "q1", man.inputs);
    Ptr<calkit_field> q2 = resolve_field(o.q2, g.get(), "q2", man.inputs);

    double eta[3];
    if (o.eta.empty()) {
        // Default to the frame's own growth direction, which illuminates
        // the face family the estimate is written for.
        check(calkit_frame(xi, rhos.front(), eta, nullptr), "completing the frame");
    } else {
        parse_triple(o.eta, "eta", eta);
    }

    CsvFile csv(o.c, "shadow.csv");
    std::fprintf(csv.f,
                 "rho,re_u,im_u,re_v,im_v,re_full,im_full,bound,u1_weighted,"
                 "w2_trace_l2\n");
    for (double rho : rhos) {
        calkit_shadow_report rep;
        check(calkit_shadow_term(q1.get(), q2.get(), xi, rho, eta, o.eps, &rep),
              "evaluating the shadow split");
        std::fprintf(csv.f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                     rho, rep.value_u[0], rep.value_u[1], rep.value_v[0], rep.value_v[1],
                     rep.value_full[0], rep.value_full[1], rep.bound, rep.u1_weighted,
                     rep.w2_trace_l2);
    }
    csv.close();

    man.parameters = json{{"grid", grid_json(g.get())},
                          {"xi", {xi[0], xi[1], xi[2]}},
                          {"rho_list", rhos},
                          {"eta", {eta[0], eta[1], eta[2]}},
                          {"eps", o.eps}};
    man.add_output(o.c, "shadow.csv");
    man.write(o.c);
    return 0;
}

struct CarlemanOpts {
    Common c;
    FieldSpec q{"gaussian_bump", "1.0,0.4", ""};
    std::string eta1 = "1,0,0";
    int samples = 20;
    double rho = std::numeric_limits<double>::quiet_NaN();
};

int run_carleman(const CarlemanOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "carleman";
    double eta1[3];
    parse_triple(o.eta1, "eta1", eta1);
    Ptr<calkit_grid> g = make_grid(o.c);
    Ptr<calkit_field> q = resolve_field(o.q, g.get(), "potential", man.inputs);
    man.parameters = json{{"grid", grid_json(g.get())},
                          {"eta1", {eta1[0], eta1[1], eta1[2]}},
                          {"samples", o.samples},
                          {"seed", o.c.seed}};

    int exit_code = 0;
    if (std::isnan(o.rho)) {
        // Calibration mode: search the smallest constant certifying the
        // whole corpus one unit above its own threshold.
        Ptr<calkit_calibration> cal(
            check_handle(calkit_calibrate(q.get(), eta1, o.samples, o.c.seed),
                         "calibrating the constant"));
        check(calkit_calibration_write_csv(cal.get(), out_path(o.c, "carleman.csv").c_str()),
              "writing the report");
        man.parameters["mode"] = "calibrate";
        man.results = json{{"constant", calkit_calibration_constant(cal.get())},
                           {"rho1", calkit_calibration_rho1(cal.get())},
                           {"rho2", calkit_calibration_rho2(cal.get())},
                           {"rho_used", calkit_calibration_rho_used(cal.get())},
                           {"worst_margin", calkit_calibration_worst_margin(cal.get())},
                           {"violations", 0}};
    } else {
        // Evaluation mode: run the frozen-constant estimate on the corpus at
        // the requested rho, below the threshold if the caller insists.
        CsvFile csv(o.c, "carleman.csv");
        std::fprintf(csv.f, "id,rho,lhs,rhs,margin,pass\n");
        double rho2 = 0.0, constant = 0.0, worst = 0.0;
        int violations = 0;
        for (int i = 0; i < o.samples; ++i) {
            Ptr<calkit_field> w(
                check_handle(calkit_field_random_zero_trace(g.get(), o.c.seed, i),
                             "drawing the corpus"));
            calkit_carleman_sides sides;
            check(calkit_carleman_estimate(w.get(), q.get(), o.rho, eta1, &sides),
                  "evaluating the estimate");
            rho2 = sides.rho2;
            constant = sides.constant;
            const double margin =
                sides.rhs > 0.0
                    ? sides.lhs / sides.rhs
                    : (sides.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            worst = std::max(worst, margin);
            violations += sides.holds ? 0 : 1;
            std::fprintf(csv.f, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", i, o.rho, sides.lhs,
                         sides.rhs, margin, sides.holds ? 1 : 0);
        }
        csv.close();
        man.parameters["mode"] = "evaluate";
        man.parameters["rho"] = o.rho;
        man.results = json{{"constant", constant},
                           {"rho2", rho2},
                           {"worst_margin", worst},
                           {"violations", violations}};
        if (o.rho < rho2) {
            man.warning = "rho below the certification threshold rho2; the "
                          "inequality is unproven in this range";
            exit_code = 2;
        }
        if (violations > 0) exit_code = 2;
    }
    man.add_output(o.c, "carleman.csv");
    man.write(o.c);
    return exit_code;
}

struct PoincareOpts {
    Common c;
    std::string eta1 = "1,0,0";
    int samples = 20;
};

int run_poincare(const PoincareOpts& o) {
    prepare_out(o.c);
    Manifest man;
    man.command = "poincare";
    double eta1[3];
    parse_triple(o.eta1, "eta1", eta1);
    Ptr<calkit_grid> g = make_grid(o.c);

    CsvFile csv(o.c, "poincare.csv");
    std::fprintf(csv.f, "id,lhs,rhs,ratio,pass\n");
    double worst = 0.0;
    int violations = 0;
    for (int i = 0; i < o.samples; ++i) {
        Ptr<calkit_field> w(check_handle(calkit_field_random_zero_trace(g.get(), o.c.seed, i),
                                         "drawing the corpus"));
        double lhs = 0.0, rhs = 0.0;
        check(calkit_poincare(w.get(), eta1, &lhs, &rhs), "evaluating the inequality");
        const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
        const bool pass = lhs <= rhs;
        worst = std::max(worst, ratio);
        violations += pass ? 0 : 1;
        std::fprintf(csv.f, "%d,%.17g,%.17g,%.17g,%d\n", i, lhs, rhs, ratio, pass ? 1 : 0);
    }
    csv.close();

    man.parameters = json{{"grid", grid_json(g.get())},
                          {"eta1", {eta1[0], eta1[1], eta1[2]}},
                          {"samples", o.samples},
                          {"seed", o.c.seed}};
    man.results = json{{"worst_ratio", worst}, {"violations", violations}};
    man.add_output(o.c, "poincare.csv");
    man.write(o.c);
    return violations > 0 ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the inverse conductivity problem"};
    app.require_subcommand(1);
    app.set_version_flag("--version", calkit_version());

    int exit_code = 0;

    ForwardOpts fo;
    CLI::App* fwd = app.add_subcommand("forward", "Dirichlet solve for a coefficient");
    add_common(fwd, fo.c);
    fwd->add_option("--kind", fo.kind, "conductivity or schrodinger")->capture_default_str();
    add_field_spec(fwd, "coefficient", fo.coeff, "coefficient");
    fwd->add_option("--boundary-preset", fo.boundary_preset, "boundary data preset")
        ->capture_default_str();
    fwd->add_option("--boundary-params", fo.boundary_params, "boundary preset parameters");
    fwd->callback([&] { exit_code = run_forward(fo); });

    DnmapOpts dno;
    CLI::App* dnm = app.add_subcommand("dnmap", "Assemble and export a boundary operator");
    add_common(dnm, dno.c);
    dnm->add_option("--kind", dno.kind, "conductivity or schrodinger")->capture_default_str();
    add_field_spec(dnm, "coefficient", dno.coeff, "coefficient");
    dnm->callback([&] { exit_code = run_dnmap(dno); });

    LiouvilleOpts lo;
    CLI::App* lio = app.add_subcommand(
        "liouville", "Potential induced by a conductivity, optionally with the map transform");
    add_common(lio, lo.c);
    add_field_spec(lio, "conductivity", lo.a, "conductivity");
    lio->add_flag("--compare", lo.compare,
                  "also assemble both boundary operators and report the transform defect");
    lio->callback([&] { exit_code = run_liouville(lo); });

    CgoOpts co;
    CLI::App* cgo = app.add_subcommand("cgo", "Build one complex exponential solution");
    add_common(cgo, co.c);
    add_field_spec(cgo, "potential", co.q, "potential");
    cgo->add_option("--xi", co.xi, "frequency, comma triple")->capture_default_str();
    cgo->add_option("--rho", co.rho, "phase modulus")->capture_default_str();
    cgo->add_option("--kind", co.kind, "1 grows along eta1, 2 decays")->capture_default_str();
    cgo->callback([&] { exit_code = run_cgo(co); });

    DecayOpts deo;
    CLI::App* dec = app.add_subcommand("decay", "Remainder decay across rho");
    add_common(dec, deo.c);
    add_field_spec(dec, "potential", deo.q, "potential");
    dec->add_option("--xi", deo.xi, "frequency, comma triple")->capture_default_str();
    dec->add_option("--rho-list", deo.rho_list, "strictly increasing comma list")
        ->capture_default_str();
    dec->callback([&] { exit_code = run_decay(deo); });

    ReconstructOpts ro;
    CLI::App* rec =
        app.add_subcommand("reconstruct", "Recover qa - qb from boundary data");
    add_common(rec, ro.c);
    add_field_spec(rec, "qa", ro.qa, "first potential");
    add_field_spec(rec, "qb", ro.qb, "second potential");
    rec->add_option("--xi-max", ro.xi_max, "lattice radius in units of pi/L")
        ->capture_default_str();
    rec->add_option("--rho", ro.rho, "probe modulus")->capture_default_str();
    rec->add_option("--mode", ro.mode, "cgo or born probes")->capture_default_str();
    rec->callback([&] { exit_code = run_reconstruct(ro); });

    ShadowOpts so;
    CLI::App* sha = app.add_subcommand("shadow", "Illuminated/shadowed flux split");
    add_common(sha, so.c);
    add_field_spec(sha, "q1", so.q1, "first potential");
    add_field_spec(sha, "q2", so.q2, "second potential");
    sha->add_option("--xi", so.xi, "frequency, comma triple")->capture_default_str();
    sha->add_option("--rho-list", so.rho_list, "comma list of moduli")->capture_default_str();
    sha->add_option("--eta", so.eta, "illumination direction; default: frame growth direction");
    sha->add_option("--eps", so.eps, "illumination margin in (0, 1/2)")->capture_default_str();
    sha->callback([&] { exit_code = run_shadow(so); });

    CarlemanOpts cao;
    CLI::App* car = app.add_subcommand(
        "carleman", "Weighted estimate on a seeded corpus: calibrate or evaluate");
    add_common(car, cao.c);
    add_field_spec(car, "potential", cao.q, "potential");
    car->add_option("--eta1", cao.eta1, "weight direction, comma triple")
        ->capture_default_str();
    car->add_option("--samples", cao.samples, "corpus size")->capture_default_str();
    car->add_option("--rho", cao.rho,
                    "evaluate at this rho with the frozen constant; omit to calibrate");
    car->callback([&] { exit_code = run_carleman(cao); });

    PoincareOpts po;
    CLI::App* poi =
        app.add_subcommand("poincare", "Directional inequality on a seeded corpus");
    add_common(poi, po.c);
    poi->add_option("--eta1", po.eta1, "direction, comma triple")->capture_default_str();
    poi->add_option("--samples", po.samples, "corpus size")->capture_default_str();
    poi->callback([&] { exit_code = run_poincare(po); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::fputs(app.help().c_str(), stderr);
        return 1;
    } catch (const UsageFail& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const NumericalFail& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
