#include "io.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <string>

#include "errors.hpp"

namespace calkit {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f)
        throw Error(errc::io, "cannot open '" + path + "' for " +
                                  (mode[0] == 'r' ? "reading" : "writing"));
    return f;
}

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
    throw Error(errc::io, path + ":" + std::to_string(line) + ": " + what);
}

// One text line, stripped of the trailing newline.  false on EOF.
bool read_line(std::FILE* f, std::string& out) {
    out.clear();
    int c;
    while ((c = std::fgetc(f)) != EOF) {
        if (c == '\n') return true;
        out.push_back(static_cast<char>(c));
    }
    return !out.empty();
}

struct Header {
    int m = 0;
    double L = 0.0;
};

Header parse_header(const std::string& path, const std::string& line) {
    Header h;
    int consumed = 0;
    if (std::sscanf(line.c_str(), "CALFIELD v1 m=%d L=%lf%n", &h.m, &h.L, &consumed) != 2 ||
        consumed != static_cast<int>(line.size()))
        parse_fail(path, 1, "expected header 'CALFIELD v1 m=<m> L=<L>', got '" + line + "'");
    if (h.m < 3 || h.m % 2 == 0)
        parse_fail(path, 1,
                   "invalid node count m=" + std::to_string(h.m) + " (odd m >= 3 required)");
    if (!(h.L > 0.0)) parse_fail(path, 1, "invalid half-width L");
    return h;
}

ScalarField load_body(const std::string& path, std::FILE* f, const GridPtr& grid) {
    ScalarField out(grid);
    const int m = grid->m;
    std::string line;
    long lineno = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                ++lineno;
                if (!read_line(f, line))
                    parse_fail(path, lineno,
                               "truncated: expected node " + std::to_string(i) + " " +
                                   std::to_string(j) + " " + std::to_string(k));
                int fi, fj, fk, consumed = 0;
                double re, im;
                if (std::sscanf(line.c_str(), "%d %d %d %lf %lf%n", &fi, &fj, &fk, &re, &im,
                                &consumed) != 5 ||
                    consumed != static_cast<int>(line.size()))
                    parse_fail(path, lineno, "expected 'i j k re im', got '" + line + "'");
                if (fi != i || fj != j || fk != k)
                    parse_fail(path, lineno, "node out of row-major order");
                out.values[grid->flat(i, j, k)] = cplx(re, im);
            }
    if (read_line(f, line)) parse_fail(path, lineno + 1, "trailing content after last node");
    return out;
}

} // namespace

void dump_field(const ScalarField& f, const std::string& path) {
    if (!f.grid) throw Error(errc::bad_argument, "dump_field: field has no grid");
    const Grid& g = *f.grid;
    FilePtr out = open_or_throw(path, "w");
    std::fprintf(out.get(), "CALFIELD v1 m=%d L=%.17g\n", g.m, g.L);
    for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.m; ++j)
            for (int k = 0; k < g.m; ++k) {
                const cplx v = f.values[g.flat(i, j, k)];
                std::fprintf(out.get(), "%d %d %d %.17g %.17g\n", i, j, k, v.real(), v.imag());
            }
    if (std::ferror(out.get())) throw Error(errc::io, "write failed on '" + path + "'");
}

ScalarField load_field(const std::string& path) {
    FilePtr in = open_or_throw(path, "r");
    std::string line;
    if (!read_line(in.get(), line)) parse_fail(path, 1, "empty file");
    const Header h = parse_header(path, line);
    GridPtr grid;
    try {
        grid = make_grid(2.0 * h.L, h.L, h.m, 32);
    } catch (const std::exception& e) {
        parse_fail(path, 1, std::string("header does not describe a valid grid: ") + e.what());
    }
    return load_body(path, in.get(), grid);
}

ScalarField load_field(const std::string& path, const GridPtr& grid) {
    if (!grid) throw Error(errc::bad_argument, "load_field: null grid");
    FilePtr in = open_or_throw(path, "r");
    std::string line;
    if (!read_line(in.get(), line)) parse_fail(path, 1, "empty file");
    const Header h = parse_header(path, line);
    if (h.m != grid->m || h.L != grid->L)
        throw Error(errc::dimension, path + ": declares m=" + std::to_string(h.m) +
                                         " L=" + std::to_string(h.L) +
                                         ", expected m=" + std::to_string(grid->m) +
                                         " L=" + std::to_string(grid->L));
    return load_body(path, in.get(), grid);
}

void write_dn_csv(const DnMap& dn, const std::string& path) {
    if (!dn.grid) throw Error(errc::bad_argument, "write_dn_csv: map has no grid");
    const int n = dn.size();
    FilePtr out = open_or_throw(path, "w");
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const cplx v = dn.entry(r, c);
            std::fprintf(out.get(), c == 0 ? "%.17g,%.17g" : ",%.17g,%.17g", v.real(),
                         v.imag());
        }
        std::fputc('\n', out.get());
    }
    if (std::ferror(out.get())) throw Error(errc::io, "write failed on '" + path + "'");
    out.reset();

    FilePtr side = open_or_throw(path + ".json", "w");
    std::fprintf(side.get(),
                 "{\"format\":\"dn-csv v1, row-major, re,im cell pairs\",\"kind\":\"%s\","
                 "\"rows\":%d,\"coefficient_hash\":\"%s\",\"grid\":%s}\n",
                 dn.kind.c_str(), n, dn.coefficient_hash.c_str(), dn.grid->manifest().c_str());
    if (std::ferror(side.get())) throw Error(errc::io, "write failed on '" + path + ".json'");
}

void write_recon_csv(const Reconstruction& rec, const std::string& path) {
    if (!rec.q_rec.grid) throw Error(errc::bad_argument, "write_recon_csv: empty reconstruction");
    const int xm = rec.report.xi_max;
    const double step = M_PI / rec.q_rec.grid->L;
    FilePtr out = open_or_throw(path, "w");
    std::fprintf(out.get(), "xi1,xi2,xi3,re_qhat,im_qhat,rho,residual\n");
    long idx = 0;
    for (int k1 = -xm; k1 <= xm; ++k1)
        for (int k2 = -xm; k2 <= xm; ++k2)
            for (int k3 = -xm; k3 <= xm; ++k3, ++idx) {
                const cplx s = rec.samples[idx];
                std::fprintf(out.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                             step * k1, step * k2, step * k3, s.real(), s.imag(),
                             rec.report.rho, std::abs(s - rec.exact[idx]));
            }
    if (std::ferror(out.get())) throw Error(errc::io, "write failed on '" + path + "'");
}

void write_calibration_csv(const CalibrationReport& rep, const std::string& path) {
    FilePtr out = open_or_throw(path, "w");
    std::fprintf(out.get(), "id,rho,lhs,rhs,margin,pass\n");
    for (const CalibrationSample& row : rep.table)
        std::fprintf(out.get(), "%d,%.17g,%.17g,%.17g,%.17g,%d\n", row.id, rep.rho_used,
                     row.lhs, row.rhs, row.margin, row.pass ? 1 : 0);
    if (std::ferror(out.get())) throw Error(errc::io, "write failed on '" + path + "'");
}

std::string file_hash(const std::string& path) {
    FilePtr in = open_or_throw(path, "rb");
    unsigned long long h = 1469598103934665603ull;
    int c;
    while ((c = std::fgetc(in.get())) != EOF) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", h);
    return std::string(buf);
}

} // namespace calkit
