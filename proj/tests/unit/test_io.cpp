#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "forward.hpp"
#include "io.hpp"
#include "presets.hpp"
#include "rng.hpp"

using namespace calkit;

namespace {

std::string temp_path(const char* tag) {
    return std::string("io_test_") + tag + ".tmp";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

ScalarField random_field(const GridPtr& g, unsigned long long seed) {
    ScalarField f(g);
    Lcg64 rng(seed);
    for (Eigen::Index t = 0; t < f.values.size(); ++t)
        f.values[t] = cplx(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
    return f;
}

} // namespace

TEST_CASE("field dump round-trips bit-exactly and deterministically") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    ScalarField f = random_field(g, 31337);
    const std::string path = temp_path("roundtrip");

    dump_field(f, path);
    ScalarField back = load_field(path, g);
    for (Eigen::Index t = 0; t < f.values.size(); ++t) CHECK(back.values[t] == f.values[t]);

    // Standalone load rebuilds an equivalent cube geometry from the header.
    ScalarField solo = load_field(path);
    CHECK(solo.grid->m == 9);
    CHECK(solo.grid->L == 1.0);
    CHECK((solo.values - f.values).norm() == 0.0);

    const std::string first = slurp(path);
    dump_field(f, path);
    CHECK(slurp(path) == first);
    std::remove(path.c_str());
}

TEST_CASE("field loader rejects malformed input with the offending line") {
    auto g = make_grid(2.0, 1.0, 5, 16);
    ScalarField f = random_field(g, 7);
    const std::string path = temp_path("malformed");

    dump_field(f, path);
    const std::string good = slurp(path);

    // Truncation: drop the last line.
    spill(path, good.substr(0, good.find_last_of('\n', good.size() - 2) + 1));
    CHECK_THROWS_WITH_AS((void)load_field(path), doctest::Contains(":126:"), Error);

    // Garbage header.
    spill(path, "CALFIELD v2 m=5 L=1\n" + good.substr(good.find('\n') + 1));
    CHECK_THROWS_WITH_AS((void)load_field(path), doctest::Contains(":1:"), Error);

    // A corrupt node line, out of row-major order.
    std::string swapped = good;
    swapped.replace(swapped.find("\n0 0 1 "), 7, "\n0 1 0 ");
    spill(path, swapped);
    CHECK_THROWS_WITH_AS((void)load_field(path), doctest::Contains("order"), Error);

    // Trailing content.
    spill(path, good + "extra\n");
    CHECK_THROWS_AS((void)load_field(path), Error);

    // Grid mismatch against an expected geometry.
    spill(path, good);
    auto g2 = make_grid(2.0, 1.0, 9, 16);
    try {
        (void)load_field(path, g2);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::dimension);
    }

    std::remove(path.c_str());
    CHECK_THROWS_AS((void)load_field("definitely_missing.tmp"), Error);
}

TEST_CASE("dn matrix export writes csv plus a descriptive sidecar") {
    auto g = make_grid(2.0, 1.0, 5, 16);
    DnMap dn = dn_map_schrodinger(make_field_preset(g, "gaussian_bump", {1.0, 0.4}));
    const std::string path = temp_path("dn.csv");

    write_dn_csv(dn, path);

    const std::string csv = slurp(path);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == dn.size());

    double re = 0.0, im = 0.0;
    CHECK(std::sscanf(csv.c_str(), "%lf,%lf", &re, &im) == 2);
    CHECK(re == dn.entry(0, 0).real());
    CHECK(im == dn.entry(0, 0).imag());

    const std::string side = slurp(path + ".json");
    CHECK(side.find("\"kind\":\"schrodinger\"") != std::string::npos);
    CHECK(side.find(dn.coefficient_hash) != std::string::npos);
    CHECK(side.find("\"rows\":98") != std::string::npos);

    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}

TEST_CASE("file hash distinguishes content and matches across rereads") {
    const std::string a = temp_path("hash_a");
    const std::string b = temp_path("hash_b");
    spill(a, "same content\n");
    spill(b, "same content\n");
    CHECK(file_hash(a) == file_hash(b));
    CHECK(file_hash(a).substr(0, 6) == "fnv1a:");
    spill(b, "other content\n");
    CHECK(file_hash(a) != file_hash(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
    CHECK_THROWS_AS((void)file_hash("definitely_missing.tmp"), Error);
}
