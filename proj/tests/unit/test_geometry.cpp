#include <doctest.h>

#include <cmath>
#include <set>

#include "geometry.hpp"

using namespace calkit;

TEST_CASE("grid construction and quadrature weights") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    CHECK(g->h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g->n_nodes() == 729);

    // Deduped boundary count: 6m^2 - 12m + 8.
    CHECK(g->n_boundary() == 6 * 81 - 12 * 9 + 8);

    // Surface weights sum to the exact area 6*(2L)^2.
    double sw = 0.0;
    for (const auto& b : g->boundary) sw += b.weight;
    CHECK(sw == doctest::Approx(24.0).epsilon(1e-13));

    // Volume weights sum to the exact volume (2L)^3.
    double vw = 0.0;
    for (double w : g->volume_weight) vw += w;
    CHECK(vw == doctest::Approx(8.0).epsilon(1e-13));

    // Each boundary node appears exactly once.
    std::set<int> flats;
    for (const auto& b : g->boundary) flats.insert(b.flat);
    CHECK(static_cast<int>(flats.size()) == g->n_boundary());

    // Normals are unit coordinate vectors pointing outward.
    for (const auto& b : g->boundary) {
        CHECK(b.normal.norm() == doctest::Approx(1.0).epsilon(1e-15));
        int axis = -1;
        for (int d = 0; d < 3; ++d)
            if (b.normal[d] != 0.0) axis = d;
        REQUIRE(axis >= 0);
        const int pos = b.ijk[axis];
        CHECK((pos == 0 || pos == g->m - 1));
        CHECK(b.normal[axis] == (pos == 0 ? -1.0 : 1.0));
    }

    // First entries follow the -x face with the lower free axis slowest.
    CHECK(g->boundary[0].ijk == std::array<int, 3>{0, 0, 0});
    CHECK(g->boundary[1].ijk == std::array<int, 3>{0, 0, 1});
    CHECK(g->boundary[9].ijk == std::array<int, 3>{0, 1, 0});
    CHECK(g->boundary[0].normal == Vec3(-1, 0, 0));

    // A face-interior node carries h^2; an edge node shared by two faces
    // carries 2 * h^2/2; a corner shared by three faces carries 3 * h^2/4.
    const double h2 = g->h * g->h;
    for (const auto& b : g->boundary) {
        int nface = 0;
        for (int d = 0; d < 3; ++d)
            if (b.ijk[d] == 0 || b.ijk[d] == g->m - 1) ++nface;
        const double expect =
            (nface == 1) ? h2 : (nface == 2 ? h2 : 0.75 * h2);
        CHECK(b.weight == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("grid argument validation") {
    CHECK_THROWS_AS(make_grid(1.0, 1.0, 9, 16), std::invalid_argument); // L >= R
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 8, 16), std::invalid_argument); // even m
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 1, 16), std::invalid_argument); // tiny m
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 9, 15), std::invalid_argument); // odd M
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 9, 4), std::invalid_argument);  // tiny M
    CHECK_THROWS_AS(make_grid(2.0, -1.0, 9, 16), std::invalid_argument);
}

TEST_CASE("orthonormal frame invariants and determinism") {
    const Vec3 cases[] = {
        {1, 0, 0}, {0, 1, 0},   {0, 0, 1},    {1, 1, 1},
        {3, -2, 5}, {-1, 4, 0.5}, {0.1, 0.1, -7}, {2, 2, 2},
    };
    for (const Vec3& xi : cases) {
        Vec3 e1, e2;
        orthonormal_frame(xi, e1, e2);
        CHECK(e1.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(e2.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(e1.dot(e2)) < 1e-14);
        CHECK(std::abs(e1.dot(xi)) < 1e-13 * std::max(1.0, xi.norm()));
        CHECK(std::abs(e2.dot(xi)) < 1e-13 * std::max(1.0, xi.norm()));
    }

    // The documented completion rule: cross with the axis of smallest |xi_d|,
    // lowest index on ties.  xi = e1 crosses with e2, giving eta1 = e3.
    Vec3 e1, e2;
    orthonormal_frame(Vec3(1, 0, 0), e1, e2);
    CHECK((e1 - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((e2 - Vec3(0, 1, 0)).norm() < 1e-15);

    // xi = 0 falls back to the same pair.
    orthonormal_frame(Vec3(0, 0, 0), e1, e2);
    CHECK((e1 - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((e2 - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("rotation moves the drift direction onto the first axis") {
    const Vec3 dirs[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, -1},
                         Vec3(1, 1, 1).normalized(), Vec3(-2, 3, 0.5).normalized()};
    for (const Vec3& eta : dirs) {
        Mat3 S = rotation_to_e1(eta);
        CHECK((S * S.transpose() - Mat3::Identity()).norm() < 1e-14);
        CHECK(S.determinant() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK((S * eta - Vec3(1, 0, 0)).norm() < 1e-14);
    }
    CHECK_THROWS_AS(rotation_to_e1(Vec3(2, 0, 0)), std::invalid_argument);
}

TEST_CASE("frame construction validates invariants") {
    Frame f = make_frame(Vec3(3, -1, 2), 8.0);
    CHECK(f.rho == 8.0);
    CHECK(std::abs(f.eta1.dot(f.eta2)) < 1e-14);
    CHECK_THROWS_AS(make_frame(Vec3(1, 0, 0), 0.0), std::invalid_argument);

    Frame bad = f;
    bad.eta2 = f.eta1; // not orthogonal
    CHECK_THROWS_AS(validate_frame(bad), std::invalid_argument);
}

TEST_CASE("face split partitions the boundary") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    const Vec3 eta(0, 0, 1);
    FaceSplit fs = face_split(*g, eta, 0.25);

    CHECK(fs.U.size() + fs.V.size() == static_cast<size_t>(g->n_boundary()));

    // With eta = e3 and eps = 1/4 only the +z face is illuminated; the
    // deduped +z entries exclude nodes owned by earlier faces.
    for (int b : fs.U) CHECK(g->boundary[b].normal.dot(eta) >= 0.5);
    for (int b : fs.V) CHECK(g->boundary[b].normal.dot(eta) < 0.5);

    // plus/minus cover the boundary, overlapping on tangential faces.
    for (int b : fs.plus) CHECK(g->boundary[b].normal.dot(eta) >= 0.0);
    for (int b : fs.minus) CHECK(g->boundary[b].normal.dot(eta) <= 0.0);
    CHECK(fs.plus.size() + fs.minus.size() >=
          static_cast<size_t>(g->n_boundary()));

    CHECK_THROWS_AS(face_split(*g, eta, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(face_split(*g, eta, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(face_split(*g, Vec3(0, 0, 2), 0.25), std::invalid_argument);
}
