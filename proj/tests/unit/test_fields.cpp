#include <doctest.h>

#include <cmath>

#include "fields.hpp"
#include "presets.hpp"

using namespace calkit;

TEST_CASE("trapezoid norms match closed forms") {
    auto g = make_grid(2.0, 1.0, 17, 16);

    // Constant field: ||c||_L2 = |c| * (2L)^{3/2}.
    ScalarField c = make_field_preset(g, "constant", {3.0});
    CHECK(c.norm_l2() == doctest::Approx(3.0 * std::sqrt(8.0)).epsilon(1e-13));

    // Constant on the surface: |c| * sqrt(24 L^2).
    BoundaryField cb = make_boundary_preset(g, "constant", {2.0});
    CHECK(cb.norm_l2() == doctest::Approx(2.0 * std::sqrt(24.0)).epsilon(1e-13));
}

TEST_CASE("trilinear cube interpolation reproduces trilinear functions") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    auto f = field_from(g, [](const Vec3& x) {
        return cplx(2.0 + x[0] - 3.0 * x[1] * x[2] + x[0] * x[1] * x[2], -x[2]);
    });
    const Vec3 pts[] = {{0.1, -0.33, 0.77}, {-0.99, 0.5, -0.5}, {0, 0, 0}};
    for (const Vec3& x : pts) {
        const cplx want(2.0 + x[0] - 3.0 * x[1] * x[2] + x[0] * x[1] * x[2], -x[2]);
        CHECK(std::abs(interp_cube(f, x) - want) < 1e-13);
    }
    // Outside the cube the zero extension applies.
    CHECK(interp_cube(f, Vec3(1.5, 0, 0)) == cplx(0.0, 0.0));
}

TEST_CASE("periodic box interpolation wraps around") {
    auto g = make_grid(2.0, 1.0, 9, 8);
    QField f(g);
    // Single-mode field e^{i pi y1 / R}: periodic over [-R, R).
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            for (int k = 0; k < 8; ++k)
                f.values[f.flat(i, j, k)] =
                    std::exp(cplx(0, M_PI * f.coord(i) / g->R));
    // At a node, interpolation is exact; wrapped coordinates hit the same node.
    const cplx v0 = f.values[f.flat(3, 2, 1)];
    CHECK(std::abs(interp_box(f, Vec3(f.coord(3), f.coord(2), f.coord(1))) - v0) <
          1e-14);
    CHECK(std::abs(interp_box(f, Vec3(f.coord(3) + 4.0, f.coord(2) - 4.0,
                                      f.coord(1))) -
                   v0) < 1e-13);
}

TEST_CASE("field hash is deterministic and content sensitive") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    ScalarField a = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
    ScalarField b = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
    ScalarField c = make_field_preset(g, "gaussian_bump", {1.0, 0.31});
    CHECK(field_hash(a) == field_hash(b));
    CHECK(field_hash(a) != field_hash(c));
    CHECK(field_hash(a).substr(0, 6) == "fnv1a:");
}

TEST_CASE("preset parameter validation") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    CHECK_THROWS_AS(make_field_preset(g, "nope", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_field_preset(g, "constant", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_field_preset(g, "gaussian_bump", {1.0, -0.1}),
                    std::invalid_argument);

    ScalarField bump = make_field_preset(g, "gaussian_bump", {2.5, 0.3});
    CHECK(bump.at(4, 4, 4).real() == doctest::Approx(2.5).epsilon(1e-15));

    // one_plus_cos2_bump is exactly 1 on the boundary.
    ScalarField a = make_field_preset(g, "one_plus_cos2_bump", {0.8});
    for (const auto& bn : g->boundary)
        CHECK(a.values[bn.flat].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.at(4, 4, 4).real() == doctest::Approx(1.8).epsilon(1e-14));
}

TEST_CASE("random zero-trace corpus functions") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    Lcg64 rng(42);
    ScalarField w = random_zero_trace(g, rng);

    // Vanishes on the boundary (window endpoints are exact at L = 1).
    for (const auto& b : g->boundary)
        CHECK(std::abs(w.values[b.flat]) < 1e-300);

    // Not identically zero inside.
    CHECK(w.norm_l2() > 1e-6);

    // Consumes exactly 15 draws, so corpora are reproducible by counting.
    Lcg64 a(7), b(7);
    (void)random_zero_trace(g, a);
    for (int i = 0; i < 15; ++i) b.next_u64();
    CHECK(a.next_u64() == b.next_u64());

    // Same seed, same field; different seed, different field.
    Lcg64 r1(5), r2(5), r3(6);
    ScalarField f1 = random_zero_trace(g, r1);
    ScalarField f2 = random_zero_trace(g, r2);
    ScalarField f3 = random_zero_trace(g, r3);
    CHECK((f1.values - f2.values).norm() == 0.0);
    CHECK((f1.values - f3.values).norm() > 0.0);
}

TEST_CASE("grid compatibility checks") {
    auto g1 = make_grid(2.0, 1.0, 9, 16);
    auto g2 = make_grid(2.0, 1.0, 9, 16);
    auto g3 = make_grid(2.0, 1.0, 11, 16);
    CHECK(grids_compatible(*g1, *g2));
    CHECK(!grids_compatible(*g1, *g3));
}
