#include <doctest.h>

#include <cmath>

#include "cgo.hpp"
#include "errors.hpp"
#include "presets.hpp"
#include "rng.hpp"

using namespace calkit;

namespace {

// One shifted basis function e^{i pi y1/2R} e^{i pi alpha.y/R}, unnormalized.
QField sample_mode(const GridPtr& g, int a1, int a2, int a3) {
    QField F(g);
    const double R = g->R;
    for (int i = 0; i < g->M; ++i)
        for (int j = 0; j < g->M; ++j)
            for (int k = 0; k < g->M; ++k) {
                const double y1 = F.coord(i), y2 = F.coord(j), y3 = F.coord(k);
                const double phase =
                    M_PI * (0.5 * y1 + a1 * y1 + a2 * y2 + a3 * y3) / R;
                F.values[F.flat(i, j, k)] = std::polar(1.0, phase);
            }
    return F;
}

QField random_box_field(const GridPtr& g, unsigned long long seed) {
    QField F(g);
    Lcg64 rng(seed);
    for (long t = 0; t < F.values.size(); ++t)
        F.values[t] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return F;
}

cplx hand_denominator(double R, double rho, int a1, int a2, int a3) {
    const double a1h = a1 + 0.5;
    return cplx(M_PI * M_PI / (R * R) * (a1h * a1h + a2 * a2 + a3 * a3) - rho * rho,
                -2.0 * M_PI * rho / R * a1h);
}

} // namespace

TEST_CASE("fourier lattice matches the hand denominator and keeps its floor") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    const Vec3 e1(1.0, 0.0, 0.0);
    FourierLattice lat = make_lattice(g, 4.0, e1);

    CHECK(lat.alpha_max == 7);

    // alpha = 0 by hand: pi^2/16 - 16 - 2 pi i.
    const cplx d0(M_PI * M_PI / 16.0 - 16.0, -2.0 * M_PI);
    CHECK(std::abs(lat.denominators[0] - d0) < 1e-12);

    // A bin with negative components maps through the signed frequencies.
    const int M = g->M;
    const long bin = (static_cast<long>(2) * M + (M - 1)) * M + 3; // alpha (2,-1,3)
    CHECK(std::abs(lat.denominators[bin] - hand_denominator(2.0, 4.0, 2, -1, 3)) < 1e-12);

    // Exhaustive floor over the retained lattice at M = 32.
    auto g32 = make_grid(2.0, 1.0, 9, 32);
    for (double rho : {4.0, 8.0}) {
        FourierLattice l = make_lattice(g32, rho, e1);
        const double bound = M_PI * rho / 2.0;
        CHECK(l.floor_bound() == doctest::Approx(bound).epsilon(1e-15));
        long kept = 0;
        double min_ad = 1e300;
        for (long t = 0; t < l.denominators.size(); ++t) {
            if (!l.retained[t]) continue;
            ++kept;
            min_ad = std::min(min_ad, std::abs(l.denominators[t]));
        }
        CHECK(kept == 31L * 31L * 31L); // per axis M-1 signed frequencies
        CHECK(min_ad >= bound * (1.0 - 1e-12));
        CHECK(l.min_abs_d == doctest::Approx(min_ad).epsilon(1e-15));
    }

    CHECK_THROWS_AS(make_lattice(g, 0.0, e1), Error);
    CHECK_THROWS_AS(make_lattice(g, 4.0, Vec3(1.0, 1.0, 0.0)), Error);
}

TEST_CASE("periodic solve inverts single modes and is linear") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    const Vec3 e1(1.0, 0.0, 0.0);

    QField zero(g);
    CHECK(periodic_solve(zero, 4.0, e1).norm_l2() == 0.0);

    // For F equal to one basis function, z is F over its denominator.
    for (auto [a1, a2, a3] : {std::array<int, 3>{0, 0, 0}, std::array<int, 3>{2, -1, 3}}) {
        QField F = sample_mode(g, a1, a2, a3);
        QField z = periodic_solve(F, 4.0, e1);
        const cplx d = hand_denominator(2.0, 4.0, a1, a2, a3);
        double worst = 0.0;
        for (long t = 0; t < z.values.size(); ++t)
            worst = std::max(worst, std::abs(z.values[t] - F.values[t] / d));
        CHECK(worst < 1e-12);
    }

    QField F1 = random_box_field(g, 11);
    QField F2 = random_box_field(g, 22);
    QField sum(g);
    sum.values = F1.values + F2.values;
    QField z1 = periodic_solve(F1, 4.0, e1);
    QField z2 = periodic_solve(F2, 4.0, e1);
    QField zs = periodic_solve(sum, 4.0, e1);
    QField gap(g);
    gap.values = zs.values - z1.values - z2.values;
    CHECK(gap.norm_l2() <= 1e-12 * (z1.norm_l2() + z2.norm_l2()));
}

TEST_CASE("periodic solve meets the residual and norm contracts on random data") {
    auto g = make_grid(2.0, 1.0, 9, 32);
    const Vec3 eta1 = Vec3(1.0, 2.0, 2.0) / 3.0;
    for (double rho : {4.0, 8.0}) {
        for (unsigned long long seed = 0; seed < 10; ++seed) {
            QField F = random_box_field(g, 1000 * seed + 7);
            QField z = periodic_solve(F, rho, eta1);
            CHECK(spectral_residual(F, z, rho, eta1) <= 1e-10);
            CHECK(z.norm_l2() * M_PI * rho / g->R <= F.norm_l2() * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("periodic solve rejects bad arguments") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    QField F = random_box_field(g, 3);
    const Vec3 e1(1.0, 0.0, 0.0);

    CHECK_THROWS_AS(periodic_solve(F, -1.0, e1), Error);
    CHECK_THROWS_AS(periodic_solve(F, 4.0, Vec3(0.5, 0.0, 0.0)), Error);

    F.values[10] = cplx(std::nan(""), 0.0);
    try {
        periodic_solve(F, 4.0, e1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_argument);
    }
}

TEST_CASE("cgo with zero potential needs no remainder") {
    auto g = make_grid(2.0, 1.0, 9, 16);
    ScalarField q = make_field_preset(g, "zero", {});

    // xi = 0, type1: the driving term vanishes and the first sweep already
    // lands on w = 0; v is the pure exponential.
    Frame fr = make_frame(Vec3::Zero(), 4.0);
    CgoSolution sol = build_cgo(q, fr, CgoKind::type1);
    CHECK(sol.iterations == 1);
    CHECK(sol.w_l2 == 0.0);
    double worst = 0.0;
    for (int i = 0; i < g->m; ++i)
        for (int j = 0; j < g->m; ++j)
            for (int k = 0; k < g->m; ++k) {
                const Vec3 x = g->node(i, j, k);
                const cplx ref = std::exp(fr.rho * fr.eta1.dot(x)) *
                                 std::polar(1.0, fr.rho * fr.eta2.dot(x));
                worst = std::max(worst,
                                 std::abs(sol.v.at(i, j, k) - ref) / std::abs(ref));
            }
    CHECK(worst < 1e-12);

    // type2 never sees xi; its remainder vanishes for any frame.
    Frame fr2 = make_frame(Vec3(M_PI, 0.0, 0.0), 4.0);
    CgoSolution sol2 = build_cgo(q, fr2, CgoKind::type2);
    CHECK(sol2.iterations == 1);
    CHECK(sol2.w_l2 == 0.0);
    worst = 0.0;
    for (int i = 0; i < g->m; ++i)
        for (int j = 0; j < g->m; ++j)
            for (int k = 0; k < g->m; ++k) {
                const Vec3 x = g->node(i, j, k);
                const cplx ref = std::exp(-fr2.rho * fr2.eta1.dot(x)) *
                                 std::polar(1.0, -fr2.rho * fr2.eta2.dot(x));
                worst = std::max(worst,
                                 std::abs(sol2.v.at(i, j, k) - ref) / std::abs(ref));
            }
    CHECK(worst < 1e-12);

    // type1 with xi != 0 needs one corrective sweep (the oscillation is not
    // harmonic), after which the iteration is stationary.
    CgoSolution sol3 = build_cgo(q, fr2, CgoKind::type1);
    CHECK(sol3.iterations == 2);
    CHECK(sol3.step_norms[1] <= 1e-10);
}

TEST_CASE("cgo finite-difference defect shrinks with the cube grid") {
    ScalarField q9 = make_field_preset(make_grid(2.0, 1.0, 9, 16), "zero", {});
    ScalarField q17 = make_field_preset(make_grid(2.0, 1.0, 17, 16), "zero", {});
    Frame fr = make_frame(Vec3::Zero(), 2.0);
    const double r9 = build_cgo(q9, fr, CgoKind::type1).residual;
    const double r17 = build_cgo(q17, fr, CgoKind::type1).residual;
    CHECK(r9 / r17 > 3.0);
    CHECK(r9 / r17 < 5.0);
}

TEST_CASE("cgo factorization, ball and trace invariants hold on a bump") {
    auto g = make_grid(2.0, 1.0, 17, 32);
    ScalarField q = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
    Frame fr = make_frame(Vec3(M_PI, 0.0, 0.0), 8.0);

    for (CgoKind kind : {CgoKind::type1, CgoKind::type2}) {
        CgoSolution sol = build_cgo(q, fr, kind, 1e-10, 25);
        CHECK(sol.iterations <= 25);
        CHECK(sol.step_norms.size() == static_cast<size_t>(sol.iterations));
        CHECK(sol.step_norms.back() <= 1e-10);
        CHECK(sol.w_l2 <= 1.0);
        CHECK(sol.w_l2 > 0.0);

        const double sgn = (kind == CgoKind::type1) ? 1.0 : -1.0;
        double worst = 0.0;
        for (int i = 0; i < g->m; ++i)
            for (int j = 0; j < g->m; ++j)
                for (int k = 0; k < g->m; ++k) {
                    const Vec3 x = g->node(i, j, k);
                    const double grow = std::exp(sgn * fr.rho * fr.eta1.dot(x));
                    const cplx osc =
                        (kind == CgoKind::type1)
                            ? std::polar(1.0, (fr.rho * fr.eta2 - fr.xi).dot(x))
                            : std::polar(1.0, -fr.rho * fr.eta2.dot(x));
                    const cplx ref = grow * (osc + sol.w.at(i, j, k));
                    worst = std::max(worst, std::abs(sol.v.at(i, j, k) - ref) / grow);
                }
        CHECK(worst < 1e-12);

        CgoTraces tr = cgo_traces(sol);
        for (int b = 0; b < g->n_boundary(); ++b) {
            const BoundaryNode& node = g->boundary[b];
            const Vec3 x = g->node(node.ijk[0], node.ijk[1], node.ijk[2]);
            const double grow = std::exp(sgn * fr.rho * fr.eta1.dot(x));
            // the factor is the oscillation plus the remainder's value there
            CHECK(std::abs(tr.dirichlet.values[b] - grow * tr.factor.values[b]) <=
                  1e-12 * grow);
            CHECK(std::abs(tr.dirichlet.values[b]) <=
                  grow * (1.0 + std::abs(sol.w.values[node.flat])) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("fixed point reports its failure modes") {
    auto g = make_grid(2.0, 1.0, 9, 16);

    // A potential far above the contraction threshold at rho = 1 expands.
    ScalarField big = make_field_preset(g, "gaussian_bump", {60.0, 0.4});
    Frame low = make_frame(Vec3::Zero(), 1.0);
    try {
        build_cgo(big, low, CgoKind::type1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::contraction);
    }

    // A converging run cut off early reports the iteration budget.
    ScalarField q = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
    Frame fr = make_frame(Vec3(M_PI, 0.0, 0.0), 8.0);
    try {
        build_cgo(q, fr, CgoKind::type1, 1e-10, 3);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::max_iterations);
    }

    // A cube too large for the box is caught when the drift is oblique.
    auto tight = make_grid(2.0, 1.6, 9, 16);
    ScalarField zq = make_field_preset(tight, "zero", {});
    Frame oblique = make_frame(Vec3(M_PI, M_PI, 0.0), 4.0);
    try {
        build_cgo(zq, oblique, CgoKind::type1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_argument);
    }
    // while an axis-aligned drift of the same size fits (pure permutation)
    Frame axis = make_frame(Vec3(0.0, 0.0, M_PI), 4.0);
    const double wn = build_cgo(zq, axis, CgoKind::type1).w_l2;
    CHECK(std::isfinite(wn));
    CHECK(wn > 0.0);
}

TEST_CASE("remainder decay follows the expected slopes") {
    // The cube grid must resolve the rho = 32 oscillation (about six nodes
    // per wavelength at m = 65), otherwise the sampled driving term aliases
    // and the remainder collapses faster than the law it is checking.
    auto g = make_grid(2.0, 1.0, 65, 64);
    ScalarField q = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
    const Vec3 xi(M_PI, 0.0, 0.0);

    DecayStudy study = decay_study(q, xi, {4.0, 8.0, 16.0, 32.0});
    CHECK(!study.exact_zero);
    REQUIRE(study.rows.size() == 4);
    for (size_t i = 1; i < study.rows.size(); ++i)
        CHECK(study.rows[i].w_l2 < study.rows[i - 1].w_l2);
    for (const DecayRow& r : study.rows) CHECK(r.iterations <= 25);
    // k = 0 exponent -1 and k = 2 exponent +1; measured -1.066 and 0.668
    CHECK(study.slope_l2 > -1.3);
    CHECK(study.slope_l2 < -0.7);
    CHECK(study.slope_h2 > 0.6);
    CHECK(study.slope_h2 < 1.4);

    // With q = 0 and xi = 0 the driving term vanishes identically.
    auto gs = make_grid(2.0, 1.0, 9, 16);
    ScalarField zq = make_field_preset(gs, "zero", {});
    DecayStudy none = decay_study(zq, Vec3::Zero(), {2.0, 4.0, 8.0});
    CHECK(none.exact_zero);
    for (const DecayRow& r : none.rows) CHECK(r.w_l2 == 0.0);
    CHECK(none.slope_l2 == 0.0);

    CHECK_THROWS_AS(decay_study(q, xi, {2.0, 4.0}), Error);
    CHECK_THROWS_AS(decay_study(q, xi, {2.0, 2.0, 4.0}), Error);
}

TEST_CASE("remainder trace settles as the box grid refines") {
    ScalarField q = make_field_preset(make_grid(2.0, 1.0, 9, 16), "gaussian_bump", {1.0, 0.3});
    Frame fr = make_frame(Vec3(M_PI, 0.0, 0.0), 4.0);

    auto factor_trace = [&](int M) {
        auto g = make_grid(2.0, 1.0, 9, M);
        ScalarField qm = make_field_preset(g, "gaussian_bump", {1.0, 0.3});
        return cgo_traces(build_cgo(qm, fr, CgoKind::type1)).factor;
    };
    BoundaryField t16 = factor_trace(16);
    BoundaryField t32 = factor_trace(32);
    BoundaryField t64 = factor_trace(64);

    auto diff_norm = [](const BoundaryField& a, const BoundaryField& b) {
        BoundaryField d = a;
        d.values = a.values - b.values;
        return d.norm_l2();
    };
    const double e16 = diff_norm(t16, t64);
    const double e32 = diff_norm(t32, t64);
    CHECK(e32 < e16);
    CHECK(e16 / e32 > 2.0);
    CHECK(e16 / e32 < 10.0);
}

TEST_CASE("suggested box resolution tracks rho") {
    CHECK(suggested_fourier_nodes(2.0, 4.0) == 32);
    CHECK(suggested_fourier_nodes(2.0, 16.0) == 82);
    CHECK(suggested_fourier_nodes(2.0, 32.0) == 164);
    CHECK_THROWS_AS(suggested_fourier_nodes(-1.0, 4.0), Error);
}
