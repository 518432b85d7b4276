#include "presets.hpp"

#include <cmath>
#include <stdexcept>

namespace calkit {

namespace {

void need(const std::vector<double>& p, size_t n, const std::string& name) {
    if (p.size() != n)
        throw std::invalid_argument("preset '" + name + "' expects " +
                                    std::to_string(n) + " parameter(s), got " +
                                    std::to_string(p.size()));
}

std::function<double(const Vec3&)> preset_fn(double L, const std::string& name,
                                             const std::vector<double>& p) {
    if (name == "zero") {
        need(p, 0, name);
        return [](const Vec3&) { return 0.0; };
    }
    if (name == "constant") {
        need(p, 1, name);
        const double c = p[0];
        return [c](const Vec3&) { return c; };
    }
    if (name == "gaussian_bump") {
        need(p, 2, name);
        const double amp = p[0], s2 = 2.0 * p[1] * p[1];
        if (!(p[1] > 0.0))
            throw std::invalid_argument("gaussian_bump: sigma must be positive");
        return [amp, s2](const Vec3& x) { return amp * std::exp(-x.squaredNorm() / s2); };
    }
    if (name == "offset_bump") {
        need(p, 5, name);
        const double amp = p[0], s2 = 2.0 * p[1] * p[1];
        if (!(p[1] > 0.0))
            throw std::invalid_argument("offset_bump: sigma must be positive");
        const Vec3 c(p[2], p[3], p[4]);
        return [amp, s2, c](const Vec3& x) {
            return amp * std::exp(-(x - c).squaredNorm() / s2);
        };
    }
    if (name == "exp_x1") {
        need(p, 0, name);
        return [](const Vec3& x) { return std::exp(x[0]); };
    }
    if (name == "exp_neg_x1") {
        need(p, 0, name);
        return [](const Vec3& x) { return std::exp(-x[0]); };
    }
    if (name == "exp_x1sq") {
        need(p, 0, name);
        return [](const Vec3& x) { return std::exp(x[0] * x[0]); };
    }
    if (name == "exp_sqrtc_x1") {
        need(p, 1, name);
        if (!(p[0] >= 0.0))
            throw std::invalid_argument("exp_sqrtc_x1: c must be nonnegative");
        const double r = std::sqrt(p[0]);
        return [r](const Vec3& x) { return std::exp(r * x[0]); };
    }
    if (name == "linear_x1") {
        need(p, 0, name);
        return [](const Vec3& x) { return x[0]; };
    }
    if (name == "quad_x1sq_minus_x2sq") {
        need(p, 0, name);
        return [](const Vec3& x) { return x[0] * x[0] - x[1] * x[1]; };
    }
    if (name == "exp_x1_cos_sqrt2_x2") {
        // div(e^{x1} grad u) = 0 for u = e^{x1} cos(sqrt(2) x2): a genuinely
        // two-dimensional conductivity solution for order studies.
        need(p, 0, name);
        return [](const Vec3& x) {
            return std::exp(x[0]) * std::cos(std::sqrt(2.0) * x[1]);
        };
    }
    if (name == "one_plus_cos2_bump") {
        need(p, 1, name);
        const double amp = p[0];
        return [amp, L](const Vec3& x) {
            double prod = 1.0;
            for (int d = 0; d < 3; ++d) {
                const double c = std::cos(0.5 * M_PI * x[d] / L);
                prod *= c * c;
            }
            return 1.0 + amp * prod;
        };
    }
    throw std::invalid_argument("unknown field preset '" + name + "'");
}

} // namespace

ScalarField make_field_preset(GridPtr grid, const std::string& name,
                              const std::vector<double>& params) {
    auto fn = preset_fn(grid->L, name, params);
    return field_from(grid, [&fn](const Vec3& x) { return cplx(fn(x), 0.0); });
}

BoundaryField make_boundary_preset(GridPtr grid, const std::string& name,
                                   const std::vector<double>& params) {
    auto fn = preset_fn(grid->L, name, params);
    return boundary_from(grid, [&fn](const Vec3& x) { return cplx(fn(x), 0.0); });
}

ScalarField random_zero_trace(GridPtr grid, Lcg64& rng) {
    const double L = grid->L;
    struct Bump {
        double amp;
        Vec3 c;
        double s2;
    };
    Bump bumps[3];
    for (Bump& b : bumps) {
        b.amp = rng.uniform(-1.0, 1.0);
        for (int d = 0; d < 3; ++d) b.c[d] = rng.uniform(-0.5 * L, 0.5 * L);
        const double s = rng.uniform(0.15 * L, 0.45 * L);
        b.s2 = 2.0 * s * s;
    }
    return field_from(grid, [&](const Vec3& x) {
        double sum = 0.0;
        for (const Bump& b : bumps) sum += b.amp * std::exp(-(x - b.c).squaredNorm() / b.s2);
        double win = 1.0;
        for (int d = 0; d < 3; ++d) {
            const double t = 1.0 - (x[d] / L) * (x[d] / L);
            win *= t * t;
        }
        return cplx(sum * win, 0.0);
    });
}

} // namespace calkit
