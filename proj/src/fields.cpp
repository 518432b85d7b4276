#include "fields.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "errors.hpp"

namespace calkit {

bool grids_compatible(const Grid& a, const Grid& b) {
    return a.R == b.R && a.L == b.L && a.m == b.m && a.M == b.M;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!grids_compatible(a, b))
        throw Error(errc::dimension,
                    std::string(where) + ": fields live on different grids");
}

bool ScalarField::is_real(double tol) const {
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (std::abs(values[i].imag()) > tol) return false;
    return true;
}

double ScalarField::norm_l2() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        s += grid->volume_weight[i] * std::norm(values[i]);
    return std::sqrt(s);
}

double BoundaryField::norm_l2() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        s += grid->boundary[i].weight * std::norm(values[i]);
    return std::sqrt(s);
}

double QField::norm_l2() const {
    const double cell = 2.0 * grid->R / M();
    return values.norm() * std::sqrt(cell * cell * cell);
}

cplx DnMap::entry(int row, int col) const {
    if (is_real()) return cplx(std::get<MatX>(mat)(row, col), 0.0);
    return std::get<MatXc>(mat)(row, col);
}

BoundaryField DnMap::apply(const BoundaryField& f) const {
    if (f.values.size() != size())
        throw std::invalid_argument("DnMap::apply: boundary field size mismatch");
    BoundaryField out(grid);
    if (is_real())
        out.values = std::get<MatX>(mat) * f.values;
    else
        out.values = std::get<MatXc>(mat) * f.values;
    return out;
}

MatXc DnMap::difference(const DnMap& other) const {
    if (other.size() != size())
        throw std::invalid_argument("DnMap::difference: size mismatch");
    auto dense = [](const DnMap& d) -> MatXc {
        if (d.is_real()) return std::get<MatX>(d.mat).cast<cplx>();
        return std::get<MatXc>(d.mat);
    };
    return dense(*this) - dense(other);
}

std::string field_hash(const ScalarField& f) {
    std::uint64_t hash = 1469598103934665603ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(f.values.data());
    const size_t n = static_cast<size_t>(f.values.size()) * sizeof(cplx);
    for (size_t i = 0; i < n; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

cplx interp_cube(const ScalarField& f, const Vec3& x) {
    const Grid& g = *f.grid;
    for (int d = 0; d < 3; ++d)
        if (x[d] < -g.L || x[d] > g.L) return cplx(0.0, 0.0);
    int idx[3];
    double t[3];
    for (int d = 0; d < 3; ++d) {
        double u = (x[d] + g.L) / g.h;
        int i = static_cast<int>(std::floor(u));
        if (i < 0) i = 0;
        if (i > g.m - 2) i = g.m - 2;
        idx[d] = i;
        t[d] = u - i;
    }
    cplx acc(0.0, 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const double w = (a ? t[0] : 1.0 - t[0]) * (b ? t[1] : 1.0 - t[1]) *
                                 (c ? t[2] : 1.0 - t[2]);
                acc += w * f.values[g.flat(idx[0] + a, idx[1] + b, idx[2] + c)];
            }
    return acc;
}

cplx interp_box(const QField& f, const Vec3& y) {
    const int M = f.M();
    const double R = f.grid->R;
    const double cell = 2.0 * R / M;
    int idx[3];
    double t[3];
    for (int d = 0; d < 3; ++d) {
        double u = (y[d] + R) / cell;
        double fl = std::floor(u);
        t[d] = u - fl;
        long i = static_cast<long>(fl) % M;
        if (i < 0) i += M;
        idx[d] = static_cast<int>(i);
    }
    cplx acc(0.0, 0.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const double w = (a ? t[0] : 1.0 - t[0]) * (b ? t[1] : 1.0 - t[1]) *
                                 (c ? t[2] : 1.0 - t[2]);
                const int i = (idx[0] + a) % M, j = (idx[1] + b) % M,
                          k = (idx[2] + c) % M;
                acc += w * f.values[f.flat(i, j, k)];
            }
    return acc;
}

} // namespace calkit
