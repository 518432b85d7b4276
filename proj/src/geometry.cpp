#include "geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace calkit {

namespace {

// Trapezoid endpoint factor along one axis.
double endw(int i, int m) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; }

} // namespace

GridPtr make_grid(double R, double L, int m, int M) {
    if (!(L > 0.0) || !(R > L))
        throw std::invalid_argument("make_grid: need 0 < L < R");
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("make_grid: m must be odd and >= 3");
    if (M < 8 || M % 2 != 0)
        throw std::invalid_argument("make_grid: M must be even and >= 8");

    auto g = std::make_shared<Grid>();
    g->R = R;
    g->L = L;
    g->m = m;
    g->M = M;
    g->h = 2.0 * L / (m - 1);

    // Volume trapezoid weights, exact sum (2L)^3.
    g->volume_weight.resize(static_cast<size_t>(m) * m * m);
    const double h3 = g->h * g->h * g->h;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                g->volume_weight[g->flat(i, j, k)] =
                    h3 * endw(i, m) * endw(j, m) * endw(k, m);

    // Boundary nodes, one entry per node.  Faces are visited in the order
    // -x,+x,-y,+y,-z,+z; a node shared by several faces is created under the
    // first one (which also fixes its normal) and accumulates the trapezoid
    // weight of every face containing it, so the weights sum to 6*(2L)^2.
    g->boundary_lookup_.assign(g->n_nodes(), -1);
    const double h2 = g->h * g->h;

    struct Face {
        int axis;
        int side; // 0 or m-1
        double sign;
    };
    const Face faces[6] = {{0, 0, -1.0},     {0, m - 1, 1.0}, {1, 0, -1.0},
                           {1, m - 1, 1.0}, {2, 0, -1.0},     {2, m - 1, 1.0}};

    for (const Face& f : faces) {
        // Free axes in ascending order; the lower one varies slowest.
        int a1 = (f.axis == 0) ? 1 : 0;
        int a2 = (f.axis == 2) ? 1 : 2;
        for (int p = 0; p < m; ++p) {
            for (int q = 0; q < m; ++q) {
                std::array<int, 3> ijk{};
                ijk[f.axis] = f.side;
                ijk[a1] = p;
                ijk[a2] = q;
                const int fl = g->flat(ijk[0], ijk[1], ijk[2]);
                const double w = h2 * endw(p, m) * endw(q, m);
                int slot = g->boundary_lookup_[fl];
                if (slot < 0) {
                    BoundaryNode node;
                    node.ijk = ijk;
                    node.flat = fl;
                    node.normal = Vec3::Zero();
                    node.normal[f.axis] = f.sign;
                    node.weight = w;
                    g->boundary_lookup_[fl] = static_cast<int>(g->boundary.size());
                    g->boundary.push_back(node);
                } else {
                    g->boundary[slot].weight += w;
                }
            }
        }
    }
    return g;
}

std::string Grid::manifest() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"R\":" << R << ",\"L\":" << L << ",\"m\":" << m << ",\"M\":" << M
       << ",\"h\":" << h << ",\"n_boundary\":" << boundary.size()
       << ",\"node_order\":\"flat = (i*m + j)*m + k\""
       << ",\"boundary_order\":\"faces -x,+x,-y,+y,-z,+z; within a face the "
          "lower free axis varies slowest; shared nodes listed once under "
          "their first face with summed trapezoid weights\""
       << ",\"quadrature\":\"trapezoid\"}";
    return os.str();
}

void orthonormal_frame(const Vec3& xi, Vec3& eta1, Vec3& eta2) {
    const double n = xi.norm();
    if (n < 1e-300) {
        eta1 = Vec3(0, 0, 1);
        eta2 = Vec3(0, 1, 0);
        return;
    }
    int axis = 0;
    for (int d = 1; d < 3; ++d)
        if (std::abs(xi[d]) < std::abs(xi[axis])) axis = d;
    Vec3 e = Vec3::Zero();
    e[axis] = 1.0;
    eta1 = xi.cross(e).normalized();
    eta2 = eta1.cross(xi / n);
}

Mat3 rotation_to_e1(const Vec3& eta1) {
    if (std::abs(eta1.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("rotation_to_e1: eta1 must be a unit vector");
    Vec3 t1, t2;
    orthonormal_frame(eta1, t1, t2);
    Mat3 S;
    S.row(0) = eta1;
    S.row(1) = t1;
    S.row(2) = eta1.cross(t1); // right-handed, det +1
    return S;
}

Frame make_frame(const Vec3& xi, double rho) {
    Frame f;
    f.xi = xi;
    f.rho = rho;
    orthonormal_frame(xi, f.eta1, f.eta2);
    validate_frame(f);
    return f;
}

void validate_frame(const Frame& f) {
    const double tol = 1e-12;
    if (!(f.rho > 0.0))
        throw std::invalid_argument("frame: rho must be positive");
    if (std::abs(f.eta1.norm() - 1.0) > tol || std::abs(f.eta2.norm() - 1.0) > tol)
        throw std::invalid_argument("frame: eta1, eta2 must be unit vectors");
    if (std::abs(f.eta1.dot(f.eta2)) > tol || std::abs(f.eta1.dot(f.xi)) > tol ||
        std::abs(f.eta2.dot(f.xi)) > tol)
        throw std::invalid_argument("frame: xi, eta1, eta2 must be mutually orthogonal");
}

FaceSplit face_split(const Grid& grid, const Vec3& eta, double eps) {
    if (std::abs(eta.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("face_split: eta must be a unit vector");
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("face_split: need 0 < eps < 1/2");
    FaceSplit out;
    for (int b = 0; b < grid.n_boundary(); ++b) {
        const double d = grid.boundary[b].normal.dot(eta);
        (d >= 2.0 * eps ? out.U : out.V).push_back(b);
        if (d >= 0.0) out.plus.push_back(b);
        if (d <= 0.0) out.minus.push_back(b);
    }
    return out;
}

} // namespace calkit
