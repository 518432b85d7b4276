#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace calkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// One node of the cube boundary.  Edge and corner nodes appear once in the
/// list; their normal is taken from the first face that contains them in the
/// enumeration order -x,+x,-y,+y,-z,+z, and their quadrature weight is the
/// sum of the per-face trapezoid weights of every face they lie on, so that
/// the weights add up to the exact surface area 6*(2L)^2.
struct BoundaryNode {
    std::array<int, 3> ijk; // grid multi-index
    int flat;               // flat node index, (i*m + j)*m + k
    Vec3 normal;            // outward unit normal of the owning face
    double weight;          // surface quadrature weight
};

/// Sampling geometry shared by every computation: the cube [-L,L]^3 with an
/// m^3 nodal grid (h = 2L/(m-1)), embedded in the periodicity box [-R,R]^3
/// carrying an M^3 grid for spectral work.
class Grid {
public:
    double R = 0.0;
    double L = 0.0;
    int m = 0;
    int M = 0;
    double h = 0.0;

    std::vector<BoundaryNode> boundary;
    std::vector<double> volume_weight; // m^3 trapezoid weights, sum = (2L)^3

    int n_nodes() const { return m * m * m; }
    int n_boundary() const { return static_cast<int>(boundary.size()); }

    int flat(int i, int j, int k) const { return (i * m + j) * m + k; }
    bool on_boundary(int i, int j, int k) const {
        return i == 0 || i == m - 1 || j == 0 || j == m - 1 || k == 0 || k == m - 1;
    }
    double coord(int i) const { return -L + h * i; }
    Vec3 node(int i, int j, int k) const { return Vec3(coord(i), coord(j), coord(k)); }

    /// Position of flat boundary index b in the boundary list, or -1.
    int boundary_slot(int flat_index) const { return boundary_lookup_[flat_index]; }

    /// JSON manifest describing the geometry and the node ordering
    /// conventions, suitable for embedding in output sidecars.
    std::string manifest() const;

private:
    friend std::shared_ptr<const Grid> make_grid(double R, double L, int m, int M);
    std::vector<int> boundary_lookup_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a grid.  Requires 0 < L < R, odd m >= 3 (so the origin is a node),
/// even M >= 8.  Throws std::invalid_argument otherwise.
GridPtr make_grid(double R, double L, int m, int M);

/// Orthonormal pair completing xi: eta1 and eta2 are unit vectors with
/// eta1.eta2 = eta1.xi = eta2.xi = 0.  Deterministic rule: eta1 is the
/// normalized cross product of xi with the coordinate axis whose component
/// in xi has the smallest magnitude (lowest index wins ties), and
/// eta2 = eta1 x xi / |xi|.  For xi = 0 any fixed pair works; we return
/// eta1 = e3, eta2 = e2, matching the xi = e1 output.
void orthonormal_frame(const Vec3& xi, Vec3& eta1, Vec3& eta2);

/// Rotation S with S*eta1 = e1 (and S orthogonal, det +1), used to move the
/// drift direction onto the first coordinate axis.  Requires |eta1| = 1.
Mat3 rotation_to_e1(const Vec3& eta1);

/// Complex-phase bookkeeping for a CGO pair: the probed frequency xi, the
/// orthonormal completion (eta1, eta2) and the modulus rho.
struct Frame {
    Vec3 xi;
    Vec3 eta1;
    Vec3 eta2;
    double rho = 0.0;
};

/// Frame with eta1, eta2 derived from xi by orthonormal_frame.
/// Requires rho > 0.
Frame make_frame(const Vec3& xi, double rho);

/// Validate frame invariants (unit, mutually orthogonal, orthogonal to xi,
/// rho > 0) to tolerance 1e-12; throws std::invalid_argument on failure.
void validate_frame(const Frame& f);

/// Partition of the boundary node list relative to a unit direction eta:
///   U     = { nu . eta >= 2*eps }   (illuminated, quantitatively)
///   V     = complement of U
///   plus  = { nu . eta >= 0 }
///   minus = { nu . eta <= 0 }
/// Entries are indices into Grid::boundary.  plus and minus overlap where
/// nu . eta == 0; U and V partition the list exactly.
struct FaceSplit {
    std::vector<int> U;
    std::vector<int> V;
    std::vector<int> plus;
    std::vector<int> minus;
};

/// Split boundary nodes by illumination.  Requires |eta| = 1 (tol 1e-9) and
/// 0 < eps < 1/2.  Throws std::invalid_argument otherwise.
FaceSplit face_split(const Grid& grid, const Vec3& eta, double eps);

} // namespace calkit
