#pragma once

#include <string>

#include "carleman.hpp"
#include "fields.hpp"
#include "identity.hpp"

namespace calkit {

// Plain-text artifacts.  Everything written here is deterministic for fixed
// inputs (no timestamps, fixed formatting), so byte comparison of outputs is
// a valid regression check.

/// Write a field as the line-oriented dump: a header "CALFIELD v1 m=<m>
/// L=<L>" followed by one line "i j k re im" per node in row-major order.
/// Values are printed with %.17g, so finite doubles survive a round trip
/// bit-exactly.
void dump_field(const ScalarField& f, const std::string& path);

/// Read a dump back.  The header rebuilds the cube geometry; the embedding
/// box is not stored in the file and defaults to R = 2L with M = 32.  Any
/// malformed or missing content throws errc::io naming the offending line.
ScalarField load_field(const std::string& path);

/// Read a dump that must live on a known grid: header m and L are checked
/// against the expected geometry (errc::dimension on mismatch) and the
/// returned field shares that grid object.
ScalarField load_field(const std::string& path, const GridPtr& grid);

/// Boundary-operator matrix as CSV: one line per matrix row, row-major, each
/// entry contributing the two cells "re,im" (so 2n columns).  A JSON sidecar
/// at path + ".json" records the grid manifest, the operator kind, and the
/// coefficient hash, which is what ties the matrix back to its producer.
void write_dn_csv(const DnMap& dn, const std::string& path);

/// Sampled-coefficient table of a reconstruction, one line per lattice
/// point in sample order: xi1,xi2,xi3,re_qhat,im_qhat,rho,residual where
/// residual is |sample - exact quadrature| at that frequency.  A header
/// line names the columns.
void write_recon_csv(const Reconstruction& rec, const std::string& path);

/// Calibration table, one line per corpus member: id,rho,lhs,rhs,margin,pass
/// with rho the common evaluation point of the run.  Header line included.
void write_calibration_csv(const CalibrationReport& rep, const std::string& path);

/// FNV-1a of a file's bytes in the same "fnv1a:%016x" rendering used for
/// fields; errc::io when the file cannot be read.
std::string file_hash(const std::string& path);

} // namespace calkit
