#pragma once

#include <filesystem>
#include <iosfwd>

#include "generank/sparse.hpp"

namespace generank {

// Coordinate-format Matrix Market exchange. Indices are 1-based on disk and
// 0-based in memory. Accepted headers: `pattern` or `real` (also `integer`)
// with `symmetric` or `general` symmetry; general files must be numerically
// symmetric.

SparseSymMatrix read_matrix_market(std::istream& in);
SparseSymMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes the lower triangle with a `symmetric` header. Matrices whose values
/// are all exactly 1 are written as `pattern`, everything else as `real` with
/// round-trip precision.
void write_matrix_market(const SparseSymMatrix& A, std::ostream& out);
void write_matrix_market(const SparseSymMatrix& A, const std::filesystem::path& path);

}  // namespace generank
