#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace generank {

using Vector = std::vector<double>;

/// Thread settings for row-partitioned kernels. Each output row is reduced
/// sequentially in storage order, so results are bit-identical for any
/// thread count.
struct Execution {
  unsigned threads = 1;

  static Execution hardware();
};

/// Symmetric sparse matrix in compressed sparse-row form with both triangles
/// stored. Immutable once constructed; every factory validates its input.
class SparseSymMatrix {
 public:
  using Offset = std::size_t;
  using Col = std::uint32_t;

  SparseSymMatrix() = default;

  /// Takes ownership of CSR arrays. Rows must have strictly increasing,
  /// in-range columns and the structure and values must be symmetric.
  static SparseSymMatrix from_csr(std::size_t n, std::vector<Offset> row_offsets,
                                  std::vector<Col> col_indices,
                                  std::vector<double> values);

  /// Builds a 0/1 adjacency from undirected edges. Each unordered pair may
  /// appear once; self-loops are rejected.
  static SparseSymMatrix from_edges(
      std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

  /// Builds from coordinate triplets holding both (i,j) and (j,i) for every
  /// off-diagonal entry. Duplicates are rejected.
  static SparseSymMatrix from_triplets(
      std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> coords,
      std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_indices_.size(); }

  std::span<const Offset> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Col> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Col> row_cols(std::size_t i) const noexcept {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Entry lookup by binary search within row i; zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  bool has_diagonal() const noexcept;

  /// True when every stored value is exactly 1 and no diagonal is stored.
  bool is_adjacency() const noexcept;

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  void validate() const;

  std::size_t n_ = 0;
  std::vector<Offset> row_offsets_{0};
  std::vector<Col> col_indices_;
  std::vector<double> values_;
};

/// Throws Validation unless A is a GeneRank adjacency (0/1, no self-loops).
void validate_adjacency(const SparseSymMatrix& A);

/// out = A v.
void spmv(const SparseSymMatrix& A, std::span<const double> v, std::span<double> out,
          const Execution& exec = {});
Vector spmv(const SparseSymMatrix& A, std::span<const double> v,
            const Execution& exec = {});

/// Row sums of A.
Vector row_sums(const SparseSymMatrix& A);

/// Runs body(begin, end) over contiguous row blocks covering [0, n).
template <typename Body>
void for_each_row_block(std::size_t n, const Execution& exec, Body&& body);

double dot(std::span<const double> a, std::span<const double> b);
double norm1(std::span<const double> a);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

}  // namespace generank

#include "generank/detail/row_blocks.hpp"
