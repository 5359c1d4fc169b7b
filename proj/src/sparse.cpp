#include "generank/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "generank/error.hpp"

namespace generank {

Execution Execution::hardware() {
  return Execution{std::max(1u, std::thread::hardware_concurrency())};
}

SparseSymMatrix SparseSymMatrix::from_csr(std::size_t n, std::vector<Offset> row_offsets,
                                          std::vector<Col> col_indices,
                                          std::vector<double> values) {
  SparseSymMatrix A;
  A.n_ = n;
  A.row_offsets_ = std::move(row_offsets);
  A.col_indices_ = std::move(col_indices);
  A.values_ = std::move(values);
  A.validate();
  return A;
}

SparseSymMatrix SparseSymMatrix::from_edges(
    std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  coords.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      fail(ErrorCode::Validation, "edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                      ") out of range for n = " + std::to_string(n));
    }
    if (i == j) {
      fail(ErrorCode::Validation, "self-loop at node " + std::to_string(i));
    }
    coords.emplace_back(i, j);
    coords.emplace_back(j, i);
  }
  std::vector<double> values(coords.size(), 1.0);
  return from_triplets(n, std::move(coords), std::move(values));
}

SparseSymMatrix SparseSymMatrix::from_triplets(
    std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> coords,
    std::vector<double> values) {
  if (coords.size() != values.size()) {
    fail(ErrorCode::DimensionMismatch, "triplet coordinate and value counts differ");
  }
  if (n > std::numeric_limits<Col>::max()) {
    fail(ErrorCode::InvalidArgument, "matrix dimension exceeds 32-bit column indices");
  }
  std::vector<std::size_t> order(coords.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return coords[a] < coords[b]; });

  std::vector<Offset> offsets(n + 1, 0);
  std::vector<Col> cols;
  std::vector<double> vals;
  cols.reserve(coords.size());
  vals.reserve(coords.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto [i, j] = coords[order[k]];
    if (i >= n || j >= n) {
      fail(ErrorCode::Validation, "entry (" + std::to_string(i + 1) + ", " +
                                      std::to_string(j + 1) + ") out of bounds for n = " +
                                      std::to_string(n));
    }
    if (k > 0 && coords[order[k - 1]] == coords[order[k]]) {
      fail(ErrorCode::Validation, "duplicate entry (" + std::to_string(i + 1) + ", " +
                                      std::to_string(j + 1) + ")");
    }
    ++offsets[i + 1];
    cols.push_back(static_cast<Col>(j));
    vals.push_back(values[order[k]]);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

void SparseSymMatrix::validate() const {
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() || values_.size() != col_indices_.size()) {
    fail(ErrorCode::Validation, "inconsistent CSR array sizes");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      fail(ErrorCode::Validation, "row offsets decrease at row " + std::to_string(i));
    }
    const auto cols = row_cols(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= n_) {
        fail(ErrorCode::Validation, "column index out of range in row " + std::to_string(i));
      }
      if (k > 0 && cols[k - 1] >= cols[k]) {
        fail(ErrorCode::Validation,
             "columns not strictly increasing in row " + std::to_string(i));
      }
    }
    for (double v : row_values(i)) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::Validation, "non-finite value in row " + std::to_string(i));
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t j = cols[k];
      if (j == i) continue;
      const auto other = row_cols(j);
      const auto it = std::lower_bound(other.begin(), other.end(), static_cast<Col>(i));
      if (it == other.end() || *it != i) {
        fail(ErrorCode::Validation, "entry (" + std::to_string(i + 1) + ", " +
                                        std::to_string(j + 1) + ") has no symmetric partner");
      }
      if (row_values(j)[static_cast<std::size_t>(it - other.begin())] != vals[k]) {
        fail(ErrorCode::Validation, "asymmetric values at (" + std::to_string(i + 1) + ", " +
                                        std::to_string(j + 1) + ")");
      }
    }
  }
}

double SparseSymMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) {
    fail(ErrorCode::DimensionMismatch, "index out of range");
  }
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Col>(j));
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

bool SparseSymMatrix::has_diagonal() const noexcept {
  for (std::size_t i = 0; i < n_; ++i) {
    const auto cols = row_cols(i);
    if (std::binary_search(cols.begin(), cols.end(), static_cast<Col>(i))) return true;
  }
  return false;
}

bool SparseSymMatrix::is_adjacency() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; }) &&
         !has_diagonal();
}

void validate_adjacency(const SparseSymMatrix& A) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto cols = A.row_cols(i);
    const auto vals = A.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == i) {
        fail(ErrorCode::Validation,
             "adjacency has a self-loop at node " + std::to_string(i + 1));
      }
      if (vals[k] != 1.0) {
        fail(ErrorCode::Validation, "adjacency entry (" + std::to_string(i + 1) + ", " +
                                        std::to_string(cols[k] + 1) + ") is not 1");
      }
    }
  }
}

void spmv(const SparseSymMatrix& A, std::span<const double> v, std::span<double> out,
          const Execution& exec) {
  if (v.size() != A.size() || out.size() != A.size()) {
    fail(ErrorCode::DimensionMismatch, "spmv: vector length " + std::to_string(v.size()) +
                                           " does not match matrix dimension " +
                                           std::to_string(A.size()));
  }
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  for_each_row_block(A.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double sum = 0.0;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * v[cols[k]];
      out[i] = sum;
    }
  });
}

Vector spmv(const SparseSymMatrix& A, std::span<const double> v, const Execution& exec) {
  Vector out(A.size());
  spmv(A, v, out, exec);
  return out;
}

Vector row_sums(const SparseSymMatrix& A) {
  Vector sums(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (double v : A.row_values(i)) sums[i] += v;
  }
  return sums;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace generank
