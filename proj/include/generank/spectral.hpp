#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "generank/model.hpp"

namespace generank {

using DenseMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kDefaultDenseCap = 2000;

/// Applies the operator to every unit vector. Refuses n > cap.
DenseMatrix assemble_dense(const OperatorHandle& op, std::size_t cap = kDefaultDenseCap);

/// All eigenvalues of the densely assembled operator, ascending.
Vector dense_spectrum(const OperatorHandle& op, std::size_t cap = kDefaultDenseCap);

enum class Reorthogonalization {
  Auto,   // Full while the stored basis fits memory_budget_bytes, else Local.
  Full,   // Gram-Schmidt against every stored Lanczos vector.
  Local,  // Three-term recurrence only; extreme Ritz values stay reliable.
};

struct LanczosOptions {
  std::size_t iters = 100;
  std::uint64_t seed = 0;
  Reorthogonalization reorth = Reorthogonalization::Auto;
  std::size_t memory_budget_bytes = std::size_t{256} << 20;
};

struct LanczosResult {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Residual norms |beta_m s_{m,i}| of the two extreme Ritz pairs.
  double residual_min = 0.0;
  double residual_max = 0.0;
  std::size_t steps = 0;
  /// Invariant subspace found before `iters` steps; estimates are exact then.
  bool breakdown = false;
  bool full_reorth = false;
};

LanczosResult extreme_eigs_lanczos(const OperatorHandle& op, const LanczosOptions& options);

struct MMatrixVerdict {
  bool z_matrix = false;
  /// Only evaluated when the Z-matrix test passes.
  std::optional<bool> nonnegative_inverse;
  std::optional<bool> positive_witness;
  /// A^{-1} e, strictly positive for an M-matrix.
  Vector witness;
  double max_offdiagonal = 0.0;
  double min_inverse_entry = 0.0;

  bool passed() const noexcept {
    return z_matrix && nonnegative_inverse.value_or(false) && positive_witness.value_or(false);
  }
};

/// Z-matrix sign test (off-diagonals <= 1e-14), dense inverse >= -1e-12
/// entrywise, and A^{-1} e > 0. Throws Singular when A is not invertible.
MMatrixVerdict verify_m_matrix(const DenseMatrix& A);

struct SpectralReport {
  double lambda_min_S = 0.0;
  double lambda_max_S = 0.0;
  double lambda_min_T = 0.0;
  double lambda_max_T = 0.0;
  double cond_S = 0.0;
  double cond_T = 0.0;
  enum class Method { Dense, Lanczos } method = Method::Dense;
  /// Ritz residual norms (min_S, max_S, min_T, max_T); empty for dense.
  std::vector<double> residual_bounds;
};

enum class Verdict { Pass, Fail, Skipped };

std::string_view to_string(Verdict v);

struct ClaimResult {
  std::string id;
  std::string statement;
  Verdict verdict = Verdict::Skipped;
  std::string detail;
};

struct TheoremReport {
  double alpha = 0.0;
  std::size_t n = 0;
  SpectralReport spectral;
  std::vector<ClaimResult> claims;
  /// Whether lambda_max(S) reaches 1 + alpha (within 1e-12).
  bool upper_bound_attained = false;

  bool passed() const noexcept;
  std::size_t count(Verdict v) const noexcept;
};

struct TheoremCheckOptions {
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t lanczos_iters = 1500;
  std::uint64_t seed = 0;
};

/// Checks every spectral claim about S and T on one instance. Dense checks
/// run up to dense_cap; beyond that Lanczos extremes and the eigenvector
/// witness for lambda_min(S) are used and the dense-only claims are skipped.
TheoremReport check_theorems(const GeneRankProblem& problem, const TheoremCheckOptions& options = {});

/// One value per line, round-trip precision.
void write_eigenvalues_csv(std::span<const double> values, const std::filesystem::path& path);

}  // namespace generank
