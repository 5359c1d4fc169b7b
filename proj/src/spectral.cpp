#include "generank/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "generank/error.hpp"

namespace generank {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    fail(ErrorCode::CapExceeded, "dense assembly refused: n = " + std::to_string(n) +
                                     " exceeds the dense cap " + std::to_string(cap));
  }
}

Vector eigenvalues(const DenseMatrix& A) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::Internal, "dense symmetric eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return Vector(ev.data(), ev.data() + ev.size());
}

ClaimResult claim(std::string id, std::string statement, bool ok, std::string detail) {
  return ClaimResult{std::move(id), std::move(statement), ok ? Verdict::Pass : Verdict::Fail,
                     std::move(detail)};
}

ClaimResult skipped(std::string id, std::string statement, std::string why) {
  return ClaimResult{std::move(id), std::move(statement), Verdict::Skipped, std::move(why)};
}

// Eigenvector for the smallest eigenvalue of S: D^{1/2} applied to the
// indicator of non-isolated genes. Returns ||S y - (1 - alpha) y||_inf / ||y||_inf.
double min_eigenvector_residual(const GeneRankProblem& p) {
  const std::size_t n = p.size();
  const auto d = p.degrees();
  Vector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.adjacency().row_cols(i).empty()) y[i] = std::sqrt(d[i]);
  }
  Vector sy(n);
  apply_S(p, y, sy);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(sy[i] - (1.0 - p.alpha()) * y[i]));
  }
  return worst / norm_inf(y);
}

constexpr const char* kBoundsStatement = "spectrum(S) lies in [1 - alpha, 1 + alpha]";
constexpr const char* kLemmaStatement = "lambda_min(S) = 1 - alpha when W != 0";
constexpr const char* kTRangeStatement = "spectrum(T) lies in [1 - alpha^2, 1]";
constexpr const char* kMappingStatement = "lambda(T) = 1 - (1 - lambda(S))^2 as multisets";
constexpr const char* kCondStatement = "cond(T) <= cond(S)";
constexpr const char* kTMatrixStatement = "T is a symmetric positive definite M-matrix";
constexpr const char* kSMatrixStatement = "D - alpha W and S are M-matrices";

}  // namespace

DenseMatrix assemble_dense(const OperatorHandle& op, std::size_t cap) {
  const std::size_t n = op.size();
  check_cap(n, cap);
  DenseMatrix A(n, n);
  Vector e(n, 0.0);
  Vector col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return A;
}

Vector dense_spectrum(const OperatorHandle& op, std::size_t cap) {
  if (op.size() == 0) return {};
  return eigenvalues(assemble_dense(op, cap));
}

LanczosResult extreme_eigs_lanczos(const OperatorHandle& op, const LanczosOptions& options) {
  const std::size_t n = op.size();
  if (options.iters < 2) fail(ErrorCode::InvalidArgument, "Lanczos needs at least 2 iterations");
  if (n == 0) fail(ErrorCode::InvalidArgument, "Lanczos on an empty operator");
  const std::size_t m = std::min(options.iters, n);

  bool full = false;
  switch (options.reorth) {
    case Reorthogonalization::Full: full = true; break;
    case Reorthogonalization::Local: full = false; break;
    case Reorthogonalization::Auto:
      full = m * n * sizeof(double) <= options.memory_budget_bytes;
      break;
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Vector q(n);
  for (double& v : q) v = normal(rng);
  {
    const double nq = norm2(q);
    for (double& v : q) v /= nq;
  }

  std::vector<Vector> basis;
  if (full) basis.reserve(m);
  Vector prev(n, 0.0);
  Vector w(n);
  std::vector<double> diag;
  std::vector<double> off;
  double beta_prev = 0.0;
  double scale = 0.0;
  bool breakdown = false;

  for (std::size_t j = 0; j < m; ++j) {
    op.apply(q, w);
    const double a = dot(q, w);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * q[i] + beta_prev * prev[i];
    diag.push_back(a);
    if (full) {
      basis.push_back(q);
      // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& v : basis) {
          const double c = dot(v, w);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
        }
      }
    }
    const double b = norm2(w);
    scale = std::max({scale, std::abs(a), b});
    off.push_back(b);
    if (b <= 1e-12 * std::max(scale, 1.0)) {
      breakdown = true;
      break;
    }
    if (j + 1 == m) break;
    prev.swap(q);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
    beta_prev = b;
  }

  const std::size_t k = diag.size();
  Eigen::VectorXd main_diag = Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(k));
  Eigen::VectorXd sub_diag(static_cast<Eigen::Index>(k > 0 ? k - 1 : 0));
  for (std::size_t i = 0; i + 1 < k; ++i) sub_diag(static_cast<Eigen::Index>(i)) = off[i];
  Eigen::SelfAdjointEigenSolver<DenseMatrix> tri;
  tri.computeFromTridiagonal(main_diag, sub_diag, Eigen::ComputeEigenvectors);
  if (tri.info() != Eigen::Success) {
    fail(ErrorCode::Internal, "tridiagonal eigensolver did not converge");
  }
  const auto last = static_cast<Eigen::Index>(k - 1);
  const double beta_last = off.back();

  LanczosResult result;
  result.steps = k;
  result.breakdown = breakdown;
  result.full_reorth = full;
  result.lambda_min = tri.eigenvalues()(0);
  result.lambda_max = tri.eigenvalues()(last);
  result.residual_min = std::abs(beta_last * tri.eigenvectors()(last, 0));
  result.residual_max = std::abs(beta_last * tri.eigenvectors()(last, last));
  return result;
}

MMatrixVerdict verify_m_matrix(const DenseMatrix& A) {
  if (A.rows() != A.cols()) fail(ErrorCode::DimensionMismatch, "M-matrix check needs a square matrix");
  const auto n = A.rows();
  MMatrixVerdict verdict;
  double max_off = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) max_off = std::max(max_off, A(i, j));
    }
  }
  verdict.max_offdiagonal = n > 1 ? max_off : 0.0;
  verdict.z_matrix = verdict.max_offdiagonal <= 1e-14;

  Eigen::FullPivLU<DenseMatrix> lu(A);
  if (!lu.isInvertible()) fail(ErrorCode::Singular, "matrix is singular");
  if (!verdict.z_matrix) return verdict;

  const DenseMatrix inverse = lu.inverse();
  verdict.min_inverse_entry = n > 0 ? inverse.minCoeff() : 0.0;
  verdict.nonnegative_inverse = verdict.min_inverse_entry >= -1e-12;
  const Eigen::VectorXd witness = lu.solve(Eigen::VectorXd::Ones(n));
  verdict.witness.assign(witness.data(), witness.data() + witness.size());
  verdict.positive_witness =
      std::all_of(verdict.witness.begin(), verdict.witness.end(), [](double v) { return v > 0.0; });
  return verdict;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skipped: return "SKIP";
  }
  return "?";
}

bool TheoremReport::passed() const noexcept { return count(Verdict::Fail) == 0; }

std::size_t TheoremReport::count(Verdict v) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(claims.begin(), claims.end(), [v](const ClaimResult& c) { return c.verdict == v; }));
}

TheoremReport check_theorems(const GeneRankProblem& p, const TheoremCheckOptions& options) {
  const double alpha = p.alpha();
  const double lo_S = 1.0 - alpha;
  const double hi_S = 1.0 + alpha;
  const double lo_T = 1.0 - alpha * alpha;
  const bool has_edges = p.has_edges();

  TheoremReport report;
  report.alpha = alpha;
  report.n = p.size();
  auto& sr = report.spectral;

  const OperatorHandle S(p, OperatorKind::S);
  const OperatorHandle T(p, OperatorKind::T);

  if (p.size() <= options.dense_cap) {
    sr.method = SpectralReport::Method::Dense;
    const Vector spec_S = dense_spectrum(S, options.dense_cap);
    const Vector spec_T = dense_spectrum(T, options.dense_cap);
    sr.lambda_min_S = spec_S.front();
    sr.lambda_max_S = spec_S.back();
    sr.lambda_min_T = spec_T.front();
    sr.lambda_max_T = spec_T.back();
    sr.cond_S = sr.lambda_max_S / sr.lambda_min_S;
    sr.cond_T = sr.lambda_max_T / sr.lambda_min_T;
    report.upper_bound_attained = std::abs(sr.lambda_max_S - hi_S) <= 1e-12;

    report.claims.push_back(claim(
        "eigenvalue-bounds", kBoundsStatement,
        sr.lambda_min_S >= lo_S - 1e-12 && sr.lambda_max_S <= hi_S + 1e-12,
        "spectrum(S) = [" + fmt(sr.lambda_min_S) + ", " + fmt(sr.lambda_max_S) + "]" +
            (report.upper_bound_attained ? ", 1 + alpha attained" : ", 1 + alpha not attained")));

    if (has_edges) {
      const double gap = std::abs(sr.lambda_min_S - lo_S);
      const double witness = min_eigenvector_residual(p);
      report.claims.push_back(claim("smallest-eigenvalue", kLemmaStatement,
                                    gap <= 1e-10 && witness <= 1e-12,
                                    "|lambda_min(S) - (1 - alpha)| = " + fmt(gap) +
                                        ", eigenvector residual = " + fmt(witness)));
    } else {
      report.claims.push_back(skipped("smallest-eigenvalue", kLemmaStatement,
                                      "W = 0, so S = I and there is nothing to investigate"));
    }

    report.claims.push_back(claim(
        "preconditioned-range", kTRangeStatement,
        sr.lambda_min_T >= lo_T - 1e-10 && sr.lambda_max_T <= 1.0 + 1e-12,
        "spectrum(T) = [" + fmt_full(sr.lambda_min_T) + ", " + fmt_full(sr.lambda_max_T) + "]"));

    Vector mapped(spec_S.size());
    std::transform(spec_S.begin(), spec_S.end(), mapped.begin(),
                   [](double l) { return 1.0 - (1.0 - l) * (1.0 - l); });
    std::sort(mapped.begin(), mapped.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      worst = std::max(worst, std::abs(mapped[i] - spec_T[i]));
    }
    report.claims.push_back(claim("spectrum-mapping", kMappingStatement, worst <= 1e-10,
                                  "max deviation = " + fmt(worst)));

    report.claims.push_back(claim("condition-number", kCondStatement,
                                  sr.cond_T <= sr.cond_S + 1e-8,
                                  "cond(T) = " + fmt(sr.cond_T) + ", cond(S) = " + fmt(sr.cond_S)));

    const MMatrixVerdict t_verdict = verify_m_matrix(assemble_dense(T, options.dense_cap));
    report.claims.push_back(claim(
        "preconditioned-m-matrix", kTMatrixStatement,
        sr.lambda_min_T > 0.0 && t_verdict.passed(),
        "lambda_min(T) = " + fmt(sr.lambda_min_T) + ", max offdiag = " +
            fmt(t_verdict.max_offdiagonal) + ", min inverse entry = " + fmt(t_verdict.min_inverse_entry)));

    const MMatrixVerdict a_verdict =
        verify_m_matrix(assemble_dense(OperatorHandle(p, OperatorKind::Spd), options.dense_cap));
    const MMatrixVerdict s_verdict = verify_m_matrix(assemble_dense(S, options.dense_cap));
    report.claims.push_back(claim(
        "system-m-matrix", kSMatrixStatement, a_verdict.passed() && s_verdict.passed(),
        "min inverse entry: D - alpha W " + fmt(a_verdict.min_inverse_entry) + ", S " +
            fmt(s_verdict.min_inverse_entry)));
    return report;
  }

  sr.method = SpectralReport::Method::Lanczos;
  const LanczosOptions lanczos{options.lanczos_iters, options.seed};
  const LanczosResult ls = extreme_eigs_lanczos(S, lanczos);
  const LanczosResult lt = extreme_eigs_lanczos(T, lanczos);
  sr.lambda_min_S = ls.lambda_min;
  sr.lambda_max_S = ls.lambda_max;
  sr.lambda_min_T = lt.lambda_min;
  sr.lambda_max_T = lt.lambda_max;
  sr.cond_S = sr.lambda_max_S / sr.lambda_min_S;
  sr.cond_T = sr.lambda_max_T / sr.lambda_min_T;
  sr.residual_bounds = {ls.residual_min, ls.residual_max, lt.residual_min, lt.residual_max};
  report.upper_bound_attained = std::abs(sr.lambda_max_S - hi_S) <= 1e-12;

  report.claims.push_back(claim(
      "eigenvalue-bounds", kBoundsStatement,
      sr.lambda_min_S >= lo_S - 1e-10 && sr.lambda_max_S <= hi_S + 1e-10,
      "Lanczos extremes of S = [" + fmt(sr.lambda_min_S) + ", " + fmt(sr.lambda_max_S) + "]"));
  if (has_edges) {
    const double gap = std::abs(sr.lambda_min_S - lo_S);
    const double witness = min_eigenvector_residual(p);
    report.claims.push_back(claim("smallest-eigenvalue", kLemmaStatement,
                                  gap <= 1e-6 && witness <= 1e-12,
                                  "|ritz_min(S) - (1 - alpha)| = " + fmt(gap) +
                                      ", eigenvector residual = " + fmt(witness)));
  } else {
    report.claims.push_back(skipped("smallest-eigenvalue", kLemmaStatement,
                                    "W = 0, so S = I and there is nothing to investigate"));
  }
  report.claims.push_back(claim(
      "preconditioned-range", kTRangeStatement,
      sr.lambda_min_T >= lo_T - 1e-6 && sr.lambda_max_T <= 1.0 + 1e-6,
      "Lanczos extremes of T = [" + fmt_full(sr.lambda_min_T) + ", " + fmt_full(sr.lambda_max_T) + "]"));
  report.claims.push_back(skipped("spectrum-mapping", kMappingStatement,
                                  "needs the full spectrum; n exceeds the dense cap"));
  report.claims.push_back(claim("condition-number", kCondStatement, sr.cond_T <= sr.cond_S + 1e-8,
                                "estimated cond(T) = " + fmt(sr.cond_T) +
                                    ", cond(S) = " + fmt(sr.cond_S)));
  report.claims.push_back(skipped("preconditioned-m-matrix", kTMatrixStatement,
                                  "needs a dense inverse; n exceeds the dense cap"));
  report.claims.push_back(skipped("system-m-matrix", kSMatrixStatement,
                                  "needs a dense inverse; n exceeds the dense cap"));
  return report;
}

void write_eigenvalues_csv(std::span<const double> values, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  for (double v : values) out << fmt_full(v) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace generank
