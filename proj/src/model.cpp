#include "generank/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "generank/error.hpp"
#include "kernels.hpp"

namespace generank {
namespace {

void check_length(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + ": expected length " +
                                           std::to_string(expected) + ", got " +
                                           std::to_string(got));
  }
}

Vector inverse_sqrt(std::span<const double> d) {
  Vector s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s[i] = 1.0 / std::sqrt(d[i]);
  return s;
}

}  // namespace

Vector build_degree_scaling(const SparseSymMatrix& W) {
  Vector d = row_sums(W);
  for (double& di : d) {
    if (!(di > 0.0)) di = 1.0;
  }
  return d;
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::InvalidArgument,
         "alpha must lie in the open interval (0, 1), got " + std::to_string(alpha));
  }
}

GeneRankProblem::GeneRankProblem(std::shared_ptr<const SparseSymMatrix> W, double alpha,
                                 Vector ex, Execution exec)
    : W_(std::move(W)), alpha_(alpha), ex_(std::move(ex)), exec_(exec) {
  if (!W_) fail(ErrorCode::InvalidArgument, "adjacency is null");
  validate_alpha(alpha_);
  validate_adjacency(*W_);
  check_length(W_->size(), ex_.size(), "expression vector");
  for (std::size_t i = 0; i < ex_.size(); ++i) {
    if (!(ex_[i] >= 0.0) || !std::isfinite(ex_[i])) {
      fail(ErrorCode::Validation, "expression entry " + std::to_string(i + 1) +
                                      " must be finite and nonnegative");
    }
  }
  d_ = build_degree_scaling(*W_);
  inv_sqrt_d_ = inverse_sqrt(d_);
}

GeneRankProblem::GeneRankProblem(std::shared_ptr<const SparseSymMatrix> W, double alpha,
                                 Vector ex, Vector d, Vector inv_sqrt_d, Execution exec)
    : W_(std::move(W)),
      alpha_(alpha),
      ex_(std::move(ex)),
      d_(std::move(d)),
      inv_sqrt_d_(std::move(inv_sqrt_d)),
      exec_(exec) {}

GeneRankProblem GeneRankProblem::with_alpha(double alpha) const {
  validate_alpha(alpha);
  return GeneRankProblem(W_, alpha, ex_, d_, inv_sqrt_d_, exec_);
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::J: return "J";
    case OperatorKind::S: return "S";
    case OperatorKind::M: return "M";
    case OperatorKind::T: return "T";
    case OperatorKind::Spd: return "D-alphaW";
  }
  return "?";
}

void apply_J(const GeneRankProblem& p, std::span<const double> v, std::span<double> out) {
  check_length(p.size(), v.size(), "apply_J input");
  check_length(p.size(), out.size(), "apply_J output");
  Vector scratch(p.size());
  detail::combine_J(p, v, 0.0, 1.0, scratch, out);
}

void apply_S(const GeneRankProblem& p, std::span<const double> v, std::span<double> out) {
  check_length(p.size(), v.size(), "apply_S input");
  check_length(p.size(), out.size(), "apply_S output");
  Vector scratch(p.size());
  detail::combine_J(p, v, 1.0, -1.0, scratch, out);
}

void apply_M(const GeneRankProblem& p, std::span<const double> v, std::span<double> out) {
  check_length(p.size(), v.size(), "apply_M input");
  check_length(p.size(), out.size(), "apply_M output");
  Vector scratch(p.size());
  detail::combine_J(p, v, 1.0, 1.0, scratch, out);
}

void apply_T(const GeneRankProblem& p, std::span<const double> v, std::span<double> out) {
  check_length(p.size(), v.size(), "apply_T input");
  check_length(p.size(), out.size(), "apply_T output");
  Vector scratch(p.size());
  Vector jv(p.size());
  detail::combine_J(p, v, 0.0, 1.0, scratch, jv);
  Vector jjv(p.size());
  detail::combine_J(p, jv, 0.0, 1.0, scratch, jjv);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - jjv[i];
}

void apply_spd(const GeneRankProblem& p, std::span<const double> v, std::span<double> out) {
  check_length(p.size(), v.size(), "apply_spd input");
  check_length(p.size(), out.size(), "apply_spd output");
  detail::apply_spd_kernel(p, v, out);
}

void OperatorHandle::apply(std::span<const double> v, std::span<double> out) const {
  switch (kind_) {
    case OperatorKind::J: apply_J(*problem_, v, out); return;
    case OperatorKind::S: apply_S(*problem_, v, out); return;
    case OperatorKind::M: apply_M(*problem_, v, out); return;
    case OperatorKind::T: apply_T(*problem_, v, out); return;
    case OperatorKind::Spd: apply_spd(*problem_, v, out); return;
  }
}

Vector OperatorHandle::apply(std::span<const double> v) const {
  Vector out(size());
  apply(v, out);
  return out;
}

Vector assemble_spd_rhs(const GeneRankProblem& p) {
  Vector b(p.ex().begin(), p.ex().end());
  for (double& bi : b) bi *= 1.0 - p.alpha();
  return b;
}

Vector assemble_scaled_rhs(const GeneRankProblem& p) {
  Vector b = assemble_spd_rhs(p);
  const auto s = p.inv_sqrt_degrees();
  for (std::size_t i = 0; i < b.size(); ++i) b[i] *= s[i];
  return b;
}

std::string_view to_string(SystemForm form) {
  switch (form) {
    case SystemForm::Nonsymmetric: return "nonsymmetric";
    case SystemForm::Spd: return "spd";
    case SystemForm::Scaled: return "scaled";
  }
  return "?";
}

Solution recover_solution(SystemForm form, std::span<const double> u,
                          std::span<const double> d) {
  check_length(d.size(), u.size(), "recover_solution");
  for (double di : d) {
    if (!(di > 0.0)) fail(ErrorCode::Internal, "degree scaling has a nonpositive entry");
  }
  const std::size_t n = u.size();
  Solution sol;
  sol.source_form = form;
  sol.x.resize(n);
  sol.xhat.resize(n);
  sol.xbar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double root = std::sqrt(d[i]);
    switch (form) {
      case SystemForm::Nonsymmetric:
        sol.x[i] = u[i];
        sol.xhat[i] = u[i] / d[i];
        sol.xbar[i] = u[i] / root;
        break;
      case SystemForm::Spd:
        sol.xhat[i] = u[i];
        sol.x[i] = d[i] * u[i];
        sol.xbar[i] = root * u[i];
        break;
      case SystemForm::Scaled:
        sol.xbar[i] = u[i];
        sol.x[i] = root * u[i];
        sol.xhat[i] = u[i] / root;
        break;
    }
  }
  return sol;
}

std::vector<std::size_t> rank_genes(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  return order;
}

double nonsymmetric_residual_norm1(const GeneRankProblem& p, std::span<const double> x) {
  check_length(p.size(), x.size(), "nonsymmetric residual");
  const auto d = p.degrees();
  Vector scaled(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = x[i] / d[i];
  const Vector wx = spmv(p.adjacency(), scaled, p.execution());
  const auto ex = p.ex();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += std::abs(x[i] - p.alpha() * wx[i] - (1.0 - p.alpha()) * ex[i]);
  }
  return sum;
}

}  // namespace generank
