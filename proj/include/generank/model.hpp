#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "generank/sparse.hpp"

namespace generank {

/// Diagonal of the degree scaling: d_i = deg_i when positive, otherwise 1.
Vector build_degree_scaling(const SparseSymMatrix& W);

/// One GeneRank instance: adjacency W, degree scaling d, damping alpha in
/// (0,1) and a nonnegative expression vector. The adjacency is shared, so
/// instances for an alpha grid are cheap to make.
class GeneRankProblem {
 public:
  GeneRankProblem(std::shared_ptr<const SparseSymMatrix> W, double alpha, Vector ex,
                  Execution exec = {});

  GeneRankProblem with_alpha(double alpha) const;

  std::size_t size() const noexcept { return W_->size(); }
  const SparseSymMatrix& adjacency() const noexcept { return *W_; }
  std::shared_ptr<const SparseSymMatrix> shared_adjacency() const noexcept { return W_; }
  double alpha() const noexcept { return alpha_; }
  std::span<const double> degrees() const noexcept { return d_; }
  std::span<const double> inv_sqrt_degrees() const noexcept { return inv_sqrt_d_; }
  std::span<const double> ex() const noexcept { return ex_; }
  const Execution& execution() const noexcept { return exec_; }
  bool has_edges() const noexcept { return W_->nnz() > 0; }

 private:
  GeneRankProblem(std::shared_ptr<const SparseSymMatrix> W, double alpha, Vector ex,
                  Vector d, Vector inv_sqrt_d, Execution exec);

  std::shared_ptr<const SparseSymMatrix> W_;
  double alpha_;
  Vector ex_;
  Vector d_;
  Vector inv_sqrt_d_;
  Execution exec_;
};

void validate_alpha(double alpha);

// Matrix-free operators on a problem. With J = alpha D^{-1/2} W D^{-1/2}:
//   S = I - J          (Jacobi-scaled system matrix)
//   M = I + J          (polynomial preconditioner)
//   T = M S = I - J^2  (preconditioned matrix)
//   Spd = D - alpha W
// All are symmetric.
enum class OperatorKind { J, S, M, T, Spd };

std::string_view to_string(OperatorKind kind);

void apply_J(const GeneRankProblem& p, std::span<const double> v, std::span<double> out);
void apply_S(const GeneRankProblem& p, std::span<const double> v, std::span<double> out);
void apply_M(const GeneRankProblem& p, std::span<const double> v, std::span<double> out);
void apply_T(const GeneRankProblem& p, std::span<const double> v, std::span<double> out);
void apply_spd(const GeneRankProblem& p, std::span<const double> v, std::span<double> out);

/// Binds an operator kind to a problem.
class OperatorHandle {
 public:
  OperatorHandle(const GeneRankProblem& problem, OperatorKind kind)
      : problem_(&problem), kind_(kind) {}

  void apply(std::span<const double> v, std::span<double> out) const;
  Vector apply(std::span<const double> v) const;

  std::size_t size() const noexcept { return problem_->size(); }
  OperatorKind kind() const noexcept { return kind_; }
  const GeneRankProblem& problem() const noexcept { return *problem_; }

 private:
  const GeneRankProblem* problem_;
  OperatorKind kind_;
};

/// (1 - alpha) ex, the right-hand side of (D - alpha W) xhat = (1 - alpha) ex.
Vector assemble_spd_rhs(const GeneRankProblem& p);
/// (1 - alpha) D^{-1/2} ex, the right-hand side of S xbar = b.
Vector assemble_scaled_rhs(const GeneRankProblem& p);

enum class SystemForm {
  Nonsymmetric,  // (I - alpha W D^{-1}) x = (1 - alpha) ex
  Spd,           // (D - alpha W) xhat = (1 - alpha) ex,  xhat = D^{-1} x
  Scaled,        // S xbar = (1 - alpha) D^{-1/2} ex,    xbar = D^{-1/2} x
};

std::string_view to_string(SystemForm form);

struct Solution {
  Vector x;     // GeneRank scores
  Vector xhat;  // D^{-1} x
  Vector xbar;  // D^{-1/2} x
  SystemForm source_form = SystemForm::Nonsymmetric;
};

Solution recover_solution(SystemForm form, std::span<const double> u,
                          std::span<const double> d);

/// Gene indices by descending score. Ties keep ascending index order.
std::vector<std::size_t> rank_genes(std::span<const double> x);

/// ||(I - alpha W D^{-1}) x - (1 - alpha) ex||_1.
double nonsymmetric_residual_norm1(const GeneRankProblem& p, std::span<const double> x);

}  // namespace generank
