#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "generank/solvers.hpp"

namespace generank {

inline constexpr double kDefaultAlphaGrid[] = {0.5, 0.75, 0.80, 0.99};

struct BenchSpec {
  std::shared_ptr<const SparseSymMatrix> matrix;
  std::string matrix_label;
  Vector ex;
  std::string ex_label;
  std::vector<double> alphas{std::begin(kDefaultAlphaGrid), std::end(kDefaultAlphaGrid)};
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  std::size_t reps = 1;
  /// Timed solves confirm the true residual only at convergence, so every
  /// method pays for the kernels it needs and nothing else.
  std::size_t residual_check_interval = 0;

  void validate() const;
};

struct BenchCell {
  double alpha = 0.0;
  Method method = Method::Cg;
  std::size_t iterations = 0;
  bool converged = false;
  double median_seconds = 0.0;
  /// Problem setup (degree scaling, rhs), timed apart from the solve.
  double setup_seconds = 0.0;
  double final_spd_residual = 0.0;
  /// Non-empty when the solve threw; the cell prints as DNF.
  std::string error;
};

struct BenchResult {
  BenchSpec spec;
  std::vector<BenchCell> cells;

  const BenchCell* find(double alpha, Method method) const;
  bool all_converged() const;

  /// Methods as rows, alphas as columns, cells `iterations(seconds)`.
  std::string to_table() const;
  void write_csv(std::ostream& out) const;
};

/// Runs every (alpha, method) cell sequentially.
BenchResult run_bench(const BenchSpec& spec);

}  // namespace generank
