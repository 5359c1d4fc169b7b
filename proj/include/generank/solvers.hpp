#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "generank/model.hpp"

namespace generank {

enum class Method {
  Cg,         // CG on (D - alpha W) xhat = (1 - alpha) ex
  PcgJacobi,  // CG on the Jacobi-scaled system S xbar = b
  Chebyshev,  // Chebyshev acceleration of the Jacobi splitting
  CgMalpha,   // CG on S xbar = b preconditioned by multiplication with M = I + J
};

std::string_view to_string(Method method);
/// Table-style label: "CG", "PCG", "Chebyshev", "CG-Malpha".
std::string_view table_label(Method method);
/// Accepts "cg", "pcg", "pcg-jacobi", "chebyshev", "cg-malpha" (either - or _).
std::optional<Method> parse_method(std::string_view name);

inline constexpr Method kAllMethods[] = {Method::Cg, Method::PcgJacobi, Method::Chebyshev,
                                         Method::CgMalpha};

/// Sentinel for SolverConfig::residual_check_interval: every iteration up to
/// 1e5 unknowns, every tenth beyond.
inline constexpr std::size_t kAutoResidualCheck = static_cast<std::size_t>(-1);

struct SolverConfig {
  Method method = Method::CgMalpha;
  /// Stop once the 1-norm of the monitored residual drops below tol.
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  /// Single-threaded kernels. Row-partitioned kernels give the same bits, so
  /// this only affects scheduling.
  bool deterministic = true;
  /// How often the CG-type solvers replace the recursively updated residual
  /// by b - A u. 0 recomputes only to confirm convergence.
  std::size_t residual_check_interval = kAutoResidualCheck;
  /// Starting iterate in the solver's own unknowns; empty means zero.
  Vector initial_guess;

  void validate() const;
};

struct SolveReport {
  Method method = Method::CgMalpha;
  double alpha = 0.0;
  double tol = 0.0;
  std::size_t iterations = 0;
  /// 1-norms of the monitored residual, initial residual first.
  Vector residual_history;
  bool converged = false;
  double wall_time = 0.0;
  /// ||(1 - alpha) ex - (D - alpha W) xhat||_1, comparable across methods.
  double final_spd_residual = 0.0;
  Solution solution;
};

SolveReport solve_cg(const GeneRankProblem& problem, const SolverConfig& config);
SolveReport solve_pcg_jacobi(const GeneRankProblem& problem, const SolverConfig& config);
SolveReport solve_chebyshev(const GeneRankProblem& problem, const SolverConfig& config);
SolveReport solve_cg_malpha(const GeneRankProblem& problem, const SolverConfig& config);

/// Dispatches on config.method.
SolveReport solve(const GeneRankProblem& problem, const SolverConfig& config);

}  // namespace generank
