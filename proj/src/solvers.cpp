#include "generank/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "generank/error.hpp"
#include "kernels.hpp"

namespace generank {
namespace {

using Clock = std::chrono::steady_clock;
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

constexpr double kBreakdownThreshold = 1e-300;

std::size_t check_interval(const SolverConfig& config, std::size_t n) {
  if (config.residual_check_interval != kAutoResidualCheck) {
    return config.residual_check_interval;
  }
  return n <= 100000 ? 1 : 10;
}

Vector starting_point(const SolverConfig& config, std::size_t n) {
  if (config.initial_guess.empty()) return Vector(n, 0.0);
  if (config.initial_guess.size() != n) {
    fail(ErrorCode::DimensionMismatch, "initial guess length " +
                                           std::to_string(config.initial_guess.size()) +
                                           " does not match problem size " + std::to_string(n));
  }
  return config.initial_guess;
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double residual_norm1(const LinearMap& A, std::span<const double> b, std::span<const double> u,
                      std::span<double> work) {
  A(u, work);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += std::abs(b[i] - work[i]);
  return s;
}

struct CgOutcome {
  Vector u;
  Vector history;
  std::size_t iterations = 0;
  bool converged = false;
};

// Preconditioned CG for SPD A. The recurrence always runs on the recursively
// updated residual; the true residual b - A u only feeds the history and the
// stopping test, so iterates do not depend on the check interval.
CgOutcome preconditioned_cg(const LinearMap& A, const LinearMap* precondition,
                            std::span<const double> b, Vector u, double tol,
                            std::size_t max_iter, std::size_t interval) {
  const std::size_t n = b.size();
  CgOutcome out;
  Vector r(b.begin(), b.end());
  Vector work(n);
  if (!is_zero(u)) {
    A(u, work);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - work[i];
  }
  double res = norm1(r);
  out.history.push_back(res);
  if (res < tol) {
    out.u = std::move(u);
    out.converged = true;
    return out;
  }

  Vector z(n);
  if (precondition) {
    (*precondition)(r, z);
  } else {
    z = r;
  }
  double rz = dot(r, z);
  if (!(rz > 0.0)) {
    fail(ErrorCode::Breakdown, "preconditioned residual inner product is not positive");
  }
  Vector p = z;
  Vector q(n);

  for (std::size_t k = 1; k <= max_iter; ++k) {
    A(p, q);
    const double pq = dot(p, q);
    if (std::abs(pq) < kBreakdownThreshold) {
      fail(ErrorCode::Breakdown, "CG step length denominator vanished at iteration " +
                                     std::to_string(k));
    }
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += step * p[i];
      r[i] -= step * q[i];
    }
    out.iterations = k;

    const bool scheduled = interval > 0 && k % interval == 0;
    res = scheduled ? residual_norm1(A, b, u, work) : norm1(r);
    if (res < tol && !scheduled) res = residual_norm1(A, b, u, work);
    out.history.push_back(res);
    if (res < tol) {
      out.converged = true;
      break;
    }

    if (precondition) {
      (*precondition)(r, z);
    } else {
      std::copy(r.begin(), r.end(), z.begin());
    }
    const double rz_next = dot(r, z);
    if (precondition && !(rz_next > 0.0)) {
      fail(ErrorCode::Breakdown, "preconditioner lost positive definiteness at iteration " +
                                     std::to_string(k));
    }
    if (std::abs(rz) < kBreakdownThreshold) {
      fail(ErrorCode::Breakdown, "CG direction update denominator vanished");
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  out.u = std::move(u);
  return out;
}

double spd_residual(const GeneRankProblem& p, std::span<const double> xhat) {
  const Vector b = assemble_spd_rhs(p);
  Vector work(p.size());
  detail::apply_spd_kernel(p, xhat, work);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += std::abs(b[i] - work[i]);
  return s;
}

SolveReport finish(const GeneRankProblem& p, const SolverConfig& config, Method method,
                   SystemForm form, CgOutcome outcome, Clock::time_point start) {
  SolveReport report;
  report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  report.method = method;
  report.alpha = p.alpha();
  report.tol = config.tol;
  report.iterations = outcome.iterations;
  report.residual_history = std::move(outcome.history);
  report.converged = outcome.converged;
  report.solution = recover_solution(form, outcome.u, p.degrees());
  report.final_spd_residual = spd_residual(p, report.solution.xhat);
  return report;
}

GeneRankProblem for_config(const GeneRankProblem& p, const SolverConfig& config) {
  config.validate();
  Execution exec = config.deterministic ? Execution{1} : Execution::hardware();
  if (exec.threads == p.execution().threads) return p;
  return GeneRankProblem(p.shared_adjacency(), p.alpha(),
                         Vector(p.ex().begin(), p.ex().end()), exec);
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Cg: return "cg";
    case Method::PcgJacobi: return "pcg-jacobi";
    case Method::Chebyshev: return "chebyshev";
    case Method::CgMalpha: return "cg-malpha";
  }
  return "?";
}

std::string_view table_label(Method method) {
  switch (method) {
    case Method::Cg: return "CG";
    case Method::PcgJacobi: return "PCG";
    case Method::Chebyshev: return "Chebyshev";
    case Method::CgMalpha: return "CG-Malpha";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "cg") return Method::Cg;
  if (key == "pcg" || key == "pcg-jacobi" || key == "jacobi") return Method::PcgJacobi;
  if (key == "chebyshev" || key == "cheb") return Method::Chebyshev;
  if (key == "cg-malpha" || key == "cg-m" || key == "malpha") return Method::CgMalpha;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be at least 1");
}

SolveReport solve_cg(const GeneRankProblem& problem, const SolverConfig& config) {
  const GeneRankProblem p = for_config(problem, config);
  const Vector b = assemble_spd_rhs(p);
  const auto start = Clock::now();
  const LinearMap A = [&p](std::span<const double> v, std::span<double> out) {
    detail::apply_spd_kernel(p, v, out);
  };
  auto outcome = preconditioned_cg(A, nullptr, b, starting_point(config, p.size()), config.tol,
                                   config.max_iter, check_interval(config, p.size()));
  return finish(p, config, Method::Cg, SystemForm::Spd, std::move(outcome), start);
}

SolveReport solve_pcg_jacobi(const GeneRankProblem& problem, const SolverConfig& config) {
  const GeneRankProblem p = for_config(problem, config);
  const Vector b = assemble_scaled_rhs(p);
  const auto start = Clock::now();
  Vector scratch(p.size());
  const LinearMap S = [&p, &scratch](std::span<const double> v, std::span<double> out) {
    detail::combine_J(p, v, 1.0, -1.0, scratch, out);
  };
  auto outcome = preconditioned_cg(S, nullptr, b, starting_point(config, p.size()), config.tol,
                                   config.max_iter, check_interval(config, p.size()));
  return finish(p, config, Method::PcgJacobi, SystemForm::Scaled, std::move(outcome), start);
}

SolveReport solve_cg_malpha(const GeneRankProblem& problem, const SolverConfig& config) {
  const GeneRankProblem p = for_config(problem, config);
  const Vector b = assemble_scaled_rhs(p);
  const auto start = Clock::now();
  Vector scratch(p.size());
  const LinearMap S = [&p, &scratch](std::span<const double> v, std::span<double> out) {
    detail::combine_J(p, v, 1.0, -1.0, scratch, out);
  };
  const LinearMap M = [&p, &scratch](std::span<const double> v, std::span<double> out) {
    detail::combine_J(p, v, 1.0, 1.0, scratch, out);
  };
  auto outcome = preconditioned_cg(S, &M, b, starting_point(config, p.size()), config.tol,
                                   config.max_iter, check_interval(config, p.size()));
  return finish(p, config, Method::CgMalpha, SystemForm::Scaled, std::move(outcome), start);
}

SolveReport solve_chebyshev(const GeneRankProblem& problem, const SolverConfig& config) {
  const GeneRankProblem p = for_config(problem, config);
  const std::size_t n = p.size();
  const Vector b = assemble_spd_rhs(p);
  const auto d = p.degrees();
  const auto start = Clock::now();

  // Jacobi splitting of D - alpha W: the iteration matrix alpha D^{-1} W has
  // its spectrum in [-alpha, alpha].
  const double rho2 = p.alpha() * p.alpha();

  CgOutcome outcome;
  Vector prev = starting_point(config, n);
  Vector y = prev;
  Vector r(n);
  Vector work(n);
  auto update_residual = [&] {
    detail::apply_spd_kernel(p, y, work);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = b[i] - work[i];
      s += std::abs(r[i]);
    }
    return s;
  };

  double res = update_residual();
  outcome.history.push_back(res);
  if (res < config.tol) {
    outcome.converged = true;
  } else {
    // First step is the plain Jacobi sweep.
    for (std::size_t i = 0; i < n; ++i) y[i] = prev[i] + r[i] / d[i];
    double omega = 1.0;
    for (std::size_t k = 1;; ++k) {
      outcome.iterations = k;
      res = update_residual();
      outcome.history.push_back(res);
      if (res < config.tol) {
        outcome.converged = true;
        break;
      }
      if (k == config.max_iter) break;
      omega = (k == 1) ? 2.0 / (2.0 - rho2) : 1.0 / (1.0 - 0.25 * rho2 * omega);
      for (std::size_t i = 0; i < n; ++i) {
        const double next = omega * (r[i] / d[i] + y[i] - prev[i]) + prev[i];
        prev[i] = y[i];
        y[i] = next;
      }
    }
  }
  outcome.u = std::move(y);
  return finish(p, config, Method::Chebyshev, SystemForm::Spd, std::move(outcome), start);
}

SolveReport solve(const GeneRankProblem& problem, const SolverConfig& config) {
  switch (config.method) {
    case Method::Cg: return solve_cg(problem, config);
    case Method::PcgJacobi: return solve_pcg_jacobi(problem, config);
    case Method::Chebyshev: return solve_chebyshev(problem, config);
    case Method::CgMalpha: return solve_cg_malpha(problem, config);
  }
  fail(ErrorCode::InvalidArgument, "unknown solver method");
}

}  // namespace generank
