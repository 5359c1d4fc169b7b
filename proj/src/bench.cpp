#include "generank/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "generank/error.hpp"

namespace generank {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void BenchSpec::validate() const {
  if (!matrix) fail(ErrorCode::InvalidArgument, "bench: no matrix");
  if (ex.size() != matrix->size()) {
    fail(ErrorCode::DimensionMismatch, "bench: expression vector length does not match matrix");
  }
  if (alphas.empty()) fail(ErrorCode::InvalidArgument, "bench: empty alpha grid");
  for (double a : alphas) validate_alpha(a);
  if (methods.empty()) fail(ErrorCode::InvalidArgument, "bench: no methods");
  if (reps < 1) fail(ErrorCode::InvalidArgument, "bench: repetitions must be at least 1");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "bench: tol must be positive");
}

const BenchCell* BenchResult::find(double alpha, Method method) const {
  for (const auto& cell : cells) {
    if (cell.alpha == alpha && cell.method == method) return &cell;
  }
  return nullptr;
}

bool BenchResult::all_converged() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const BenchCell& c) { return c.converged && c.error.empty(); });
}

std::string BenchResult::to_table() const {
  std::ostringstream out;
  char buf[64];
  out << "matrix: " << spec.matrix_label << "   ex: " << spec.ex_label << "   tol: ";
  std::snprintf(buf, sizeof buf, "%g", spec.tol);
  out << buf << '\n';
  std::snprintf(buf, sizeof buf, "%-12s", "alpha");
  out << buf;
  for (double a : spec.alphas) {
    std::snprintf(buf, sizeof buf, "%16.2f", a);
    out << buf;
  }
  out << '\n';
  for (Method m : spec.methods) {
    std::snprintf(buf, sizeof buf, "%-12s", std::string(table_label(m)).c_str());
    out << buf;
    for (double a : spec.alphas) {
      const BenchCell* cell = find(a, m);
      std::string text = "DNF";
      if (cell && cell->error.empty() && cell->converged) {
        std::snprintf(buf, sizeof buf, "%zu(%.3f)", cell->iterations, cell->median_seconds);
        text = buf;
      }
      std::snprintf(buf, sizeof buf, "%16s", text.c_str());
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

void BenchResult::write_csv(std::ostream& out) const {
  out << "matrix,alpha,method,iterations,wall_time_seconds,setup_seconds,converged,"
         "final_spd_residual\n";
  char buf[160];
  const std::string label = csv_field(spec.matrix_label);
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.2f,%s,%zu,%.6f,%.6f,%s,%.6g", c.alpha,
                  std::string(table_label(c.method)).c_str(), c.iterations, c.median_seconds,
                  c.setup_seconds, c.error.empty() && c.converged ? "yes" : "DNF",
                  c.final_spd_residual);
    out << label << ',' << buf << '\n';
  }
}

BenchResult run_bench(const BenchSpec& spec) {
  spec.validate();
  using Clock = std::chrono::steady_clock;
  BenchResult result;
  result.spec = spec;
  for (double alpha : spec.alphas) {
    const auto setup_start = Clock::now();
    const GeneRankProblem problem(spec.matrix, alpha, spec.ex);
    const double setup = std::chrono::duration<double>(Clock::now() - setup_start).count();
    for (Method method : spec.methods) {
      BenchCell cell;
      cell.alpha = alpha;
      cell.method = method;
      cell.setup_seconds = setup;
      SolverConfig config;
      config.method = method;
      config.tol = spec.tol;
      config.max_iter = spec.max_iter;
      config.residual_check_interval = spec.residual_check_interval;
      std::vector<double> times;
      try {
        for (std::size_t r = 0; r < spec.reps; ++r) {
          const SolveReport report = solve(problem, config);
          times.push_back(report.wall_time);
          cell.iterations = report.iterations;
          cell.converged = report.converged;
          cell.final_spd_residual = report.final_spd_residual;
        }
        cell.median_seconds = median(times);
      } catch (const Error& e) {
        cell.error = e.what();
        cell.converged = false;
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace generank
