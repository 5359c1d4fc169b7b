#include "generank/generank.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "generank/bench.hpp"
#include "generank/datagen.hpp"
#include "generank/error.hpp"
#include "generank/matrix_market.hpp"
#include "generank/model.hpp"
#include "generank/report.hpp"
#include "generank/solvers.hpp"
#include "generank/spectral.hpp"

struct gr_matrix {
  std::shared_ptr<const generank::SparseSymMatrix> matrix;
};

struct gr_genes {
  std::vector<std::string> ids;
};

struct gr_problem {
  generank::GeneRankProblem problem;
};

struct gr_report {
  generank::SolveReport report;
};

struct gr_theorems {
  generank::TheoremReport report;
};

struct gr_bench {
  generank::BenchResult result;
  std::string table;
};

namespace {

using generank::ErrorCode;
using generank::fail;

thread_local std::string g_last_error;

template <typename Body>
gr_status guarded(Body&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return GR_OK;
  } catch (const generank::Error& e) {
    g_last_error = e.what();
    return static_cast<gr_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GR_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* ptr, const char* what) {
  if (ptr == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

void require_length(std::size_t expected, std::size_t got) {
  if (expected != got) {
    fail(ErrorCode::DimensionMismatch, "buffer length " + std::to_string(got) +
                                           " does not match dimension " + std::to_string(expected));
  }
}

generank::Method to_method(gr_method m) {
  switch (m) {
    case GR_METHOD_CG: return generank::Method::Cg;
    case GR_METHOD_PCG_JACOBI: return generank::Method::PcgJacobi;
    case GR_METHOD_CHEBYSHEV: return generank::Method::Chebyshev;
    case GR_METHOD_CG_MALPHA: return generank::Method::CgMalpha;
  }
  fail(ErrorCode::InvalidArgument, "unknown method");
}

gr_method from_method(generank::Method m) {
  switch (m) {
    case generank::Method::Cg: return GR_METHOD_CG;
    case generank::Method::PcgJacobi: return GR_METHOD_PCG_JACOBI;
    case generank::Method::Chebyshev: return GR_METHOD_CHEBYSHEV;
    case generank::Method::CgMalpha: return GR_METHOD_CG_MALPHA;
  }
  return GR_METHOD_CG;
}

generank::OperatorKind to_kind(gr_operator op) {
  switch (op) {
    case GR_OP_J: return generank::OperatorKind::J;
    case GR_OP_S: return generank::OperatorKind::S;
    case GR_OP_M: return generank::OperatorKind::M;
    case GR_OP_T: return generank::OperatorKind::T;
    case GR_OP_SPD: return generank::OperatorKind::Spd;
  }
  fail(ErrorCode::InvalidArgument, "unknown operator");
}

gr_matrix* wrap(generank::SparseSymMatrix m) {
  return new gr_matrix{std::make_shared<const generank::SparseSymMatrix>(std::move(m))};
}

const char* claim_field(const gr_theorems* t, std::size_t index,
                        const std::string generank::ClaimResult::*field) {
  if (t == nullptr || index >= t->report.claims.size()) return nullptr;
  return (t->report.claims[index].*field).c_str();
}

}  // namespace

extern "C" {

const char* gr_version(void) { return generank::kVersion; }

const char* gr_last_error(void) { return g_last_error.c_str(); }

const char* gr_status_string(gr_status status) {
  switch (status) {
    case GR_OK: return "ok";
    case GR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GR_ERR_DIMENSION: return "dimension mismatch";
    case GR_ERR_PARSE: return "parse error";
    case GR_ERR_IO: return "I/O error";
    case GR_ERR_VALIDATION: return "validation error";
    case GR_ERR_BREAKDOWN: return "solver breakdown";
    case GR_ERR_CAP_EXCEEDED: return "dense cap exceeded";
    case GR_ERR_SINGULAR: return "singular matrix";
    case GR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

gr_status gr_matrix_read_mm(const char* path, gr_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(generank::read_matrix_market(std::filesystem::path(path)));
  });
}

gr_status gr_matrix_write_mm(const gr_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix, "matrix");
    require(path, "path");
    generank::write_matrix_market(*matrix->matrix, std::filesystem::path(path));
  });
}

gr_status gr_matrix_from_edges(size_t n, const size_t* first, const size_t* second,
                               size_t edge_count, gr_matrix** out) {
  return guarded([&] {
    require(out, "out");
    if (edge_count > 0) {
      require(first, "first");
      require(second, "second");
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges(edge_count);
    for (std::size_t k = 0; k < edge_count; ++k) edges[k] = {first[k], second[k]};
    *out = wrap(generank::SparseSymMatrix::from_edges(n, edges));
  });
}

gr_status gr_matrix_renga(size_t n, double lambda, double beta, uint64_t seed, gr_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(generank::generate_renga({n, lambda, beta, seed}));
  });
}

gr_status gr_matrix_random(size_t n, double density, uint64_t seed, gr_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(generank::generate_random_adjacency(n, density, seed));
  });
}

gr_status gr_matrix_from_annotations(const char* tsv_path, gr_matrix** out, gr_genes** genes) {
  return guarded([&] {
    require(tsv_path, "tsv_path");
    require(out, "out");
    auto graph = generank::build_adjacency_from_annotations(
        generank::read_annotation_tsv(std::filesystem::path(tsv_path)));
    auto ids = std::make_unique<gr_genes>(gr_genes{std::move(graph.gene_ids)});
    *out = wrap(std::move(graph.adjacency));
    if (genes != nullptr) *genes = ids.release();
  });
}

size_t gr_matrix_dim(const gr_matrix* matrix) { return matrix ? matrix->matrix->size() : 0; }

size_t gr_matrix_nnz(const gr_matrix* matrix) { return matrix ? matrix->matrix->nnz() : 0; }

gr_status gr_matrix_spmv(const gr_matrix* matrix, const double* v, size_t n, double* out) {
  return guarded([&] {
    require(matrix, "matrix");
    require_length(matrix->matrix->size(), n);
    if (n > 0) {
      require(v, "v");
      require(out, "out");
    }
    generank::spmv(*matrix->matrix, std::span<const double>(v, n), std::span<double>(out, n));
  });
}

void gr_matrix_free(gr_matrix* matrix) { delete matrix; }

gr_status gr_genes_read(const char* path, gr_genes** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, std::string("cannot open ") + path);
    auto genes = std::make_unique<gr_genes>();
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) genes->ids.push_back(line);
    }
    *out = genes.release();
  });
}

gr_status gr_genes_write(const gr_genes* genes, const char* path) {
  return guarded([&] {
    require(genes, "genes");
    require(path, "path");
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, std::string("cannot open ") + path + " for writing");
    for (const auto& id : genes->ids) out << id << '\n';
    if (!out) fail(ErrorCode::Io, std::string("failed writing ") + path);
  });
}

size_t gr_genes_count(const gr_genes* genes) { return genes ? genes->ids.size() : 0; }

const char* gr_genes_at(const gr_genes* genes, size_t index) {
  if (genes == nullptr || index >= genes->ids.size()) return nullptr;
  return genes->ids[index].c_str();
}

void gr_genes_free(gr_genes* genes) { delete genes; }

gr_status gr_expression_make(gr_expression_kind kind, size_t n, uint64_t seed, const char* path,
                             const gr_genes* genes, double* out) {
  return guarded([&] {
    require(out, "out");
    generank::Vector ex;
    switch (kind) {
      case GR_EX_UNIFORM: ex = generank::uniform_expression(n); break;
      case GR_EX_RANDOM: ex = generank::random_expression(n, seed); break;
      case GR_EX_FILE: {
        require(path, "path");
        const auto data = generank::read_expression(std::filesystem::path(path));
        if (genes != nullptr) {
          ex = generank::align_expression(data, genes->ids);
        } else {
          ex = data.values;
        }
        break;
      }
      default: fail(ErrorCode::InvalidArgument, "unknown expression kind");
    }
    require_length(n, ex.size());
    std::copy(ex.begin(), ex.end(), out);
  });
}

gr_status gr_problem_create(const gr_matrix* adjacency, double alpha, const double* ex, size_t n,
                            gr_problem** out) {
  return guarded([&] {
    require(adjacency, "adjacency");
    require(out, "out");
    require_length(adjacency->matrix->size(), n);
    if (n > 0) require(ex, "ex");
    *out = new gr_problem{generank::GeneRankProblem(adjacency->matrix, alpha,
                                                    generank::Vector(ex, ex + n))};
  });
}

gr_status gr_problem_with_alpha(const gr_problem* problem, double alpha, gr_problem** out) {
  return guarded([&] {
    require(problem, "problem");
    require(out, "out");
    *out = new gr_problem{problem->problem.with_alpha(alpha)};
  });
}

size_t gr_problem_dim(const gr_problem* problem) { return problem ? problem->problem.size() : 0; }

double gr_problem_alpha(const gr_problem* problem) {
  return problem ? problem->problem.alpha() : 0.0;
}

gr_status gr_problem_degrees(const gr_problem* problem, double* out, size_t n) {
  return guarded([&] {
    require(problem, "problem");
    require(out, "out");
    require_length(problem->problem.size(), n);
    const auto d = problem->problem.degrees();
    std::copy(d.begin(), d.end(), out);
  });
}

gr_status gr_problem_apply(const gr_problem* problem, gr_operator op, const double* v, size_t n,
                           double* out) {
  return guarded([&] {
    require(problem, "problem");
    require_length(problem->problem.size(), n);
    if (n > 0) {
      require(v, "v");
      require(out, "out");
    }
    generank::OperatorHandle(problem->problem, to_kind(op))
        .apply(std::span<const double>(v, n), std::span<double>(out, n));
  });
}

void gr_problem_free(gr_problem* problem) { delete problem; }

gr_status gr_rank_genes(const double* x, size_t n, size_t* order) {
  return guarded([&] {
    if (n > 0) {
      require(x, "x");
      require(order, "order");
    }
    const auto ranking = generank::rank_genes(std::span<const double>(x, n));
    std::copy(ranking.begin(), ranking.end(), order);
  });
}

gr_solver_config gr_solver_config_default(void) {
  const generank::SolverConfig defaults;
  return gr_solver_config{from_method(defaults.method), defaults.tol, defaults.max_iter,
                          defaults.deterministic ? 1 : 0, defaults.residual_check_interval};
}

gr_status gr_method_parse(const char* name, gr_method* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto method = generank::parse_method(name);
    if (!method) fail(ErrorCode::InvalidArgument, std::string("unknown method '") + name + "'");
    *out = from_method(*method);
  });
}

const char* gr_method_name(gr_method method) {
  switch (method) {
    case GR_METHOD_CG: return "cg";
    case GR_METHOD_PCG_JACOBI: return "pcg-jacobi";
    case GR_METHOD_CHEBYSHEV: return "chebyshev";
    case GR_METHOD_CG_MALPHA: return "cg-malpha";
  }
  return "unknown";
}

gr_status gr_solve(const gr_problem* problem, const gr_solver_config* config, gr_report** out) {
  return guarded([&] {
    require(problem, "problem");
    require(config, "config");
    require(out, "out");
    generank::SolverConfig c;
    c.method = to_method(config->method);
    c.tol = config->tol;
    c.max_iter = config->max_iter;
    c.deterministic = config->deterministic != 0;
    c.residual_check_interval = config->residual_check_interval;
    *out = new gr_report{generank::solve(problem->problem, c)};
  });
}

gr_method gr_report_method(const gr_report* report) {
  return report ? from_method(report->report.method) : GR_METHOD_CG;
}

size_t gr_report_iterations(const gr_report* report) {
  return report ? report->report.iterations : 0;
}

int gr_report_converged(const gr_report* report) {
  return report && report->report.converged ? 1 : 0;
}

double gr_report_wall_time(const gr_report* report) {
  return report ? report->report.wall_time : 0.0;
}

double gr_report_final_spd_residual(const gr_report* report) {
  return report ? report->report.final_spd_residual : 0.0;
}

size_t gr_report_history_length(const gr_report* report) {
  return report ? report->report.residual_history.size() : 0;
}

gr_status gr_report_history(const gr_report* report, double* out, size_t length) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const auto& h = report->report.residual_history;
    require_length(h.size(), length);
    std::copy(h.begin(), h.end(), out);
  });
}

size_t gr_report_dim(const gr_report* report) {
  return report ? report->report.solution.x.size() : 0;
}

gr_status gr_report_solution(const gr_report* report, double* out, size_t n) {
  return guarded([&] {
    require(report, "report");
    const auto& x = report->report.solution.x;
    require_length(x.size(), n);
    if (n > 0) require(out, "out");
    std::copy(x.begin(), x.end(), out);
  });
}

gr_status gr_report_write_json(const gr_report* report, const gr_provenance* provenance,
                               const char* path) {
  return guarded([&] {
    require(report, "report");
    require(path, "path");
    generank::Provenance prov;
    if (provenance != nullptr) {
      prov.matrix = provenance->matrix ? provenance->matrix : "";
      prov.ex_kind = provenance->ex_kind ? provenance->ex_kind : "";
      prov.seed = provenance->seed;
      prov.nnz = provenance->nnz;
    }
    prov.n = report->report.solution.x.size();
    generank::write_report_json(report->report, prov, std::filesystem::path(path));
  });
}

gr_status gr_report_write_ranking(const gr_report* report, const gr_genes* genes,
                                  const char* path) {
  return guarded([&] {
    require(report, "report");
    require(path, "path");
    const std::vector<std::string> none;
    generank::write_ranking_csv(report->report.solution.x, genes ? genes->ids : none,
                                std::filesystem::path(path));
  });
}

void gr_report_free(gr_report* report) { delete report; }

gr_status gr_dense_spectrum(const gr_problem* problem, gr_operator op, size_t cap, double* out,
                            size_t n) {
  return guarded([&] {
    require(problem, "problem");
    require_length(problem->problem.size(), n);
    if (n > 0) require(out, "out");
    const auto values =
        generank::dense_spectrum(generank::OperatorHandle(problem->problem, to_kind(op)), cap);
    std::copy(values.begin(), values.end(), out);
  });
}

gr_status gr_lanczos_extremes(const gr_problem* problem, gr_operator op, size_t iters,
                              uint64_t seed, double* lambda_min, double* lambda_max,
                              int* breakdown) {
  return guarded([&] {
    require(problem, "problem");
    require(lambda_min, "lambda_min");
    require(lambda_max, "lambda_max");
    generank::LanczosOptions options;
    options.iters = iters;
    options.seed = seed;
    const auto result = generank::extreme_eigs_lanczos(
        generank::OperatorHandle(problem->problem, to_kind(op)), options);
    *lambda_min = result.lambda_min;
    *lambda_max = result.lambda_max;
    if (breakdown != nullptr) *breakdown = result.breakdown ? 1 : 0;
  });
}

gr_status gr_write_eigenvalues(const double* values, size_t n, const char* path) {
  return guarded([&] {
    require(path, "path");
    if (n > 0) require(values, "values");
    generank::write_eigenvalues_csv(std::span<const double>(values, n),
                                    std::filesystem::path(path));
  });
}

gr_status gr_check_theorems(const gr_problem* problem, size_t dense_cap, size_t lanczos_iters,
                            uint64_t seed, gr_theorems** out) {
  return guarded([&] {
    require(problem, "problem");
    require(out, "out");
    generank::TheoremCheckOptions options;
    options.dense_cap = dense_cap;
    options.lanczos_iters = lanczos_iters;
    options.seed = seed;
    *out = new gr_theorems{generank::check_theorems(problem->problem, options)};
  });
}

int gr_theorems_passed(const gr_theorems* report) {
  return report && report->report.passed() ? 1 : 0;
}

size_t gr_theorems_count(const gr_theorems* report) {
  return report ? report->report.claims.size() : 0;
}

const char* gr_theorems_id(const gr_theorems* report, size_t index) {
  return claim_field(report, index, &generank::ClaimResult::id);
}

const char* gr_theorems_statement(const gr_theorems* report, size_t index) {
  return claim_field(report, index, &generank::ClaimResult::statement);
}

const char* gr_theorems_detail(const gr_theorems* report, size_t index) {
  return claim_field(report, index, &generank::ClaimResult::detail);
}

gr_verdict gr_theorems_verdict(const gr_theorems* report, size_t index) {
  if (report == nullptr || index >= report->report.claims.size()) return GR_SKIPPED;
  switch (report->report.claims[index].verdict) {
    case generank::Verdict::Pass: return GR_PASS;
    case generank::Verdict::Fail: return GR_FAIL;
    case generank::Verdict::Skipped: return GR_SKIPPED;
  }
  return GR_SKIPPED;
}

double gr_theorems_cond_s(const gr_theorems* report) {
  return report ? report->report.spectral.cond_S : 0.0;
}

double gr_theorems_cond_t(const gr_theorems* report) {
  return report ? report->report.spectral.cond_T : 0.0;
}

void gr_theorems_free(gr_theorems* report) { delete report; }

gr_status gr_bench_run(const gr_bench_spec* spec, gr_bench** out) {
  return guarded([&] {
    require(spec, "spec");
    require(spec->matrix, "spec->matrix");
    require(out, "out");
    generank::BenchSpec b;
    b.matrix = spec->matrix->matrix;
    b.matrix_label = spec->matrix_label ? spec->matrix_label : "";
    require_length(b.matrix->size(), spec->n);
    if (spec->n > 0) require(spec->ex, "spec->ex");
    b.ex.assign(spec->ex, spec->ex + spec->n);
    b.ex_label = spec->ex_label ? spec->ex_label : "";
    if (spec->alpha_count > 0) {
      require(spec->alphas, "spec->alphas");
      b.alphas.assign(spec->alphas, spec->alphas + spec->alpha_count);
    }
    if (spec->method_count > 0) {
      require(spec->methods, "spec->methods");
      b.methods.clear();
      for (std::size_t k = 0; k < spec->method_count; ++k) b.methods.push_back(to_method(spec->methods[k]));
    }
    if (spec->tol > 0.0) b.tol = spec->tol;
    if (spec->max_iter > 0) b.max_iter = spec->max_iter;
    if (spec->reps > 0) b.reps = spec->reps;
    auto bench = std::make_unique<gr_bench>();
    bench->result = generank::run_bench(b);
    bench->table = bench->result.to_table();
    *out = bench.release();
  });
}

int gr_bench_all_converged(const gr_bench* bench) {
  return bench && bench->result.all_converged() ? 1 : 0;
}

size_t gr_bench_cell_count(const gr_bench* bench) {
  return bench ? bench->result.cells.size() : 0;
}

gr_status gr_bench_cell(const gr_bench* bench, size_t index, double* alpha, gr_method* method,
                        size_t* iterations, int* converged, double* median_seconds,
                        double* setup_seconds) {
  return guarded([&] {
    require(bench, "bench");
    if (index >= bench->result.cells.size()) fail(ErrorCode::InvalidArgument, "cell index out of range");
    const auto& cell = bench->result.cells[index];
    if (alpha) *alpha = cell.alpha;
    if (method) *method = from_method(cell.method);
    if (iterations) *iterations = cell.iterations;
    if (converged) *converged = cell.converged && cell.error.empty() ? 1 : 0;
    if (median_seconds) *median_seconds = cell.median_seconds;
    if (setup_seconds) *setup_seconds = cell.setup_seconds;
  });
}

const char* gr_bench_table(const gr_bench* bench) { return bench ? bench->table.c_str() : ""; }

gr_status gr_bench_write_csv(const gr_bench* bench, const char* path) {
  return guarded([&] {
    require(bench, "bench");
    require(path, "path");
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, std::string("cannot open ") + path + " for writing");
    bench->result.write_csv(out);
    if (!out) fail(ErrorCode::Io, std::string("failed writing ") + path);
  });
}

void gr_bench_free(gr_bench* bench) { delete bench; }

}  // extern "C"
