// generank command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "generank/generank.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kArgument = 2,
  kNotConverged = 3,
  kVerifyFailed = 4,
};

struct ApiFailure {
  gr_status status;
  std::string message;
};

void check(gr_status status, const std::string& what) {
  if (status != GR_OK) {
    throw ApiFailure{status, what + ": " + gr_status_string(status) + ": " + gr_last_error()};
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using MatrixPtr = std::unique_ptr<gr_matrix, Deleter<gr_matrix, gr_matrix_free>>;
using GenesPtr = std::unique_ptr<gr_genes, Deleter<gr_genes, gr_genes_free>>;
using ProblemPtr = std::unique_ptr<gr_problem, Deleter<gr_problem, gr_problem_free>>;
using ReportPtr = std::unique_ptr<gr_report, Deleter<gr_report, gr_report_free>>;
using TheoremsPtr = std::unique_ptr<gr_theorems, Deleter<gr_theorems, gr_theorems_free>>;
using BenchPtr = std::unique_ptr<gr_bench, Deleter<gr_bench, gr_bench_free>>;

struct AlphaRange : CLI::Validator {
  AlphaRange() {
    name_ = "ALPHA";
    func_ = [](const std::string& s) -> std::string {
      double a = 0.0;
      if (!CLI::detail::lexical_cast(s, a)) return "alpha must be a number";
      if (!(a > 0.0 && a < 1.0)) return "alpha must lie strictly between 0 and 1, got " + s;
      return {};
    };
  }
};
const AlphaRange kAlpha;

// Where the adjacency comes from. Shared by solve, bench, verify and spectrum.
struct MatrixSource {
  std::string path;
  std::size_t renga_n = 0;
  double lambda = 0.9;
  double beta = 1.0;
  std::size_t random_n = 0;
  double density = 0.1;
  uint64_t seed = 0;
  std::string genes_path;

  void add_options(CLI::App& app) {
    auto* m = app.add_option("--matrix", path, "Matrix Market adjacency file")->check(CLI::ExistingFile);
    auto* r = app.add_option("--renga-n", renga_n, "Generate a RENGA graph of this size instead");
    auto* g = app.add_option("--random-n", random_n, "Generate a G(n,p) graph of this size instead");
    m->excludes(r)->excludes(g);
    r->excludes(g);
    app.add_option("--lambda", lambda, "RENGA range decay")->capture_default_str();
    app.add_option("--beta", beta, "RENGA range-1 probability")->capture_default_str();
    app.add_option("--density", density, "Edge probability for --random-n")->capture_default_str();
    app.add_option("--seed", seed, "Seed for generated graphs and random expression")
        ->capture_default_str();
    app.add_option("--genes", genes_path, "Gene identifiers, one per line, in row order")
        ->check(CLI::ExistingFile);
  }

  std::string label() const {
    std::ostringstream s;
    if (!path.empty()) {
      s << path;
    } else if (renga_n > 0) {
      s << "renga(n=" << renga_n << ",lambda=" << lambda << ",beta=" << beta << ",seed=" << seed
        << ")";
    } else {
      s << "random(n=" << random_n << ",density=" << density << ",seed=" << seed << ")";
    }
    return s.str();
  }

  MatrixPtr load() const {
    gr_matrix* m = nullptr;
    if (!path.empty()) {
      check(gr_matrix_read_mm(path.c_str(), &m), "reading " + path);
    } else if (renga_n > 0) {
      check(gr_matrix_renga(renga_n, lambda, beta, seed, &m), "generating RENGA graph");
    } else if (random_n > 0) {
      check(gr_matrix_random(random_n, density, seed, &m), "generating random graph");
    } else {
      throw CLI::ValidationError("one of --matrix, --renga-n or --random-n is required");
    }
    return MatrixPtr(m);
  }

  GenesPtr load_genes() const {
    if (genes_path.empty()) return nullptr;
    gr_genes* g = nullptr;
    check(gr_genes_read(genes_path.c_str(), &g), "reading " + genes_path);
    return GenesPtr(g);
  }
};

struct ExpressionSource {
  std::string kind = "uniform";
  std::string file;

  void add_options(CLI::App& app) {
    app.add_option("--ex", kind, "Expression vector: uniform, random or file")
        ->check(CLI::IsMember({"uniform", "random", "file"}))
        ->capture_default_str();
    app.add_option("--ex-file", file, "Expression values for --ex file")->check(CLI::ExistingFile);
  }

  std::vector<double> make(std::size_t n, uint64_t seed, const gr_genes* genes) const {
    gr_expression_kind k = GR_EX_UNIFORM;
    if (kind == "random") k = GR_EX_RANDOM;
    if (kind == "file") {
      if (file.empty()) throw CLI::ValidationError("--ex file requires --ex-file");
      k = GR_EX_FILE;
    }
    std::vector<double> ex(n);
    check(gr_expression_make(k, n, seed, file.empty() ? nullptr : file.c_str(), genes, ex.data()),
          "building expression vector");
    return ex;
  }
};

std::vector<gr_method> parse_methods(const std::vector<std::string>& names) {
  std::vector<gr_method> out;
  for (const auto& name : names) {
    gr_method m;
    if (gr_method_parse(name.c_str(), &m) != GR_OK) {
      throw CLI::ValidationError("--method", "unknown method '" + name + "'");
    }
    out.push_back(m);
  }
  return out;
}

void write_sidecar(const fs::path& mtx, json meta) {
  meta["generank_version"] = gr_version();
  meta["matrix_file"] = mtx.filename().string();
  std::ofstream out(mtx.string() + ".meta.json");
  if (!out) throw ApiFailure{GR_ERR_IO, "cannot write sidecar for " + mtx.string()};
  out << meta.dump(2) << "\n";
}

// ---- generate -------------------------------------------------------------

struct GenerateRenga {
  std::size_t n = 0;
  double lambda = 0.9;
  double beta = 1.0;
  uint64_t seed = 0;
  std::string out;

  int run() const {
    gr_matrix* raw = nullptr;
    check(gr_matrix_renga(n, lambda, beta, seed, &raw), "generating RENGA graph");
    MatrixPtr m(raw);
    const fs::path path = out.empty() ? "renga_n" + std::to_string(n) + "_s" + std::to_string(seed) + ".mtx"
                                      : out;
    check(gr_matrix_write_mm(m.get(), path.string().c_str()), "writing " + path.string());
    write_sidecar(path, {{"generator", "renga"},
                         {"n", n},
                         {"lambda", lambda},
                         {"beta", beta},
                         {"seed", seed},
                         {"nnz", gr_matrix_nnz(m.get())}});
    std::cout << "wrote " << path.string() << " (n=" << n << ", nnz=" << gr_matrix_nnz(m.get())
              << ")\n";
    return kOk;
  }
};

struct GenerateAnnotations {
  std::string tsv;
  std::string out;

  int run() const {
    gr_matrix* raw = nullptr;
    gr_genes* genes_raw = nullptr;
    check(gr_matrix_from_annotations(tsv.c_str(), &raw, &genes_raw), "reading " + tsv);
    MatrixPtr m(raw);
    GenesPtr genes(genes_raw);
    fs::path path = out.empty() ? fs::path(tsv).replace_extension(".mtx") : fs::path(out);
    const fs::path genes_path = fs::path(path).replace_extension(".genes.txt");
    check(gr_matrix_write_mm(m.get(), path.string().c_str()), "writing " + path.string());
    check(gr_genes_write(genes.get(), genes_path.string().c_str()), "writing " + genes_path.string());
    write_sidecar(path, {{"generator", "annotations"},
                         {"source", tsv},
                         {"genes_file", genes_path.filename().string()},
                         {"n", gr_matrix_dim(m.get())},
                         {"nnz", gr_matrix_nnz(m.get())}});
    std::cout << "wrote " << path.string() << " and " << genes_path.string()
              << " (genes=" << gr_matrix_dim(m.get()) << ", nnz=" << gr_matrix_nnz(m.get())
              << ")\n";
    return kOk;
  }
};

// ---- solve ------------------------------------------------------------------

struct Solve {
  MatrixSource source;
  ExpressionSource expression;
  double alpha = 0.85;
  double tol = 1e-10;
  std::string method = "cg-malpha";
  std::size_t max_iter = 10000;
  std::size_t check_interval = GR_RESIDUAL_CHECK_AUTO;
  bool parallel = false;
  std::string out_dir = ".";

  int run() const {
    const gr_method m = parse_methods({method}).front();
    MatrixPtr matrix = source.load();
    GenesPtr genes = source.load_genes();
    const std::size_t n = gr_matrix_dim(matrix.get());
    const auto ex = expression.make(n, source.seed, genes.get());

    gr_problem* praw = nullptr;
    check(gr_problem_create(matrix.get(), alpha, ex.data(), n, &praw), "building problem");
    ProblemPtr problem(praw);

    gr_solver_config config = gr_solver_config_default();
    config.method = m;
    config.tol = tol;
    config.max_iter = max_iter;
    config.deterministic = parallel ? 0 : 1;
    config.residual_check_interval = check_interval;

    gr_report* rraw = nullptr;
    check(gr_solve(problem.get(), &config, &rraw), "solving");
    ReportPtr report(rraw);

    fs::create_directories(out_dir);
    const std::string label = source.label();
    gr_provenance prov{label.c_str(), expression.kind.c_str(), source.seed,
                       gr_matrix_nnz(matrix.get())};
    const fs::path json_path = fs::path(out_dir) / "report.json";
    const fs::path csv_path = fs::path(out_dir) / "ranking.csv";
    check(gr_report_write_json(report.get(), &prov, json_path.string().c_str()), "writing report");
    check(gr_report_write_ranking(report.get(), genes.get(), csv_path.string().c_str()),
          "writing ranking");

    const bool converged = gr_report_converged(report.get()) != 0;
    std::cout << gr_method_name(m) << " alpha=" << alpha << " n=" << n
              << " iterations=" << gr_report_iterations(report.get())
              << " converged=" << (converged ? "yes" : "no")
              << " time=" << gr_report_wall_time(report.get()) << "s\n"
              << "wrote " << json_path.string() << " and " << csv_path.string() << "\n";
    return converged ? kOk : kNotConverged;
  }
};

// ---- bench ------------------------------------------------------------------

struct Bench {
  MatrixSource source;
  ExpressionSource expression;
  std::vector<double> alphas{0.5, 0.75, 0.80, 0.99};
  std::vector<std::string> methods{"cg", "pcg-jacobi", "chebyshev", "cg-malpha"};
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  std::size_t reps = 1;
  std::string out_dir = ".";

  int run() const {
    const auto ms = parse_methods(methods);
    MatrixPtr matrix = source.load();
    GenesPtr genes = source.load_genes();
    const std::size_t n = gr_matrix_dim(matrix.get());
    const auto ex = expression.make(n, source.seed, genes.get());
    const std::string label = source.label();

    gr_bench_spec spec{};
    spec.matrix = matrix.get();
    spec.matrix_label = label.c_str();
    spec.ex = ex.data();
    spec.n = n;
    spec.ex_label = expression.kind.c_str();
    spec.alphas = alphas.data();
    spec.alpha_count = alphas.size();
    spec.methods = ms.data();
    spec.method_count = ms.size();
    spec.tol = tol;
    spec.max_iter = max_iter;
    spec.reps = reps;

    gr_bench* braw = nullptr;
    check(gr_bench_run(&spec, &braw), "running benchmark");
    BenchPtr bench(braw);

    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / "bench.csv";
    const fs::path txt_path = fs::path(out_dir) / "bench.txt";
    check(gr_bench_write_csv(bench.get(), csv_path.string().c_str()), "writing bench CSV");
    std::ofstream txt(txt_path);
    txt << gr_bench_table(bench.get());
    if (!txt) throw ApiFailure{GR_ERR_IO, "cannot write " + txt_path.string()};
    std::cout << gr_bench_table(bench.get()) << "wrote " << csv_path.string() << " and "
              << txt_path.string() << "\n";
    return gr_bench_all_converged(bench.get()) ? kOk : kNotConverged;
  }
};

// ---- verify -----------------------------------------------------------------

struct Verify {
  MatrixSource source;
  std::vector<double> alphas{0.5, 0.75, 0.80, 0.99};
  std::size_t dense_cap = 2000;
  std::size_t lanczos_iters = 1500;
  std::size_t instances = 1;
  bool quiet = false;

  // Runs every claim for one graph; returns the number of failed claims.
  std::size_t check_graph(const gr_matrix* matrix, const std::string& label) const {
    const std::size_t n = gr_matrix_dim(matrix);
    const std::vector<double> ex(n, 1.0 / static_cast<double>(n));
    std::size_t failures = 0;
    for (double alpha : alphas) {
      gr_problem* praw = nullptr;
      check(gr_problem_create(matrix, alpha, ex.data(), n, &praw), "building problem");
      ProblemPtr problem(praw);
      gr_theorems* traw = nullptr;
      check(gr_check_theorems(problem.get(), dense_cap, lanczos_iters, source.seed, &traw),
            "checking theorems");
      TheoremsPtr t(traw);
      const std::size_t count = gr_theorems_count(t.get());
      std::size_t passed = 0;
      for (std::size_t i = 0; i < count; ++i) {
        const gr_verdict v = gr_theorems_verdict(t.get(), i);
        if (v != GR_FAIL) ++passed;
        if (!quiet || v == GR_FAIL) {
          std::printf("  [%s] %-24s %s | %s\n",
                      v == GR_PASS ? "PASS" : v == GR_FAIL ? "FAIL" : "SKIP",
                      gr_theorems_id(t.get(), i), gr_theorems_statement(t.get(), i),
                      gr_theorems_detail(t.get(), i));
        }
      }
      failures += count - passed;
      std::printf("%s alpha=%g: %zu/%zu claims hold (cond S=%.6g, cond T=%.6g)\n", label.c_str(),
                  alpha, passed, count, gr_theorems_cond_s(t.get()), gr_theorems_cond_t(t.get()));
    }
    return failures;
  }

  int run() {
    std::size_t failures = 0;
    if (source.random_n > 0 && instances > 1) {
      const uint64_t first = source.seed;
      for (std::size_t k = 0; k < instances; ++k) {
        MatrixSource one = source;
        one.seed = first + k;
        MatrixPtr m = one.load();
        failures += check_graph(m.get(), one.label());
      }
    } else {
      MatrixPtr m = source.load();
      failures += check_graph(m.get(), source.label());
    }
    std::printf("verification %s (%zu failed claims)\n", failures == 0 ? "passed" : "FAILED",
                failures);
    return failures == 0 ? kOk : kVerifyFailed;
  }
};

// ---- spectrum -----------------------------------------------------------------

struct Spectrum {
  MatrixSource source;
  double alpha = 0.85;
  std::string op = "S";
  std::size_t dense_cap = 2000;
  std::string out = "eigenvalues.csv";

  int run() const {
    static const std::map<std::string, gr_operator> kOps{
        {"J", GR_OP_J}, {"S", GR_OP_S}, {"M", GR_OP_M}, {"T", GR_OP_T}, {"SPD", GR_OP_SPD}};
    MatrixPtr matrix = source.load();
    const std::size_t n = gr_matrix_dim(matrix.get());
    const std::vector<double> ex(n, 1.0 / static_cast<double>(n));
    gr_problem* praw = nullptr;
    check(gr_problem_create(matrix.get(), alpha, ex.data(), n, &praw), "building problem");
    ProblemPtr problem(praw);
    std::vector<double> values(n);
    check(gr_dense_spectrum(problem.get(), kOps.at(op), dense_cap, values.data(), n),
          "computing spectrum");
    check(gr_write_eigenvalues(values.data(), n, out.c_str()), "writing " + out);
    if (n > 0) {
      std::printf("%s spectrum: n=%zu min=%.17g max=%.17g\nwrote %s\n", op.c_str(), n,
                  values.front(), values.back(), out.c_str());
    }
    return kOk;
  }
};

int exit_for(gr_status status) {
  switch (status) {
    case GR_ERR_INVALID_ARGUMENT:
    case GR_ERR_CAP_EXCEEDED:
      return kArgument;
    default:
      return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GeneRank solvers with the I + J_alpha polynomial preconditioner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gr_version()));

  auto* generate = app.add_subcommand("generate", "Write a graph instance as Matrix Market");
  generate->require_subcommand(1);
  GenerateRenga renga;
  auto* renga_cmd = generate->add_subcommand("renga", "Range-dependent random graph");
  renga_cmd->add_option("--n", renga.n, "Number of nodes")->required()->check(CLI::Range(2ul, SIZE_MAX));
  renga_cmd->add_option("--lambda", renga.lambda, "Range decay in [0,1)")->capture_default_str();
  renga_cmd->add_option("--beta", renga.beta, "Range-1 probability in (0,1]")->capture_default_str();
  renga_cmd->add_option("--seed", renga.seed, "Generator seed")->capture_default_str();
  renga_cmd->add_option("--out", renga.out, "Output .mtx path");

  GenerateAnnotations annotations;
  auto* ann_cmd = generate->add_subcommand("from-annotations", "Shared-annotation gene graph");
  ann_cmd->add_option("tsv", annotations.tsv, "gene<TAB>annotation file")
      ->required()
      ->check(CLI::ExistingFile);
  ann_cmd->add_option("--out", annotations.out, "Output .mtx path");

  Solve solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one GeneRank system");
  solve.source.add_options(*solve_cmd);
  solve.expression.add_options(*solve_cmd);
  solve_cmd->add_option("--alpha", solve.alpha, "Damping factor in (0,1)")
      ->check(kAlpha)
      ->capture_default_str();
  solve_cmd->add_option("--tol", solve.tol, "Stop when the 1-norm residual drops below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--method", solve.method, "cg, pcg-jacobi, chebyshev or cg-malpha")
      ->capture_default_str();
  solve_cmd->add_option("--max-iter", solve.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--check-interval", solve.check_interval,
                        "Iterations between true-residual checks (0 = recursive residual only)");
  solve_cmd->add_flag("--parallel", solve.parallel, "Multithreaded mat-vecs (not bit-reproducible)");
  solve_cmd->add_option("--out-dir", solve.out_dir, "Directory for report.json and ranking.csv")
      ->capture_default_str();

  Bench bench;
  auto* bench_cmd = app.add_subcommand("bench", "Iterations and wall time over an alpha grid");
  bench.source.add_options(*bench_cmd);
  bench.expression.add_options(*bench_cmd);
  bench_cmd->add_option("--alpha", bench.alphas, "Alpha grid")->check(kAlpha)->capture_default_str();
  bench_cmd->add_option("--method,--methods", bench.methods, "Methods to run")->capture_default_str();
  bench_cmd->add_option("--tol", bench.tol)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--max-iter", bench.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "Timing repetitions (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for bench.csv and bench.txt")
      ->capture_default_str();

  Verify verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the spectral claims and M-matrix properties");
  verify.source.add_options(*verify_cmd);
  verify_cmd->add_option("--alpha", verify.alphas, "Alpha grid")->check(kAlpha)->capture_default_str();
  verify_cmd->add_option("--dense-cap", verify.dense_cap, "Largest n for dense eigensolves")
      ->capture_default_str();
  verify_cmd->add_option("--lanczos-iters", verify.lanczos_iters)->capture_default_str();
  verify_cmd->add_option("--instances", verify.instances,
                         "With --random-n, check this many graphs with consecutive seeds")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--quiet", verify.quiet, "Print only failing claims and summaries");

  Spectrum spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Export the dense spectrum of an operator");
  spectrum.source.add_options(*spectrum_cmd);
  spectrum_cmd->add_option("--alpha", spectrum.alpha)->check(kAlpha)->capture_default_str();
  spectrum_cmd->add_option("--operator", spectrum.op, "J, S, M, T or SPD")
      ->check(CLI::IsMember({"J", "S", "M", "T", "SPD"}, CLI::ignore_case))
      ->capture_default_str();
  spectrum_cmd->add_option("--dense-cap", spectrum.dense_cap)->capture_default_str();
  spectrum_cmd->add_option("--out", spectrum.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgument;
  }

  try {
    if (renga_cmd->parsed()) return renga.run();
    if (ann_cmd->parsed()) return annotations.run();
    if (solve_cmd->parsed()) return solve.run();
    if (bench_cmd->parsed()) return bench.run();
    if (verify_cmd->parsed()) return verify.run();
    if (spectrum_cmd->parsed()) return spectrum.run();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kArgument;
  } catch (const ApiFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return exit_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
