// Acceptance suite: prints one PASS/FAIL line per criterion, with the measured
// values underneath. Usage: acceptance <path-to-generank-cli> [criterion...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "generank/bench.hpp"
#include "generank/datagen.hpp"
#include "generank/model.hpp"
#include "generank/solvers.hpp"
#include "generank/spectral.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace generank;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "met     " : "MISSED  ") + what);
  }
  void note(const std::string& what) { notes.push_back("        " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kAlphas{0.5, 0.75, 0.80, 0.99};

// ---- 1: theorem suite ---------------------------------------------------------

Outcome theorem_suite() {
  Outcome out;
  const auto start = Clock::now();
  std::size_t checked = 0, failed = 0;
  double worst_lmin = 0, worst_map = 0, worst_cond_slack = -1e300, min_T_margin = 1e300,
         max_T = -1e300;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto W = std::make_shared<const SparseSymMatrix>(generate_random_adjacency(50, 0.10, seed));
    for (double alpha : kAlphas) {
      const GeneRankProblem p(W, alpha, uniform_expression(50));
      const auto r = check_theorems(p);
      ++checked;
      if (!r.passed()) {
        ++failed;
        for (const auto& c : r.claims)
          if (c.verdict != Verdict::Pass)
            out.note(fmt("seed %llu alpha %.2f %s: %s %s", (unsigned long long)seed, alpha,
                         c.id.c_str(), std::string(to_string(c.verdict)).c_str(), c.detail.c_str()));
      }
      // Measured margins, recomputed from the dense spectra.
      const auto sS = dense_spectrum(OperatorHandle(p, OperatorKind::S));
      const auto sT = dense_spectrum(OperatorHandle(p, OperatorKind::T));
      if (p.has_edges()) worst_lmin = std::max(worst_lmin, std::abs(sS.front() - (1 - alpha)));
      Vector mapped(sS.size());
      std::transform(sS.begin(), sS.end(), mapped.begin(),
                     [](double l) { return 1 - (1 - l) * (1 - l); });
      std::sort(mapped.begin(), mapped.end());
      for (std::size_t i = 0; i < mapped.size(); ++i)
        worst_map = std::max(worst_map, std::abs(mapped[i] - sT[i]));
      worst_cond_slack =
          std::max(worst_cond_slack, sT.back() / sT.front() - sS.back() / sS.front());
      min_T_margin = std::min(min_T_margin, sT.front() - (1 - alpha * alpha));
      max_T = std::max(max_T, sT.back());
    }
  }
  const double elapsed = seconds_since(start);
  out.expect(failed == 0, fmt("%zu/%zu instances pass every claim", checked - failed, checked));
  out.expect(worst_lmin <= 1e-10, fmt("max |lambda_min(S) - (1-alpha)| = %.3g (<= 1e-10)", worst_lmin));
  out.expect(min_T_margin >= -1e-10 && max_T <= 1 + 1e-12,
             fmt("min(lambda_min(T) - (1-alpha^2)) = %.3g, max lambda(T) = %.17g", min_T_margin, max_T));
  out.expect(worst_map <= 1e-10, fmt("max mapping deviation = %.3g (<= 1e-10)", worst_map));
  out.expect(worst_cond_slack <= 1e-8, fmt("max cond(T) - cond(S) = %.4g (<= 1e-8)", worst_cond_slack));
  out.expect(elapsed < 120, fmt("runtime %.1f s (< 120 s)", elapsed));
  return out;
}

// ---- 2: solver agreement --------------------------------------------------------

Outcome solver_agreement() {
  Outcome out;
  const auto start = Clock::now();
  double worst = 0;
  std::size_t unconverged = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t n = 100 + 20 * k;
    const double density = 0.02 + 0.005 * static_cast<double>(k % 5);
    auto W = std::make_shared<const SparseSymMatrix>(generate_random_adjacency(n, density, 500 + k));
    const auto ex = random_expression(n, k);
    const double alpha = kAlphas[k % 4];
    const GeneRankProblem p(W, alpha, ex);
    const auto exact = oracle::generank_scores(oracle::to_dense(*W), alpha, ex);
    for (Method m : kAllMethods) {
      SolverConfig c;
      c.method = m;
      c.tol = 1e-12;
      const auto r = solve(p, c);
      if (!r.converged) ++unconverged;
      worst = std::max(worst, oracle::rel_inf_error(r.solution.x, exact));
    }
  }
  const double elapsed = seconds_since(start);
  out.expect(unconverged == 0, fmt("%zu unconverged solves out of 80", unconverged));
  out.expect(worst <= 1e-7, fmt("max relative inf-norm error vs dense solve = %.3g (<= 1e-7)", worst));
  out.expect(elapsed < 60, fmt("runtime %.1f s (< 60 s)", elapsed));
  return out;
}

// ---- 3, 4, 5: RENGA grids ------------------------------------------------------

struct Grid {
  std::size_t n = 0;
  BenchResult result;
  double seconds = 0;
};

const std::map<Method, std::vector<double>> kPaper100k{
    {Method::Cg, {43, 47, 48, 129}},
    {Method::PcgJacobi, {14, 22, 24, 95}},
    {Method::Chebyshev, {17, 27, 31, 127}},
    {Method::CgMalpha, {8, 12, 14, 53}},
};
const std::map<Method, std::vector<double>> kPaper500k{
    {Method::CgMalpha, {7, 12, 14, 50}},
};

Grid& renga_grid(std::size_t n) {
  static std::map<std::size_t, Grid> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto start = Clock::now();
  BenchSpec spec;
  spec.matrix = std::make_shared<const SparseSymMatrix>(
      generate_renga({.n = n, .lambda = 0.9, .beta = 1.0, .seed = 1}));
  spec.matrix_label = fmt("RENGA n=%zu", n);
  spec.ex = uniform_expression(n);
  spec.ex_label = "uniform";
  spec.tol = 1e-10;
  spec.reps = 3;
  Grid g{n, run_bench(spec), 0};
  g.seconds = seconds_since(start);
  return cache.emplace(n, std::move(g)).first->second;
}

void add_table(Outcome& out, const Grid& g) {
  std::istringstream table(g.result.to_table());
  for (std::string line; std::getline(table, line);) out.note(line);
}

Outcome table_reproduction() {
  Outcome out;
  double total = 0;
  for (std::size_t n : {std::size_t{100000}, std::size_t{500000}}) {
    const Grid& g = renga_grid(n);
    total += g.seconds;
    add_table(out, g);
    const auto& paper = n == 100000 ? kPaper100k : kPaper500k;
    for (const auto& [method, counts] : paper) {
      for (std::size_t a = 0; a < kAlphas.size(); ++a) {
        const BenchCell* cell = g.result.find(kAlphas[a], method);
        const double got = cell && cell->converged ? static_cast<double>(cell->iterations) : -1;
        const double ratio = got / counts[a];
        out.expect(ratio >= 0.7 && ratio <= 1.3,
                   fmt("n=%zu %-9s alpha=%.2f: %g iterations vs %g (ratio %.2f, band 0.70-1.30)", n,
                       std::string(table_label(method)).c_str(), kAlphas[a], got, counts[a], ratio));
      }
    }
    for (double alpha : kAlphas) {
      const BenchCell* fastest = nullptr;
      for (const auto& c : g.result.cells)
        if (c.alpha == alpha && (!fastest || c.median_seconds < fastest->median_seconds)) fastest = &c;
      const BenchCell* malpha = g.result.find(alpha, Method::CgMalpha);
      out.expect(fastest == malpha,
                 fmt("n=%zu alpha=%.2f: fastest is %s (CG-Malpha %.4f s, best %.4f s)", n, alpha,
                     std::string(table_label(fastest->method)).c_str(), malpha->median_seconds,
                     fastest->median_seconds));
    }
  }
  out.expect(total < 300, fmt("both grids (3 timing reps each) took %.1f s (< 300 s)", total));
  return out;
}

void ordering_checks(Outcome& out, const std::string& label, const BenchResult& r) {
  for (double alpha : r.spec.alphas) {
    const auto cg = r.find(alpha, Method::Cg)->iterations;
    const auto pcg = r.find(alpha, Method::PcgJacobi)->iterations;
    const auto malpha = r.find(alpha, Method::CgMalpha)->iterations;
    const long half = static_cast<long>((pcg + 1) / 2);
    out.expect(malpha <= pcg && pcg <= cg,
               fmt("%s alpha=%.2f ordering: CG-Malpha %zu <= PCG %zu <= CG %zu", label.c_str(),
                   alpha, malpha, pcg, cg));
    out.expect(std::abs(static_cast<long>(malpha) - half) <= 3,
               fmt("%s alpha=%.2f halving: CG-Malpha %zu vs ceil(PCG/2) = %ld (+-3)", label.c_str(),
                   alpha, malpha, half));
  }
}

BenchResult quick_grid(std::shared_ptr<const SparseSymMatrix> W, const std::string& label) {
  BenchSpec spec;
  spec.matrix = W;
  spec.matrix_label = label;
  spec.ex = uniform_expression(W->size());
  spec.ex_label = "uniform";
  spec.tol = 1e-10;
  spec.methods = {Method::Cg, Method::PcgJacobi, Method::CgMalpha};
  return run_bench(spec);
}

Outcome iteration_ordering() {
  Outcome out;
  for (std::size_t n : {std::size_t{100000}, std::size_t{500000}}) {
    ordering_checks(out, fmt("RENGA n=%zu", n), renga_grid(n).result);
  }
  for (std::uint64_t seed : {2, 3}) {
    const auto W = std::make_shared<const SparseSymMatrix>(
        generate_renga({.n = 20000, .lambda = 0.9, .beta = 1.0, .seed = seed}));
    ordering_checks(out, fmt("RENGA n=20000 seed %llu", (unsigned long long)seed), quick_grid(W, "renga"));
  }
  struct Ann {
    std::size_t genes, labels, per_gene;
  };
  for (const Ann a : {Ann{5000, 2000, 2}, Ann{20000, 8000, 3}}) {
    const auto graph = build_adjacency_from_annotations(
        generate_random_annotations(a.genes, a.labels, a.per_gene, 7));
    const auto W = std::make_shared<const SparseSymMatrix>(graph.adjacency);
    ordering_checks(out, fmt("annotations %zu genes/%zu labels/%zu each", a.genes, a.labels, a.per_gene),
                    quick_grid(W, "annotations"));
  }
  return out;
}

Outcome chebyshev_degradation() {
  Outcome out;
  const auto& r = renga_grid(100000).result;
  const auto cheb = r.find(0.99, Method::Chebyshev)->iterations;
  const auto malpha = r.find(0.99, Method::CgMalpha)->iterations;
  const double factor = static_cast<double>(cheb) / static_cast<double>(malpha);
  out.expect(factor >= 2.0, fmt("alpha=0.99: Chebyshev %zu vs CG-Malpha %zu, factor %.2f (>= 2)", cheb,
                                malpha, factor));
  return out;
}

// ---- 6: determinism through the CLI ----------------------------------------------

int run(const std::string& args) {
  const std::string cmd = "\"" + g_cli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> csv_column(const fs::path& p, std::size_t col) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      else if (c == ',' && !quoted) fields.push_back(std::exchange(field, {}));
      else field += c;
    }
    fields.push_back(field);
    out.push_back(col < fields.size() ? fields[col] : "");
  }
  return out;
}

Outcome determinism() {
  Outcome out;
  if (g_cli.empty()) {
    out.expect(false, "no CLI path given");
    return out;
  }
  const fs::path root = fs::temp_directory_path() / fmt("generank_acceptance_%d", (int)::getpid());
  fs::create_directories(root);
  const std::string dir = root.string();

  for (int k : {1, 2}) {
    out.expect(run(fmt("generate renga --n 20000 --lambda 0.9 --beta 1 --seed 7 --out %s/g%d.mtx",
                       dir.c_str(), k)) == 0,
               fmt("generate run %d exits 0", k));
  }
  out.expect(slurp(root / "g1.mtx") == slurp(root / "g2.mtx") && !slurp(root / "g1.mtx").empty(),
             "generate: byte-identical .mtx files");

  for (const char* method : {"cg", "pcg-jacobi", "chebyshev", "cg-malpha"}) {
    for (int k : {1, 2}) {
      run(fmt("solve --matrix %s/g1.mtx --alpha 0.85 --ex random --seed 11 --method %s "
              "--out-dir %s/s%s_%d",
              dir.c_str(), method, dir.c_str(), method, k));
    }
    const fs::path a = root / fmt("s%s_1", method), b = root / fmt("s%s_2", method);
    const auto ja = nlohmann::json::parse(slurp(a / "report.json"), nullptr, false);
    const auto jb = nlohmann::json::parse(slurp(b / "report.json"), nullptr, false);
    const bool same = !ja.is_discarded() && !jb.is_discarded() &&
                      ja["iterations"] == jb["iterations"] &&
                      ja["residual_history"] == jb["residual_history"] &&
                      ja["provenance"] == jb["provenance"];
    out.expect(same, fmt("solve %s: identical iterations (%s), residual history and provenance",
                         method, ja.is_discarded() ? "?" : ja["iterations"].dump().c_str()));
    out.expect(slurp(a / "ranking.csv") == slurp(b / "ranking.csv") && !slurp(a / "ranking.csv").empty(),
               fmt("solve %s: byte-identical ranking.csv", method));
  }

  for (int k : {1, 2}) {
    run(fmt("bench --renga-n 20000 --seed 3 --tol 1e-10 --out-dir %s/b%d", dir.c_str(), k));
  }
  const auto ia = csv_column(root / "b1" / "bench.csv", 3);
  const auto ib = csv_column(root / "b2" / "bench.csv", 3);
  out.expect(ia.size() == 17 && ia == ib, "bench: identical iteration columns across runs");

  fs::remove_all(root);
  return out;
}

// ---- 7: equivalence of formulations ---------------------------------------------

Outcome formulation_equivalence() {
  Outcome out;
  double worst_rel = 0, worst_res_ratio = 0;
  const double tol = 1e-12;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t n = 150 + 15 * k;
    auto W = std::make_shared<const SparseSymMatrix>(generate_random_adjacency(n, 0.05, 900 + k));
    const GeneRankProblem p(W, kAlphas[k % 4], random_expression(n, 40 + k));
    SolverConfig c;
    c.tol = tol;
    c.method = Method::Cg;
    const auto spd = solve(p, c);
    c.method = Method::PcgJacobi;
    const auto scaled = solve(p, c);
    worst_rel = std::max(worst_rel, oracle::rel_inf_error(spd.solution.x, scaled.solution.x));
    for (const auto* r : {&spd, &scaled}) {
      worst_res_ratio = std::max(worst_res_ratio, nonsymmetric_residual_norm1(p, r->solution.x) / tol);
    }
  }
  out.expect(worst_rel <= 1e-8, fmt("max relative difference between the two forms = %.3g (<= 1e-8)", worst_rel));
  out.expect(worst_res_ratio < 10,
             fmt("max nonsymmetric residual = %.3g tol (< 10 tol, tol = 1e-12)", worst_res_ratio));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"theorem suite on 100 random graphs x 4 alphas", theorem_suite},
      {"solver agreement with a dense direct solve", solver_agreement},
      {"RENGA iteration counts at n = 100000 and 500000", table_reproduction},
      {"iteration ordering and halving band", iteration_ordering},
      {"Chebyshev degradation at alpha = 0.99", chebyshev_degradation},
      {"determinism of repeated CLI runs", determinism},
      {"equivalence of the SPD and scaled formulations", formulation_equivalence},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = Clock::now();
    const Outcome o = criteria[i].second();
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), seconds_since(start));
    for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
