#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <sstream>

#include "generank/bench.hpp"
#include "generank/datagen.hpp"
#include "generank/error.hpp"
#include "generank/report.hpp"

using namespace generank;

namespace {

std::shared_ptr<const SparseSymMatrix> star() {
  const std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {0, 2}};
  return std::make_shared<const SparseSymMatrix>(SparseSymMatrix::from_edges(3, edges));
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("report document") {
  const GeneRankProblem p(star(), 0.5, Vector(3, 1.0));
  SolverConfig c;
  c.method = Method::CgMalpha;
  c.tol = 1e-12;
  const auto r = solve(p, c);
  const auto doc = to_json(r, {"star.mtx", "uniform", 7, 3, 4});
  CHECK(doc["generank_version"] == kVersion);
  CHECK(doc["method"] == "cg-malpha");
  CHECK(doc["alpha"] == 0.5);
  CHECK(doc["tol"] == 1e-12);
  CHECK(doc["iterations"] == r.iterations);
  CHECK(doc["converged"] == true);
  CHECK(doc["solved_form"] == "scaled");
  CHECK(doc["residual_history"].size() == r.iterations + 1);
  CHECK(doc["provenance"]["matrix"] == "star.mtx");
  CHECK(doc["provenance"]["seed"] == 7);
  CHECK(doc["provenance"]["nnz"] == 4);
}

TEST_CASE("ranking CSV") {
  const Vector x{4.0 / 3, 5.0 / 6, 5.0 / 6};
  std::ostringstream plain;
  write_ranking_csv(x, {}, plain);
  const auto rows = lines(plain.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "gene_id,score,rank");
  CHECK(rows[1].rfind("1,1.333", 0) == 0);
  CHECK(rows[1].substr(rows[1].size() - 2) == ",1");
  CHECK(rows[2].rfind("2,", 0) == 0);
  CHECK(rows[3].rfind("3,", 0) == 0);

  const std::vector<std::string> ids{"hub", "leafA", "leafB"};
  std::ostringstream named;
  write_ranking_csv(Vector{0.1, 0.3, 0.2}, ids, named);
  const auto named_rows = lines(named.str());
  CHECK(named_rows[1].rfind("leafA,", 0) == 0);
  CHECK(named_rows[3].rfind("hub,", 0) == 0);

  std::ostringstream sink;
  const std::vector<std::string> short_ids{"a"};
  CHECK_THROWS_AS(write_ranking_csv(x, short_ids, sink), Error);
}

TEST_CASE("bench grid on a small RENGA graph") {
  BenchSpec spec;
  spec.matrix = std::make_shared<const SparseSymMatrix>(
      generate_renga({.n = 500, .lambda = 0.9, .beta = 1.0, .seed = 3}));
  spec.matrix_label = "renga(n=500,seed=3)";
  spec.ex = uniform_expression(500);
  spec.ex_label = "uniform";
  spec.tol = 1e-14;
  spec.reps = 3;
  const auto result = run_bench(spec);
  CHECK(result.cells.size() == 16);
  CHECK(result.all_converged());
  for (double a : kDefaultAlphaGrid) {
    for (Method m : kAllMethods) {
      const auto* cell = result.find(a, m);
      REQUIRE(cell != nullptr);
      CHECK(cell->iterations > 0);
      CHECK(cell->median_seconds >= 0.0);
    }
  }

  const auto table = lines(result.to_table());
  REQUIRE(table.size() == 6);
  CHECK(table[1].find("0.99") != std::string::npos);
  CHECK(table[5].rfind("CG-Malpha", 0) == 0);

  std::ostringstream csv;
  result.write_csv(csv);
  const auto rows = lines(csv.str());
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "matrix,alpha,method,iterations,wall_time_seconds,setup_seconds,converged,final_spd_residual");
  // The label has a comma, so it is quoted.
  CHECK(rows[1].rfind("\"renga(n=500,seed=3)\",0.50,CG,", 0) == 0);

  // Iteration columns are reproducible; only timings move.
  const auto again = run_bench(spec);
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    CHECK(again.cells[i].iterations == result.cells[i].iterations);
  }
}

TEST_CASE("bench failures are recorded as DNF") {
  BenchSpec spec;
  spec.matrix = star();
  spec.ex = Vector(3, 1.0);
  spec.alphas = {0.99};
  spec.methods = {Method::Chebyshev};
  spec.tol = 1e-15;
  spec.max_iter = 1;
  const auto result = run_bench(spec);
  CHECK_FALSE(result.all_converged());
  CHECK(result.to_table().find("DNF") != std::string::npos);
}

TEST_CASE("bench spec validation") {
  BenchSpec spec;
  spec.matrix = star();
  spec.ex = Vector(3, 1.0);
  spec.alphas = {0.5, 1.0};
  CHECK_THROWS_AS(run_bench(spec), Error);
  spec.alphas = {0.5};
  spec.reps = 0;
  CHECK_THROWS_AS(run_bench(spec), Error);
  spec.reps = 1;
  spec.ex = Vector(2, 1.0);
  CHECK_THROWS_AS(run_bench(spec), Error);
}
