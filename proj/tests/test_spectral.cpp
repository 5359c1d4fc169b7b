#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <memory>

#include "generank/error.hpp"
#include "generank/model.hpp"
#include "generank/spectral.hpp"
#include "oracle.hpp"

using namespace generank;

namespace {

std::shared_ptr<const SparseSymMatrix> adjacency(std::size_t n,
                                                 const std::vector<oracle::Edge>& edges) {
  return std::make_shared<const SparseSymMatrix>(SparseSymMatrix::from_edges(n, edges));
}

GeneRankProblem star(double alpha) {
  return GeneRankProblem(adjacency(3, {{0, 1}, {0, 2}}), alpha, Vector(3, 1.0));
}

DenseMatrix to_eigen(const oracle::Dense& A) {
  DenseMatrix M(A.size(), A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j) M(i, j) = A[i][j];
  return M;
}

void check_close(const Vector& got, const Vector& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

const ClaimResult& claim(const TheoremReport& r, std::string_view id) {
  for (const auto& c : r.claims)
    if (c.id == id) return c;
  FAIL("missing claim " << id);
  throw 0;
}

}  // namespace

TEST_CASE("star spectra") {
  const auto p = star(0.5);
  // The 3x3 characteristic polynomial of D^{-1/2} W D^{-1/2} is -l^3 + l.
  check_close(dense_spectrum(OperatorHandle(p, OperatorKind::S)), {0.5, 1.0, 1.5}, 1e-14);
  check_close(dense_spectrum(OperatorHandle(p, OperatorKind::T)), {0.75, 0.75, 1.0}, 1e-14);
  const auto zero = GeneRankProblem(adjacency(4, {}), 0.5, Vector(4, 1.0));
  check_close(dense_spectrum(OperatorHandle(zero, OperatorKind::S)), Vector(4, 1.0), 0.0);
}

TEST_CASE("dense spectra match the Jacobi-rotation oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t n = 40;
    const auto edges = oracle::random_edges(n, 0.15, seed);
    const auto W = oracle::dense_adjacency(n, edges);
    const GeneRankProblem p(adjacency(n, edges), 0.8, Vector(n, 1.0));
    check_close(dense_spectrum(OperatorHandle(p, OperatorKind::S)),
                oracle::eigenvalues(oracle::S(W, 0.8)), 1e-12);
    check_close(dense_spectrum(OperatorHandle(p, OperatorKind::T)),
                oracle::eigenvalues(oracle::T(W, 0.8)), 1e-12);
  }
}

TEST_CASE("dense assembly refuses matrices over the cap") {
  const GeneRankProblem p(adjacency(10, {{0, 1}}), 0.5, Vector(10, 1.0));
  try {
    dense_spectrum(OperatorHandle(p, OperatorKind::S), 5);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("Lanczos on the star is exact after three steps") {
  const auto p = star(0.5);
  LanczosOptions opt;
  opt.iters = 3;
  const auto r = extreme_eigs_lanczos(OperatorHandle(p, OperatorKind::S), opt);
  CHECK(r.lambda_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.lambda_max == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("Lanczos with iters = n reproduces the dense extremes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 60 + seed * 4;
    const auto edges = oracle::random_edges(n, 0.1, seed);
    const GeneRankProblem p(adjacency(n, edges), 0.99, Vector(n, 1.0));
    for (auto kind : {OperatorKind::S, OperatorKind::T}) {
      const OperatorHandle op(p, kind);
      const auto dense = dense_spectrum(op);
      LanczosOptions opt;
      opt.iters = n;
      opt.seed = seed;
      opt.reorth = Reorthogonalization::Full;
      const auto r = extreme_eigs_lanczos(op, opt);
      CHECK(r.full_reorth);
      CHECK(std::abs(r.lambda_min - dense.front()) <= 1e-8);
      CHECK(std::abs(r.lambda_max - dense.back()) <= 1e-8);

      // Without reorthogonalization n steps are not exact, but Ritz values
      // stay inside the spectrum and land close to the ends.
      opt.reorth = Reorthogonalization::Local;
      const auto loose = extreme_eigs_lanczos(op, opt);
      CHECK_FALSE(loose.full_reorth);
      CHECK(loose.lambda_min >= dense.front() - 1e-10);
      CHECK(loose.lambda_max <= dense.back() + 1e-10);
      CHECK(std::abs(loose.lambda_min - dense.front()) <= 1e-3);
      CHECK(std::abs(loose.lambda_max - dense.back()) <= 1e-3);
    }
  }
}

TEST_CASE("Lanczos is deterministic per seed") {
  const std::size_t n = 500;
  const auto edges = oracle::random_edges(n, 0.02, 1);
  const GeneRankProblem p(adjacency(n, edges), 0.75, Vector(n, 1.0));
  LanczosOptions opt;
  opt.iters = 50;
  opt.seed = 17;
  const OperatorHandle op(p, OperatorKind::T);
  const auto a = extreme_eigs_lanczos(op, opt);
  const auto b = extreme_eigs_lanczos(op, opt);
  CHECK(a.lambda_min == b.lambda_min);
  CHECK(a.lambda_max == b.lambda_max);
  CHECK(a.lambda_min >= 1 - 0.75 * 0.75 - 1e-6);
  CHECK(a.lambda_max <= 1 + 1e-6);
}

TEST_CASE("M-matrix verdicts") {
  SUBCASE("identity") {
    const auto v = verify_m_matrix(DenseMatrix::Identity(4, 4));
    CHECK(v.z_matrix);
    CHECK(v.nonnegative_inverse == true);
    CHECK(v.positive_witness == true);
    CHECK(v.passed());
  }
  SUBCASE("D - alpha W on the star") {
    const auto W = oracle::dense_adjacency(3, {{0, 1}, {0, 2}});
    const auto A = oracle::spd(W, 0.5);
    const auto v = verify_m_matrix(to_eigen(A));
    CHECK(v.passed());
    const auto inv = oracle::inverse(A);
    for (const auto& row : inv)
      for (double x : row) CHECK(x >= 0.0);
    check_close(v.witness, oracle::solve(A, {1, 1, 1}), 1e-14);
  }
  SUBCASE("positive off-diagonal fails the Z test") {
    DenseMatrix A(2, 2);
    A << 1, 0.5, 0.5, 1;
    const auto v = verify_m_matrix(A);
    CHECK_FALSE(v.z_matrix);
    CHECK_FALSE(v.nonnegative_inverse.has_value());
    CHECK_FALSE(v.positive_witness.has_value());
    CHECK_FALSE(v.passed());
  }
  SUBCASE("a Z-matrix with a negative inverse entry") {
    DenseMatrix A(2, 2);
    A << 1, -2, -2, 1;
    const auto v = verify_m_matrix(A);
    CHECK(v.z_matrix);
    CHECK(v.nonnegative_inverse == false);
    CHECK_FALSE(v.passed());
  }
  SUBCASE("singular input") {
    DenseMatrix A(2, 2);
    A << 1, -1, -1, 1;
    try {
      verify_m_matrix(A);
      FAIL("expected a singular error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Singular);
    }
  }
}

TEST_CASE("theorem checks on the star") {
  for (double alpha : {0.5, 0.75, 0.8, 0.99}) {
    const auto r = check_theorems(star(alpha));
    CHECK(r.passed());
    CHECK(r.claims.size() == 7);
    CHECK(r.count(Verdict::Pass) == 7);
  }
  const auto r = check_theorems(star(0.5));
  CHECK(r.spectral.cond_S == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.spectral.cond_T == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // The star is bipartite, so 1 + alpha is an eigenvalue of S.
  CHECK(r.upper_bound_attained);
}

TEST_CASE("W = 0 routes around the smallest-eigenvalue claim") {
  const GeneRankProblem p(adjacency(5, {}), 0.5, Vector(5, 1.0));
  const auto r = check_theorems(p);
  CHECK(r.passed());
  CHECK(claim(r, "smallest-eigenvalue").verdict == Verdict::Skipped);
  CHECK(r.count(Verdict::Skipped) == 1);
  CHECK(r.count(Verdict::Pass) == 6);
}

TEST_CASE("theorem checks on random graphs") {
  std::size_t instances = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 50;
    const auto edges = oracle::random_edges(n, 0.1, 1000 + seed);
    const auto W = oracle::dense_adjacency(n, edges);
    for (double alpha : {0.5, 0.75, 0.8, 0.99}) {
      CAPTURE(seed);
      CAPTURE(alpha);
      const GeneRankProblem p(adjacency(n, edges), alpha, Vector(n, 1.0 / n));
      const auto r = check_theorems(p);
      for (const auto& c : r.claims) {
        CAPTURE(c.id);
        CAPTURE(c.detail);
        CHECK(c.verdict == Verdict::Pass);
      }
      // Independent look at the mapped spectrum.
      auto mapped = oracle::eigenvalues(oracle::S(W, alpha));
      for (double& l : mapped) l = 1 - (1 - l) * (1 - l);
      std::sort(mapped.begin(), mapped.end());
      check_close(oracle::eigenvalues(oracle::T(W, alpha)), mapped, 1e-10);
      ++instances;
    }
  }
  CHECK(instances == 100);
}

TEST_CASE("the lambda_min(S) eigenvector is D^{1/2} times the connected-node indicator") {
  // Graph with an isolated node: S x = (1 - alpha) x for x_i = sqrt(d_i) on
  // connected nodes and 0 elsewhere.
  const auto edges = std::vector<oracle::Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}};
  const GeneRankProblem p(adjacency(5, edges), 0.6, Vector(5, 1.0));
  Vector x(5, 0.0);
  for (std::size_t i = 0; i < 4; ++i) x[i] = std::sqrt(p.degrees()[i]);
  const auto Sx = OperatorHandle(p, OperatorKind::S).apply(x);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(Sx[i] - 0.4 * x[i]) <= 1e-12);
}

TEST_CASE("above the dense cap the Lanczos path runs") {
  const std::size_t n = 300;
  const auto edges = oracle::random_edges(n, 0.03, 77);
  const GeneRankProblem p(adjacency(n, edges), 0.9, Vector(n, 1.0 / n));
  TheoremCheckOptions opt;
  opt.dense_cap = 100;
  opt.lanczos_iters = 300;
  const auto r = check_theorems(p, opt);
  CHECK(r.spectral.method == SpectralReport::Method::Lanczos);
  CHECK(r.passed());
  CHECK(claim(r, "spectrum-mapping").verdict == Verdict::Skipped);
  CHECK(claim(r, "smallest-eigenvalue").verdict == Verdict::Pass);
  CHECK(r.spectral.residual_bounds.size() == 4);
}

TEST_CASE("eigenvalue export") {
  const auto path = std::filesystem::temp_directory_path() / "generank_test_eigs.csv";
  const Vector values{0.5, 1.0, 1.5};
  write_eigenvalues_csv(values, path);
  std::ifstream in(path);
  Vector back;
  for (double v; in >> v;) back.push_back(v);
  CHECK(back == values);
  std::filesystem::remove(path);
}
