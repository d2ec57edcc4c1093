#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "duelbench/datasets.h"
#include "duelbench/gamesolver.h"
#include "duelbench/rng.h"
#include "oracles.h"

using namespace duelbench;

namespace {

Matrix FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

oracle::Mat ToRows(const Matrix& m) {
  oracle::Mat rows(m.size(), oracle::Vec(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) rows[i][j] = m(i, j);
  return rows;
}

Matrix RandomSkew(CounterRng& rng, int k) {
  Matrix m(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      m(i, j) = 2.0 * rng.Uniform01() - 1.0;
      m(j, i) = -m(i, j);
    }
  return m;
}

void CheckEquilibrium(const Matrix& m, const GameSolution& s, double tol) {
  CHECK(s.gap <= tol);
  CHECK(DualityGap(m, s.row, s.column) <= tol + 1e-12);
  CHECK(SecurityLevel(m, s.row) >= s.value - tol);
  CHECK(BestResponseValue(m, s.column) <= s.value + tol);
  double total = 0.0;
  for (double p : s.row.probs()) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0));
}

}  // namespace

TEST_CASE("zero game returns the uniform strategy") {
  for (SolverMethod method : {SolverMethod::kMultiplicativeWeights, SolverMethod::kSimplex}) {
    SolverOptions options;
    options.method = method;
    const GameSolution s = VonNeumannWinner(Matrix(4, 0.0), options);
    CHECK(s.value == 0.0);
    if (method == SolverMethod::kMultiplicativeWeights)
      for (double p : s.row.probs()) CHECK(p == doctest::Approx(0.25));
  }
}

TEST_CASE("rock-paper-scissors") {
  const Matrix rps = FromRows({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});
  const auto exact = oracle::SupportEnumeration(ToRows(rps));
  REQUIRE(exact);
  for (SolverMethod method : {SolverMethod::kMultiplicativeWeights, SolverMethod::kSimplex}) {
    SolverOptions options;
    options.method = method;
    const GameSolution s = VonNeumannWinner(rps, options);
    CheckEquilibrium(rps, s, 1e-6);
    for (int a = 0; a < 3; ++a) CHECK(s.row[a] == doctest::Approx(exact->row[a]).epsilon(1e-5));
    CHECK(std::abs(s.value) <= 1e-6);
  }
}

TEST_CASE("the three-cycle dataset has its winner on the first three arms") {
  const Matrix game = BuiltinDataset("copeland_vn5").preferences.ExpectedOutcomes();
  const GameSolution s = VonNeumannWinner(game);
  const std::vector<double> expected = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0, 0.0};
  for (int a = 0; a < 5; ++a) CHECK(std::abs(s.row[a] - expected[a]) <= 1e-6);
  CHECK(std::abs(s.value) <= 1e-6);
}

TEST_CASE("non-symmetric games match support enumeration") {
  CounterRng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rng.UniformInt(4);
    Matrix m(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = 4.0 * rng.Uniform01() - 2.0;
    const auto exact = oracle::SupportEnumeration(ToRows(m));
    REQUIRE(exact);
    const GameSolution mw = VonNeumannWinner(m);
    const GameSolution lp = SolveBySimplex(m);
    CheckEquilibrium(m, mw, 1e-6);
    CheckEquilibrium(m, lp, 1e-9);
    CHECK(mw.value == doctest::Approx(exact->value).epsilon(1e-5));
    CHECK(lp.value == doctest::Approx(exact->value).epsilon(1e-9));
  }
}

TEST_CASE("skew-symmetric games have value zero") {
  CounterRng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const int k = 2 + rng.UniformInt(7);
    const Matrix m = RandomSkew(rng, k);
    const GameSolution s = VonNeumannWinner(m);
    CheckEquilibrium(m, s, 1e-6);
    CHECK(std::abs(s.value) <= 1e-6);
    CHECK(SecurityLevel(m, s.row) >= -1e-6);
  }
}

TEST_CASE("permuting the game permutes the payoff vector") {
  CounterRng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const int k = 5;
    const Matrix m = RandomSkew(rng, k);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = k - 1; i > 0; --i) std::swap(perm[i], perm[rng.UniformInt(i + 1)]);
    Matrix permuted(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) permuted(i, j) = m(perm[i], perm[j]);

    const GameSolution a = VonNeumannWinner(m);
    const GameSolution b = VonNeumannWinner(permuted);
    // Map b back to the original labels and compare the payoffs it earns.
    std::vector<double> back(k);
    for (int i = 0; i < k; ++i) back[perm[i]] = b.row[i];
    for (int j = 0; j < k; ++j) {
      double pa = 0.0, pb = 0.0;
      for (int i = 0; i < k; ++i) {
        pa += a.row[i] * m(i, j);
        pb += back[i] * m(i, j);
      }
      CHECK(pa >= -1e-6);
      CHECK(pb >= -1e-6);
    }
  }
}

TEST_CASE("warm starts reach the same certified answer") {
  CounterRng rng(3);
  Matrix m = RandomSkew(rng, 6);
  GameSolution previous = VonNeumannWinner(m);
  for (int step = 0; step < 20; ++step) {
    const int i = rng.UniformInt(6);
    const int j = (i + 1 + rng.UniformInt(5)) % 6;
    const double delta = 0.3 * (2.0 * rng.Uniform01() - 1.0);
    m(i, j) += delta;
    m(j, i) -= delta;
    SolverOptions options;
    options.warm_start = &previous;
    previous = VonNeumannWinner(m, options);
    CheckEquilibrium(m, previous, 1e-6);
  }
}

TEST_CASE("solver contract errors") {
  Matrix bad(2, 0.0);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(VonNeumannWinner(bad), ContractViolation);
  CHECK_THROWS_AS(VonNeumannWinner(Matrix(0)), ContractViolation);
  SolverOptions options;
  options.tolerance = 0.0;
  CHECK_THROWS_AS(VonNeumannWinner(Matrix(2, 0.0), options), ContractViolation);

  // A cap far too small to converge must fail loudly with the gap reached.
  CounterRng rng(17);
  const Matrix m = RandomSkew(rng, 8);
  SolverOptions tight;
  tight.max_iterations = 1;
  tight.tolerance = 1e-15;
  try {
    VonNeumannWinner(m, tight);
    CHECK(true);  // a lucky polish is allowed to certify at once
  } catch (const SolverError& e) {
    CHECK(e.achieved_gap() > 0.0);
  }
}
