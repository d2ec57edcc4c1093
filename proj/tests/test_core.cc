#include <doctest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "duelbench/core.h"
#include "duelbench/rng.h"

using namespace duelbench;

TEST_CASE("pair-loss combiners") {
  CHECK(PsiStrong(0.3, 0.7) == doctest::Approx(0.5));
  CHECK(PsiStrong(0.0, 0.0) == 0.0);
  CHECK(PsiStrong(1.0, 0.0) == 0.5);
  CHECK(PsiWeak(0.3, 0.7) == 0.3);
  CHECK(PsiWeak(0.5, 0.5) == 0.5);
  CHECK(PsiWeak(1.0, 0.0) == 0.0);

  CounterRng rng(11);
  for (int n = 0; n < 1000; ++n) {
    const double x = 2.0 * rng.Uniform01() - 1.0;
    const double y = 2.0 * rng.Uniform01() - 1.0;
    CHECK(PsiWeak(x, y) <= PsiStrong(x, y));
    CHECK(PsiStrong(x, y) <= std::max(x, y));
    CHECK(PsiWeak(x, y) == PsiWeak(y, x));
    CHECK(PsiStrong(x, y) == PsiStrong(y, x));
  }
}

TEST_CASE("outcome matrix validation") {
  CHECK(ValidateOutcomeMatrix(OutcomeMatrix::FromRows({{0, 1}, {-1, 0}}).entries()));

  SquareMatrix<int> ties(2, 0);
  const MatrixCheck tie_check = ValidateOutcomeMatrix(ties);
  CHECK_FALSE(tie_check);
  CHECK(tie_check.row == 0);
  CHECK(tie_check.col == 1);

  SquareMatrix<int> symmetric(2, 1);
  symmetric(0, 0) = symmetric(1, 1) = 0;
  CHECK_FALSE(ValidateOutcomeMatrix(symmetric));

  CHECK_THROWS_AS(OutcomeMatrix::FromRows({{0, 1}, {1, 0}}), ContractViolation);
  CHECK_THROWS_AS(OutcomeMatrix::FromRows({{0, 1, 1}, {-1, 0}}), ContractViolation);
}

TEST_CASE("preference matrix invariants") {
  CHECK_NOTHROW(PreferenceMatrix::FromRows({{0.5, 0.3}, {0.7, 0.5}}));
  CHECK_THROWS_AS(PreferenceMatrix::FromRows({{0.5, 0.3}, {0.6, 0.5}}),
                  ContractViolation);
  CHECK_THROWS_AS(PreferenceMatrix::FromRows({{0.4, 0.3}, {0.7, 0.5}}),
                  ContractViolation);
  CHECK_THROWS_AS(PreferenceMatrix::FromRows({{0.5, 1.2}, {-0.2, 0.5}}),
                  ContractViolation);
  CHECK_THROWS_AS(PreferenceMatrix::FromRows({{0.5}}), ContractViolation);

  const auto p = PreferenceMatrix::FromRows({{0.5, 0.8}, {0.2, 0.5}});
  const Matrix e = p.ExpectedOutcomes();
  CHECK(e(0, 1) == doctest::Approx(0.6));
  CHECK(e(1, 0) == doctest::Approx(-0.6));
  CHECK(e(0, 0) == 0.0);
}

TEST_CASE("cumulative matrix accumulates rounds") {
  const auto m = OutcomeMatrix::FromRows({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});
  CumulativeOutcomeMatrix sum(3);
  sum.Add(m);
  sum.Add(m, 4);
  CHECK(sum.rounds() == 5);
  CHECK(sum(0, 1) == 5);
  CHECK(sum(2, 1) == -5);
  CHECK(sum.AsReal()(1, 2) == 5.0);

  SquareMatrix<std::int64_t> bad(2, 0);
  bad(0, 1) = 3;
  bad(1, 0) = -3;
  CHECK_THROWS_AS(CumulativeOutcomeMatrix(bad, 2), ContractViolation);
  CHECK_NOTHROW(CumulativeOutcomeMatrix(bad, 3));
}

TEST_CASE("loss vectors respect their model's range") {
  CHECK_NOTHROW(LossVector({-0.5, 0.5}, LossModel::kVonNeumann));
  CHECK_THROWS_AS(LossVector({-0.5, 0.5}, LossModel::kBorda), ContractViolation);
  CHECK_THROWS_AS(LossVector({1.5}, LossModel::kVonNeumann), ContractViolation);
  CHECK(ParseLossModel("von-neumann") == LossModel::kVonNeumann);
  CHECK(ToString(LossModel::kCopeland) == "copeland");
  CHECK_THROWS(ParseLossModel("condorcet"));
}

TEST_CASE("mixed strategies and duel outcomes") {
  CHECK_THROWS_AS(MixedStrategy({0.5, 0.6}), ContractViolation);
  CHECK_THROWS_AS(MixedStrategy({1.2, -0.2}), ContractViolation);
  CHECK(MixedStrategy::Uniform(4)[2] == 0.25);
  CHECK(MixedStrategy::PointMass(3, 1)[1] == 1.0);
  CHECK_THROWS_AS(DuelOutcome(0), ContractViolation);
  CHECK(DuelOutcome::FirstWins().first_won());
  CHECK(DuelOutcome::SecondWins().value() == -1);
}

TEST_CASE("regret ledger on single rounds") {
  const LossVector l({0.2, 0.8, 0.5}, LossModel::kBorda);
  auto one_round = [&](Combiner c, ActionPair pair) {
    RegretLedger ledger(c, 3, {1});
    ledger.Record(pair, l);
    return ledger.Regret();
  };
  CHECK(one_round(Combiner::kWeak, {0, 1}) == doctest::Approx(0.0));
  CHECK(one_round(Combiner::kWeak, {1, 2}) == doctest::Approx(0.3));
  CHECK(one_round(Combiner::kStrong, {0, 1}) == doctest::Approx(0.3));

  RegretLedger ledger(Combiner::kWeak, 3, {1});
  CHECK_THROWS_AS(ledger.Record({0, 3}, l), ContractViolation);
  CHECK_THROWS_AS(ledger.Record({0, 1}, LossVector({0.1, 0.2}, LossModel::kBorda)),
                  ContractViolation);
}

TEST_CASE("regret ledger matches recomputation from the full history") {
  CounterRng rng(2024);
  for (Combiner combiner : {Combiner::kWeak, Combiner::kStrong}) {
    const int k = 4;
    const std::int64_t horizon = 100;
    const auto grid = CheckpointGrid(horizon, 17);
    RegretLedger ledger(combiner, k, grid);
    std::vector<std::vector<double>> history;
    std::vector<ActionPair> pairs;
    std::size_t next = 0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      std::vector<double> l(k);
      for (double& v : l) v = rng.Uniform01();
      const ActionPair pair{rng.UniformInt(k), rng.UniformInt(k)};
      ledger.Record(pair, LossVector(l, LossModel::kBorda));
      history.push_back(l);
      pairs.push_back(pair);

      if (next < grid.size() && grid[next] == t) {
        // Brute force: pair losses minus the best single arm in hindsight.
        double pair_total = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < history.size(); ++s) {
          const double x = history[s][pairs[s].first];
          const double y = history[s][pairs[s].second];
          pair_total += combiner == Combiner::kWeak ? std::min(x, y) : (x + y) / 2;
        }
        for (int a = 0; a < k; ++a) {
          double arm_total = 0.0;
          for (const auto& h : history) arm_total += h[a];
          best = std::min(best, arm_total);
        }
        REQUIRE(ledger.checkpoints().size() == next + 1);
        CHECK(ledger.checkpoints().back().t == t);
        CHECK(ledger.checkpoints().back().regret ==
              doctest::Approx(pair_total - best).epsilon(1e-12));
        ++next;
      }
    }
    CHECK(next == grid.size());
  }
}

TEST_CASE("zero benchmark reports the raw pair loss") {
  RegretLedger ledger(Combiner::kWeak, 2, {1, 2}, Benchmark::kZero);
  ledger.Record({0, 1}, LossVector({-0.5, 0.5}, LossModel::kVonNeumann));
  ledger.Record({1, 1}, LossVector({-0.25, 0.25}, LossModel::kVonNeumann));
  CHECK(ledger.Regret() == doctest::Approx(-0.25));
}

TEST_CASE("checkpoint grid") {
  const auto grid = CheckpointGrid(100000);
  CHECK(grid.size() == 200);
  CHECK(grid.front() == 500);
  CHECK(grid.back() == 100000);
  CHECK(std::is_sorted(grid.begin(), grid.end()));

  const auto small = CheckpointGrid(50);
  CHECK(small.size() == 50);
  CHECK(small.back() == 50);
  CHECK(CheckpointGrid(1).size() == 1);
}
