#include "duelbench/core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace duelbench {
namespace {

std::string Position(int i, int j) {
  std::ostringstream out;
  out << "(" << i + 1 << ", " << j + 1 << ")";
  return out.str();
}

template <typename T>
SquareMatrix<T> FromNested(const std::vector<std::vector<T>>& rows) {
  const int k = static_cast<int>(rows.size());
  SquareMatrix<T> m(k);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(rows[i].size()) != k) {
      throw ContractViolation("matrix is not square: row " +
                              std::to_string(i + 1) + " has " +
                              std::to_string(rows[i].size()) + " entries");
    }
    for (int j = 0; j < k; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

PreferenceMatrix::PreferenceMatrix(Matrix p) : p_(std::move(p)) {
  const int k = p_.size();
  if (k < 2) throw ContractViolation("preference matrix needs K >= 2");
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ContractViolation("preference entry " + Position(i, j) +
                                " outside [0,1]");
      }
      if (std::abs(v + p_(j, i) - 1.0) > kTolerance) {
        throw ContractViolation("preference entries " + Position(i, j) +
                                " and " + Position(j, i) + " do not sum to 1");
      }
    }
    if (std::abs(p_(i, i) - 0.5) > kTolerance) {
      throw ContractViolation("preference diagonal " + Position(i, i) +
                              " is not 1/2");
    }
  }
}

PreferenceMatrix PreferenceMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  return PreferenceMatrix(FromNested(rows));
}

Matrix PreferenceMatrix::ExpectedOutcomes() const {
  const int k = arms();
  Matrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = 2.0 * p_(i, j) - 1.0;
  return m;
}

MatrixCheck ValidateOutcomeMatrix(const SquareMatrix<int>& m) {
  const int k = m.size();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int v = m(i, j);
      if (i == j) {
        if (v != 0) return {false, i, j, "non-zero diagonal"};
        continue;
      }
      if (v == 0) return {false, i, j, "tie between distinct arms"};
      if (v != 1 && v != -1) return {false, i, j, "entry not in {-1, +1}"};
      if (m(j, i) != -v) return {false, i, j, "not skew-symmetric"};
    }
  }
  return {};
}

OutcomeMatrix::OutcomeMatrix(SquareMatrix<int> m) : m_(std::move(m)) {
  if (const MatrixCheck check = ValidateOutcomeMatrix(m_); !check) {
    throw ContractViolation("invalid outcome matrix at " +
                            Position(check.row, check.col) + ": " +
                            check.reason);
  }
}

OutcomeMatrix OutcomeMatrix::FromRows(
    const std::vector<std::vector<int>>& rows) {
  return OutcomeMatrix(FromNested(rows));
}

CumulativeOutcomeMatrix::CumulativeOutcomeMatrix(SquareMatrix<std::int64_t> m,
                                                 std::int64_t rounds)
    : m_(std::move(m)), rounds_(rounds) {
  if (rounds_ < 0) throw ContractViolation("negative round count");
  const int k = m_.size();
  for (int i = 0; i < k; ++i) {
    if (m_(i, i) != 0) throw ContractViolation("non-zero cumulative diagonal");
    for (int j = 0; j < k; ++j) {
      if (m_(i, j) != -m_(j, i))
        throw ContractViolation("cumulative matrix not skew-symmetric at " +
                                Position(i, j));
      if (m_(i, j) > rounds_ || m_(i, j) < -rounds_)
        throw ContractViolation("cumulative entry exceeds round count at " +
                                Position(i, j));
    }
  }
}

void CumulativeOutcomeMatrix::Add(const OutcomeMatrix& round) {
  Add(round, 1);
}

void CumulativeOutcomeMatrix::Add(const OutcomeMatrix& round,
                                  std::int64_t times) {
  if (round.arms() != arms())
    throw ContractViolation("outcome matrix dimension mismatch");
  if (times < 0) throw ContractViolation("negative repetition count");
  const int k = arms();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m_(i, j) += times * round(i, j);
  rounds_ += times;
}

Matrix CumulativeOutcomeMatrix::AsReal() const {
  const int k = arms();
  Matrix out(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = static_cast<double>(m_(i, j));
  return out;
}

std::string ToString(LossModel model) {
  switch (model) {
    case LossModel::kBorda:
      return "borda";
    case LossModel::kCopeland:
      return "copeland";
    case LossModel::kUtility:
      return "utility";
    case LossModel::kVonNeumann:
      return "von-neumann";
  }
  return "unknown";
}

LossModel ParseLossModel(const std::string& name) {
  if (name == "borda") return LossModel::kBorda;
  if (name == "copeland") return LossModel::kCopeland;
  if (name == "utility") return LossModel::kUtility;
  if (name == "von-neumann") return LossModel::kVonNeumann;
  throw std::invalid_argument("unknown loss model: " + name);
}

LossVector::LossVector(std::vector<double> values, LossModel model)
    : values_(std::move(values)), model_(model) {
  constexpr double kSlack = 1e-12;
  const double lo = model_ == LossModel::kVonNeumann ? -1.0 : 0.0;
  for (std::size_t a = 0; a < values_.size(); ++a) {
    const double v = values_[a];
    if (!std::isfinite(v) || v < lo - kSlack || v > 1.0 + kSlack) {
      throw ContractViolation("loss of arm " + std::to_string(a + 1) +
                              " out of range for " + ToString(model_) +
                              " model");
    }
  }
}

UtilityVector::UtilityVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t a = 0; a < values_.size(); ++a) {
    const double v = values_[a];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw ContractViolation("utility of arm " + std::to_string(a + 1) +
                              " outside [0,1]");
  }
}

MixedStrategy::MixedStrategy(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw ContractViolation("empty mixed strategy");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw ContractViolation("negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw ContractViolation("probabilities sum to " + std::to_string(sum));
}

MixedStrategy MixedStrategy::Uniform(int k) {
  if (k < 1) throw ContractViolation("uniform strategy needs k >= 1");
  return MixedStrategy(std::vector<double>(k, 1.0 / k));
}

MixedStrategy MixedStrategy::PointMass(int k, int arm) {
  if (arm < 0 || arm >= k) throw ContractViolation("point mass out of range");
  std::vector<double> probs(k, 0.0);
  probs[arm] = 1.0;
  return MixedStrategy(std::move(probs));
}

DuelOutcome::DuelOutcome(int y) : y_(y) {
  if (y != 1 && y != -1) throw ContractViolation("duel outcome must be +-1");
}

std::string ToString(Combiner combiner) {
  return combiner == Combiner::kWeak ? "weak" : "strong";
}

double Combine(Combiner combiner, double x, double y) {
  return combiner == Combiner::kWeak ? PsiWeak(x, y) : PsiStrong(x, y);
}

std::vector<std::int64_t> CheckpointGrid(std::int64_t horizon, int count) {
  if (horizon < 1 || count < 1)
    throw ContractViolation("checkpoint grid needs horizon >= 1, count >= 1");
  std::vector<std::int64_t> grid;
  grid.reserve(count);
  for (int k = 1; k <= count; ++k) {
    const std::int64_t t = (k * horizon + count - 1) / count;
    if (grid.empty() || grid.back() != t) grid.push_back(t);
  }
  return grid;
}

RegretLedger::RegretLedger(Combiner combiner, int arms,
                           std::vector<std::int64_t> grid, Benchmark benchmark)
    : combiner_(combiner),
      benchmark_(benchmark),
      arm_loss_(arms, 0.0),
      grid_(std::move(grid)) {
  if (arms < 1) throw ContractViolation("ledger needs at least one arm");
  if (!std::is_sorted(grid_.begin(), grid_.end()))
    throw ContractViolation("checkpoint grid must be sorted");
}

void RegretLedger::Record(ActionPair pair, const LossVector& losses) {
  const int k = static_cast<int>(arm_loss_.size());
  if (losses.arms() != k)
    throw ContractViolation("loss vector length " +
                            std::to_string(losses.arms()) + " != K = " +
                            std::to_string(k));
  if (pair.first < 0 || pair.first >= k || pair.second < 0 ||
      pair.second >= k)
    throw ContractViolation("action pair index out of range");

  pair_loss_ += Combine(combiner_, losses[pair.first], losses[pair.second]);
  for (int a = 0; a < k; ++a) arm_loss_[a] += losses[a];
  ++rounds_;

  while (next_grid_ < grid_.size() && grid_[next_grid_] < rounds_) ++next_grid_;
  if (next_grid_ < grid_.size() && grid_[next_grid_] == rounds_) {
    checkpoints_.push_back({rounds_, Regret()});
    ++next_grid_;
  }
}

double RegretLedger::Regret() const {
  if (benchmark_ == Benchmark::kZero) return pair_loss_;
  return pair_loss_ - *std::min_element(arm_loss_.begin(), arm_loss_.end());
}

}  // namespace duelbench
