#include "duelbench/envs.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "duelbench/losses.h"

namespace duelbench {
namespace {

constexpr double kMultiplicityTolerance = 1e-9;

void CheckDistinct(int i, int j, int k) {
  if (i < 0 || j < 0 || i >= k || j >= k)
    throw ContractViolation("duel arm out of range");
  if (i == j) throw ContractViolation("an arm cannot duel itself");
}

std::string DescribeMultiplicity(int i, int j, double product) {
  std::ostringstream out;
  out << "tau * p(" << i << ", " << j << ") = " << product
      << " is not an integer";
  return out.str();
}

}  // namespace

DuelOutcome StochasticDuel(const PreferenceMatrix& p, int i, int j,
                           CounterRng& rng) {
  CheckDistinct(i, j, p.arms());
  return DuelOutcome(rng.Uniform01() < p(i, j) ? 1 : -1);
}

DuelOutcome UtilityDuel(const UtilityVector& x, int i, int j, CounterRng& rng) {
  CheckDistinct(i, j, x.arms());
  return DuelOutcome(rng.Uniform01() < LinearLink(x[i], x[j]) ? 1 : -1);
}

BlockMultiplicityError::BlockMultiplicityError(int i, int j, double product)
    : std::invalid_argument(DescribeMultiplicity(i, j, product)),
      i_(i),
      j_(j),
      product_(product) {}

CumulativeOutcomeMatrix BlockSequence::Cumulative(std::int64_t rounds) const {
  CumulativeOutcomeMatrix sum(source.arms());
  const std::int64_t full = rounds / tau;
  const std::int64_t rest = rounds % tau;
  for (int s = 0; s < tau; ++s)
    sum.Add(matrices[s], full + (s < rest ? 1 : 0));
  return sum;
}

BlockSequence BuildBlockSequence(const PreferenceMatrix& p, int tau,
                                 CounterRng& rng) {
  if (tau < 1) throw ContractViolation("block length must be >= 1");
  const int k = p.arms();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double product = tau * p(i, j);
      if (std::abs(product - std::round(product)) > kMultiplicityTolerance)
        throw BlockMultiplicityError(i + 1, j + 1, product);
    }
  }

  std::vector<SquareMatrix<int>> rounds(tau, SquareMatrix<int>(k, 0));
  std::vector<int> column(tau);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const int wins = static_cast<int>(std::lround(tau * p(i, j)));
      std::fill(column.begin(), column.begin() + wins, 1);
      std::fill(column.begin() + wins, column.end(), -1);
      for (int s = tau - 1; s > 0; --s)
        std::swap(column[s], column[rng.UniformInt(s + 1)]);
      for (int s = 0; s < tau; ++s) {
        rounds[s](i, j) = column[s];
        rounds[s](j, i) = -column[s];
      }
    }
  }

  std::vector<OutcomeMatrix> matrices;
  matrices.reserve(tau);
  for (auto& m : rounds) matrices.emplace_back(std::move(m));
  return BlockSequence{tau, std::move(matrices), p};
}

std::optional<int> SmallestBlockLength(const PreferenceMatrix& p, int limit) {
  for (int tau = 1; tau <= limit; ++tau) {
    bool integral = true;
    for (int i = 0; i < p.arms() && integral; ++i) {
      for (int j = i + 1; j < p.arms(); ++j) {
        const double product = tau * p(i, j);
        if (std::abs(product - std::round(product)) > kMultiplicityTolerance) {
          integral = false;
          break;
        }
      }
    }
    if (integral) return tau;
  }
  return std::nullopt;
}

Environment::Environment(std::int64_t horizon) : horizon_(horizon) {
  if (horizon < 1) throw ContractViolation("horizon must be >= 1");
}

RoundResult Environment::Play(std::int64_t t, ActionPair pair) {
  if (t < 1 || t > horizon_)
    throw ContractViolation("round " + std::to_string(t) +
                            " outside horizon " + std::to_string(horizon_));
  const int k = arms();
  if (pair.first < 0 || pair.first >= k || pair.second < 0 || pair.second >= k)
    throw ContractViolation("action pair index out of range");
  return DoPlay(t, pair);
}

LossVector Environment::SettledLoss(std::int64_t) const {
  throw ContractViolation("environment has no deferred losses");
}

StochasticEnvironment::StochasticEnvironment(PreferenceMatrix p,
                                             LossVector expected_loss,
                                             std::int64_t horizon,
                                             std::uint64_t seed)
    : Environment(horizon),
      p_(std::move(p)),
      loss_(std::move(expected_loss)),
      key_(seed) {
  if (loss_.arms() != p_.arms())
    throw ContractViolation("expected loss length differs from K");
}

int StochasticEnvironment::Duel(std::int64_t t, int i, int j) const {
  const int k = p_.arms();
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  const std::uint64_t position =
      static_cast<std::uint64_t>(t) * k * k + static_cast<std::uint64_t>(lo) * k + hi;
  const double u = CounterRng::ToUnit(CounterRng::At(key_, position));
  const int lo_wins = u < p_(lo, hi) ? 1 : -1;
  return i == lo ? lo_wins : -lo_wins;
}

OutcomeMatrix StochasticEnvironment::RealisedMatrix(std::int64_t t) const {
  const int k = p_.arms();
  SquareMatrix<int> m(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) m(i, j) = Duel(t, i, j);
  return OutcomeMatrix(std::move(m));
}

RoundResult StochasticEnvironment::DoPlay(std::int64_t t, ActionPair pair) {
  // p_ii = 1/2, so the diagonal draw is the fair coin for self-duels.
  const int y = Duel(t, pair.first, pair.second);
  return RoundResult{DuelOutcome(y), loss_};
}

std::unique_ptr<StochasticEnvironment> MakeBordaEnvironment(
    const PreferenceMatrix& p, std::int64_t horizon, std::uint64_t seed) {
  return std::make_unique<StochasticEnvironment>(p, ExpectedBordaLoss(p),
                                                 horizon, seed);
}

std::unique_ptr<StochasticEnvironment> MakeUtilityEnvironment(
    const UtilityVector& x, std::int64_t horizon, std::uint64_t seed) {
  return std::make_unique<StochasticEnvironment>(
      LinkedPreferences(x), UtilityLoss(x), horizon, seed);
}

BlockEnvironment::BlockEnvironment(BlockSequence sequence, std::int64_t horizon,
                                   LossModel model, std::uint64_t seed)
    : Environment(horizon),
      sequence_(std::move(sequence)),
      model_(model),
      key_(seed) {
  if (model_ == LossModel::kUtility)
    throw ContractViolation("block environments have no utility losses");
  if (model_ == LossModel::kBorda) {
    for (const auto& m : sequence_.matrices)
      block_losses_.push_back(BordaLoss(m));
  }
}

RoundResult BlockEnvironment::DoPlay(std::int64_t t, ActionPair pair) {
  const OutcomeMatrix& m = sequence_.At(t);
  int y;
  if (pair.first == pair.second) {
    y = CounterRng::ToUnit(CounterRng::At(key_, static_cast<std::uint64_t>(t))) <
                0.5
            ? 1
            : -1;
  } else {
    y = m(pair.first, pair.second);
  }
  std::optional<LossVector> loss;
  if (model_ == LossModel::kBorda)
    loss = block_losses_[static_cast<std::size_t>((t - 1) % sequence_.tau)];
  return RoundResult{DuelOutcome(y), std::move(loss)};
}

void BlockEnvironment::Settle() {
  if (!deferred()) return;
  const CumulativeOutcomeMatrix total = sequence_.Cumulative(horizon());
  block_losses_.clear();
  if (model_ == LossModel::kCopeland) {
    block_losses_.push_back(CopelandLoss(total));
    return;
  }
  const Matrix game = total.AsReal();
  double scale = 1.0;
  for (double v : game.data()) scale = std::max(scale, std::abs(v));
  SolverOptions options;
  options.tolerance = 1e-9 * scale;
  equilibrium_ = VonNeumannWinner(game, options);
  for (const auto& m : sequence_.matrices)
    block_losses_.push_back(VonNeumannLoss(equilibrium_->row, m));
}

LossVector BlockEnvironment::SettledLoss(std::int64_t t) const {
  if (!deferred()) return Environment::SettledLoss(t);
  if (block_losses_.empty())
    throw ContractViolation("Settle() must run before reading losses");
  if (t < 1 || t > horizon()) throw ContractViolation("round outside horizon");
  if (model_ == LossModel::kCopeland) return block_losses_.front();
  return block_losses_[static_cast<std::size_t>((t - 1) % sequence_.tau)];
}

}  // namespace duelbench
