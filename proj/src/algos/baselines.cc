#include <algorithm>
#include <cmath>
#include <limits>

#include "duelbench/algos.h"
#include "duelbench/format.h"

namespace duelbench {

// ---- UCB+UnifK-1 ----------------------------------------------------------

UcbUnifPolicy::UcbUnifPolicy(int k, double alpha, std::uint64_t seed)
    : Policy(k, seed), alpha_(alpha), wins_(k, 0.0), plays_(k, 0) {
  if (!(alpha > 0.0)) throw ContractViolation("alpha must be positive");
}

ParameterList UcbUnifPolicy::parameters() const {
  return {{"alpha", FormatDouble(alpha_)}};
}

double UcbUnifPolicy::Index(int arm) const {
  if (plays_[arm] == 0) return std::numeric_limits<double>::infinity();
  const double t = static_cast<double>(round() + 1);
  const double n = static_cast<double>(plays_[arm]);
  return wins_[arm] / n + std::sqrt(alpha_ * std::log(t) / n);
}

std::vector<MixedStrategy> UcbUnifPolicy::LastDistributions() const {
  return {MixedStrategy::PointMass(arms(), last_first_)};
}

ActionPair UcbUnifPolicy::DoSelect() {
  int best = 0;
  double best_index = Index(0);
  for (int a = 1; a < arms(); ++a) {
    const double index = Index(a);
    if (index > best_index) {
      best = a;
      best_index = index;
    }
  }
  last_first_ = best;
  return {best, UniformOther(best)};
}

void UcbUnifPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  wins_[pair.first] += (1.0 + y.value()) / 2.0;
  ++plays_[pair.first];
}

// ---- WS-W -----------------------------------------------------------------

WswPolicy::WswPolicy(int k, std::uint64_t seed)
    : Policy(k, seed), counters_(k, 0) {}

std::vector<MixedStrategy> WswPolicy::LastDistributions() const {
  if (first_ties_.empty()) return {MixedStrategy::Uniform(arms())};
  std::vector<double> p(arms(), 0.0);
  for (int a : first_ties_) p[a] = 1.0 / first_ties_.size();
  return {MixedStrategy(std::move(p))};
}

int WswPolicy::PickTop(int excluded, std::vector<int>& ties) {
  ties.clear();
  std::int64_t top = std::numeric_limits<std::int64_t>::min();
  for (int a = 0; a < arms(); ++a) {
    if (a == excluded) continue;
    if (counters_[a] > top) {
      top = counters_[a];
      ties.assign(1, a);
    } else if (counters_[a] == top) {
      ties.push_back(a);
    }
  }
  // Ties favour last round's arms so that a winner keeps its seat.
  if (previous_) {
    for (int keep : {previous_->first, previous_->second}) {
      if (std::find(ties.begin(), ties.end(), keep) != ties.end()) {
        ties.assign(1, keep);
        return keep;
      }
    }
  }
  return ties[rng().UniformInt(static_cast<int>(ties.size()))];
}

ActionPair WswPolicy::DoSelect() {
  const int a = PickTop(-1, first_ties_);
  std::vector<int> second_ties;
  const int b = PickTop(a, second_ties);
  return {a, b};
}

void WswPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  const int winner = y.first_won() ? pair.first : pair.second;
  const int loser = y.first_won() ? pair.second : pair.first;
  ++counters_[winner];
  --counters_[loser];
  previous_ = pair;
}

// ---- REX3 -----------------------------------------------------------------

Rex3Policy::Rex3Policy(int k, std::int64_t horizon, std::uint64_t seed)
    : Policy(k, seed), log_weights_(k, 0.0), probs_(k, 1.0 / k) {
  if (horizon < 1) throw ContractViolation("horizon must be >= 1");
  gamma_ = std::min(0.5, std::sqrt(k * std::log(static_cast<double>(k)) /
                                   (0.5 * static_cast<double>(horizon))));
}

ParameterList Rex3Policy::parameters() const {
  return {{"gamma", FormatDouble(gamma_)}};
}

std::vector<MixedStrategy> Rex3Policy::LastDistributions() const {
  return {MixedStrategy(probs_), MixedStrategy(probs_)};
}

ActionPair Rex3Policy::DoSelect() {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  double sum = 0.0;
  for (int a = 0; a < arms(); ++a) {
    probs_[a] = std::exp(log_weights_[a] - top);
    sum += probs_[a];
  }
  for (double& p : probs_) p = (1.0 - gamma_) * p / sum + gamma_ / arms();
  const int a = rng().Sample(probs_);
  const int b = rng().Sample(probs_);
  return {a, b};
}

void Rex3Policy::DoObserve(ActionPair pair, DuelOutcome y) {
  // For a self-duel the two terms cancel and nothing moves.
  const double half = y.value() / 2.0;
  const double step = gamma_ / arms();
  log_weights_[pair.first] += step * half / probs_[pair.first];
  log_weights_[pair.second] -= step * half / probs_[pair.second];
}

void Rex3Policy::ObserveDraw() { ConsumePending(); }

}  // namespace duelbench
