#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "duelbench/algos.h"
#include "duelbench/format.h"

namespace duelbench {

Exp3SparringPolicy::Exp3SparringPolicy(int k, std::uint64_t seed,
                                       std::optional<double> fixed_eta)
    : Policy(k, seed),
      fixed_eta_(fixed_eta),
      first_(k, 0.0),
      second_(k, 0.0),
      probs_first_(k, 1.0 / k),
      probs_second_(k, 1.0 / k) {
  if (fixed_eta_ && !(*fixed_eta_ > 0.0))
    throw ContractViolation("learning rate must be positive");
}

ParameterList Exp3SparringPolicy::parameters() const {
  if (fixed_eta_) return {{"eta", FormatDouble(*fixed_eta_)}};
  return {{"eta", "anytime"}};
}

std::vector<MixedStrategy> Exp3SparringPolicy::LastDistributions() const {
  return {MixedStrategy(probs_first_), MixedStrategy(probs_second_)};
}

ActionPair Exp3SparringPolicy::DoSelect() {
  const double eta = fixed_eta_ ? *fixed_eta_ : EtaSparring(arms(), round() + 1);
  probs_first_ = GibbsDistribution(first_, eta);
  probs_second_ = GibbsDistribution(second_, eta);
  const int a = rng().Sample(probs_first_);
  const int b = rng().Sample(probs_second_);
  return {a, b};
}

void Exp3SparringPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  const double pa = std::max(probs_first_[pair.first], kProbabilityFloor);
  const double pb = std::max(probs_second_[pair.second], kProbabilityFloor);
  first_[pair.first] += (1.0 - y.value()) / (2.0 * pa);
  second_[pair.second] += (1.0 + y.value()) / (2.0 * pb);
}

Exp3PSparringPolicy::Exp3PSparringPolicy(int k, std::int64_t horizon,
                                         double delta, std::uint64_t seed)
    : Policy(k, seed),
      horizon_(horizon),
      delta_(delta),
      first_(k, 0.0),
      second_(k, 0.0),
      mixed_first_(k, 1.0 / k),
      mixed_second_(k, 1.0 / k),
      probs_first_(k, 1.0 / k),
      probs_second_(k, 1.0 / k) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  const double tk = static_cast<double>(horizon) * k;
  const double log_k = std::log(static_cast<double>(k));
  beta_ = std::sqrt(std::log(k / delta) / tk);
  eta_ = 0.95 * std::sqrt(log_k / tk);
  gamma_ = 1.05 * std::sqrt(k * log_k / static_cast<double>(horizon));
  if (gamma_ >= 1.0)
    throw std::invalid_argument(
        "Exp3.P exploration rate gamma = " + FormatDouble(gamma_) +
        " >= 1; horizon " + std::to_string(horizon) + " is too short for K = " +
        std::to_string(k));
}

ParameterList Exp3PSparringPolicy::parameters() const {
  return {{"beta", FormatDouble(beta_)},
          {"eta", FormatDouble(eta_)},
          {"gamma", FormatDouble(gamma_)},
          {"delta", FormatDouble(delta_)}};
}

std::vector<MixedStrategy> Exp3PSparringPolicy::LastDistributions() const {
  return {MixedStrategy(probs_first_), MixedStrategy(probs_second_)};
}

std::vector<double> Exp3PSparringPolicy::Mixture(
    const std::vector<double>& gains) const {
  // exp(eta G) normalised; shifting by the maximum keeps it finite.
  const double top = *std::max_element(gains.begin(), gains.end());
  std::vector<double> w(gains.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < gains.size(); ++a) {
    w[a] = std::exp(eta_ * (gains[a] - top));
    sum += w[a];
  }
  const double k = static_cast<double>(gains.size());
  for (double& v : w) v = (1.0 - gamma_) * v / sum + gamma_ / k;
  return w;
}

namespace {

std::vector<double> Normalised(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  std::vector<double> out(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) out[a] = v[a] / sum;
  return out;
}

}  // namespace

ActionPair Exp3PSparringPolicy::DoSelect() {
  mixed_first_ = Mixture(first_);
  mixed_second_ = Mixture(second_);
  probs_first_ = Normalised(mixed_first_);
  probs_second_ = Normalised(mixed_second_);
  const int a = rng().Sample(probs_first_);
  const int b = rng().Sample(probs_second_);
  return {a, b};
}

void Exp3PSparringPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  const double g = (y.value() + 1) / 2.0;
  for (int a = 0; a < arms(); ++a) {
    const double ga = (a == pair.first ? g : 0.0) + beta_;
    const double gb = (a == pair.second ? 1.0 - g : 0.0) + beta_;
    first_[a] += ga / std::max(probs_first_[a], kProbabilityFloor);
    second_[a] += gb / std::max(probs_second_[a], kProbabilityFloor);
  }
}

}  // namespace duelbench
