#include <algorithm>

#include "duelbench/algos.h"
#include "duelbench/format.h"

namespace duelbench {

Exp3UnifPolicy::Exp3UnifPolicy(int k, double eta, std::uint64_t seed)
    : Policy(k, seed),
      eta_(eta),
      estimates_(k, 0.0),
      probs_(k, 1.0 / k) {
  if (!(eta > 0.0)) throw ContractViolation("learning rate must be positive");
}

ParameterList Exp3UnifPolicy::parameters() const {
  return {{"eta", FormatDouble(eta_)}};
}

std::vector<MixedStrategy> Exp3UnifPolicy::LastDistributions() const {
  return {MixedStrategy(probs_)};
}

ActionPair Exp3UnifPolicy::DoSelect() {
  probs_ = GibbsDistribution(estimates_, eta_);
  const int first = rng().Sample(probs_);
  return {first, UniformOther(first)};
}

void Exp3UnifPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  // The estimate accumulates; each round only the first arm can be charged.
  const double p = std::max(probs_[pair.first], kProbabilityFloor);
  estimates_[pair.first] += (1.0 - y.value()) / (2.0 * p);
}

}  // namespace duelbench
