#include <algorithm>
#include <cmath>

#include "duelbench/algos.h"
#include "duelbench/format.h"

namespace duelbench {

VnUnifPolicy::VnUnifPolicy(int k, std::uint64_t seed, double tolerance)
    : Policy(k, seed), tolerance_(tolerance), estimate_(k, 0.0) {
  if (!(tolerance > 0.0)) throw ContractViolation("tolerance must be positive");
}

ParameterList VnUnifPolicy::parameters() const {
  return {{"solver_tolerance", FormatDouble(tolerance_)}};
}

std::vector<MixedStrategy> VnUnifPolicy::LastDistributions() const {
  if (!winner_) return {MixedStrategy::Uniform(arms())};
  return {winner_->row};
}

ActionPair VnUnifPolicy::DoSelect() {
  // The estimate grows like t, so the tolerance is taken relative to it.
  double scale = 1.0;
  for (double v : estimate_.data()) scale = std::max(scale, std::abs(v));
  SolverOptions options;
  options.tolerance = tolerance_ * scale;
  options.warm_start = winner_ ? &*winner_ : nullptr;
  try {
    winner_ = VonNeumannWinner(estimate_, options);
  } catch (const SolverError&) {
    ++simplex_fallbacks_;
    winner_ = SolveBySimplex(estimate_);
  }
  const int a = rng().Sample(winner_->row.probs());
  return {a, UniformOther(a)};
}

void VnUnifPolicy::DoObserve(ActionPair pair, DuelOutcome y) {
  const double p = std::max(winner_->row[pair.first], kProbabilityFloor);
  const double step = y.value() / ((arms() - 1) * p);
  estimate_(pair.first, pair.second) += step;
  estimate_(pair.second, pair.first) -= step;
}

}  // namespace duelbench
