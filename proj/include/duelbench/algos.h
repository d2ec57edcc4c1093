#pragma once

// Duelling-bandit policies. Every policy follows the same protocol: Select()
// emits the pair for the next round, Observe() feeds back the outcome of
// exactly that pair. The two calls must alternate.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "duelbench/core.h"
#include "duelbench/gamesolver.h"
#include "duelbench/rng.h"

namespace duelbench {

// Denominator floor for every importance weight 1/p.
inline constexpr double kProbabilityFloor = 1e-6;

// Fixed-horizon learning rate for utility-based losses:
//   (4/K) sqrt((K-1) log K / (3T)).
double EtaUtility(int k, std::int64_t horizon);
// Fixed-horizon learning rate for Borda losses: 2 sqrt(log K / (K T)).
double EtaBorda(int k, std::int64_t horizon);
// Anytime Exp3 rate sqrt(2 log K / (t K)) used by Exp3-Sparring.
double EtaSparring(int k, std::int64_t round);

using ParameterList = std::vector<std::pair<std::string, std::string>>;

class Policy {
 public:
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  virtual std::string name() const = 0;
  virtual ParameterList parameters() const = 0;

  ActionPair Select();
  void Observe(DuelOutcome y);

  int arms() const { return k_; }
  // Number of completed select/observe cycles.
  std::int64_t round() const { return round_; }

  // The distributions the last Select() drew its arms from.
  virtual std::vector<MixedStrategy> LastDistributions() const = 0;

 protected:
  Policy(int k, std::uint64_t seed);

  virtual ActionPair DoSelect() = 0;
  virtual void DoObserve(ActionPair pair, DuelOutcome y) = 0;

  CounterRng& rng() { return rng_; }
  // Closes the pending round without calling DoObserve.
  ActionPair ConsumePending();
  // Arm drawn uniformly from [K] \ {excluded}.
  int UniformOther(int excluded);

 private:
  int k_;
  CounterRng rng_;
  std::int64_t round_ = 0;
  std::optional<ActionPair> pending_;
};

// softmax(-eta * losses), computed stably.
std::vector<double> GibbsDistribution(const std::vector<double>& losses,
                                      double eta);

// Exp3 on the first arm, second arm uniform over the rest. Accumulates the
// importance-weighted loss estimate (1 - Y) / (2 p(A)) on the first arm.
class Exp3UnifPolicy final : public Policy {
 public:
  Exp3UnifPolicy(int k, double eta, std::uint64_t seed);

  std::string name() const override { return "Exp3+UnifK-1"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  double learning_rate() const { return eta_; }
  const std::vector<double>& cumulative_estimates() const { return estimates_; }

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;

  double eta_;
  std::vector<double> estimates_;
  std::vector<double> probs_;
};

// Two Exp3 learners, one per slot. Side A is charged (1 - Y)/2, side B
// (1 + Y)/2. Uses the anytime rate unless a fixed rate is given.
class Exp3SparringPolicy final : public Policy {
 public:
  Exp3SparringPolicy(int k, std::uint64_t seed,
                     std::optional<double> fixed_eta = std::nullopt);

  std::string name() const override { return "Exp3-Sparring"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  const std::vector<double>& estimates_first() const { return first_; }
  const std::vector<double>& estimates_second() const { return second_; }

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;

  std::optional<double> fixed_eta_;
  std::vector<double> first_, second_;
  std::vector<double> probs_first_, probs_second_;
};

// Two Exp3.P learners on gains with explicit exploration gamma and bias
// beta, parameterised by horizon and confidence delta.
class Exp3PSparringPolicy final : public Policy {
 public:
  // Throws std::invalid_argument if the horizon is too short (gamma >= 1)
  // or delta is outside (0, 1).
  Exp3PSparringPolicy(int k, std::int64_t horizon, double delta,
                      std::uint64_t seed);

  std::string name() const override { return "Exp3.P-Sparring"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  double beta() const { return beta_; }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& gains_first() const { return first_; }
  const std::vector<double>& gains_second() const { return second_; }
  // Mixture before the second normalisation.
  const std::vector<double>& mixed_first() const { return mixed_first_; }

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;
  std::vector<double> Mixture(const std::vector<double>& gains) const;

  std::int64_t horizon_;
  double delta_;
  double beta_, eta_, gamma_;
  std::vector<double> first_, second_;
  std::vector<double> mixed_first_, mixed_second_;
  std::vector<double> probs_first_, probs_second_;
};

// First arm drawn from the von-Neumann winner of the estimated cumulative
// outcome matrix, second arm uniform over the rest. The winner comes from
// the iterative solver, warm-started from the previous round; if that route
// cannot certify the gap, the round is solved by the exact simplex route.
class VnUnifPolicy final : public Policy {
 public:
  VnUnifPolicy(int k, std::uint64_t seed, double tolerance = 1e-6);

  std::string name() const override { return "VN+UnifK-1"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  const Matrix& estimate() const { return estimate_; }
  // Rounds solved by the simplex fallback so far.
  std::int64_t simplex_fallbacks() const { return simplex_fallbacks_; }

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;

  double tolerance_;
  Matrix estimate_;
  std::optional<GameSolution> winner_;
  std::int64_t simplex_fallbacks_ = 0;
};

// Borda reduction: UCB index on the first arm's empirical win rate against
// a uniformly drawn second arm.
class UcbUnifPolicy final : public Policy {
 public:
  UcbUnifPolicy(int k, double alpha, std::uint64_t seed);

  std::string name() const override { return "UCB+UnifK-1"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  double Index(int arm) const;

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;

  double alpha_;
  std::vector<double> wins_;
  std::vector<std::int64_t> plays_;
  int last_first_ = 0;
};

// Winner Stays (weak regret): integer score per arm, +1 per win, -1 per
// loss. Picks the top scorers, preferring last round's arms on ties.
class WswPolicy final : public Policy {
 public:
  WswPolicy(int k, std::uint64_t seed);

  std::string name() const override { return "WS-W"; }
  ParameterList parameters() const override { return {}; }
  std::vector<MixedStrategy> LastDistributions() const override;

  const std::vector<std::int64_t>& counters() const { return counters_; }

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;
  int PickTop(int excluded, std::vector<int>& ties);

  std::vector<std::int64_t> counters_;
  std::optional<ActionPair> previous_;
  std::vector<int> first_ties_;
};

// Relative Exp3: a single gamma-mixed exponential-weights distribution
// queried twice; the winner's weight goes up, the loser's down.
class Rex3Policy final : public Policy {
 public:
  Rex3Policy(int k, std::int64_t horizon, std::uint64_t seed);

  std::string name() const override { return "REX3"; }
  ParameterList parameters() const override;
  std::vector<MixedStrategy> LastDistributions() const override;

  double gamma() const { return gamma_; }
  const std::vector<double>& log_weights() const { return log_weights_; }
  // Completes a round that ended in a draw; weights are left untouched.
  void ObserveDraw();

 private:
  ActionPair DoSelect() override;
  void DoObserve(ActionPair pair, DuelOutcome y) override;

  double gamma_;
  std::vector<double> log_weights_;
  std::vector<double> probs_;
};

enum class Algorithm {
  kExp3Unif,
  kExp3Sparring,
  kExp3PSparring,
  kVnUnif,
  kUcbUnif,
  kWsw,
  kRex3,
};

std::string ToString(Algorithm algorithm);
Algorithm ParseAlgorithm(const std::string& name);

enum class EtaRule { kBorda, kUtility };

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::kExp3Unif;
  EtaRule eta_rule = EtaRule::kBorda;  // Exp3+UnifK-1 only
  std::optional<double> eta;           // overrides eta_rule
  double alpha = 0.51;                 // UCB+UnifK-1
  double delta = 0.1;                  // Exp3.P-Sparring
  double solver_tolerance = 1e-6;      // VN+UnifK-1
};

std::unique_ptr<Policy> MakePolicy(const AlgorithmConfig& config, int k,
                                   std::int64_t horizon, std::uint64_t seed);

}  // namespace duelbench
