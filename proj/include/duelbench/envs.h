#pragma once

// Environments: where duel outcomes and per-round losses come from.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "duelbench/core.h"
#include "duelbench/gamesolver.h"
#include "duelbench/rng.h"

namespace duelbench {

// Y = +1 with probability p(i, j). Requires i != j.
DuelOutcome StochasticDuel(const PreferenceMatrix& p, int i, int j,
                           CounterRng& rng);
// Y = +1 with probability LinearLink(x_i, x_j). Requires i != j.
DuelOutcome UtilityDuel(const UtilityVector& x, int i, int j, CounterRng& rng);

// Thrown when tau * p_ij is not an integer. Names the offending pair
// (1-based) and the product.
class BlockMultiplicityError : public std::invalid_argument {
 public:
  BlockMultiplicityError(int i, int j, double product);
  int row() const { return i_; }
  int col() const { return j_; }
  double product() const { return product_; }

 private:
  int i_, j_;
  double product_;
};

// tau outcome matrices whose win frequencies reproduce a preference matrix
// exactly: for every pair i < j, exactly tau * p_ij rounds have
// m(i, j) = +1, in uniformly random order. Repeats cyclically.
struct BlockSequence {
  int tau = 0;
  std::vector<OutcomeMatrix> matrices;
  PreferenceMatrix source;

  // Matrix used in round t >= 1.
  const OutcomeMatrix& At(std::int64_t t) const {
    return matrices[static_cast<std::size_t>((t - 1) % tau)];
  }
  // Sum of the first `rounds` matrices of the cyclic sequence.
  CumulativeOutcomeMatrix Cumulative(std::int64_t rounds) const;
};

BlockSequence BuildBlockSequence(const PreferenceMatrix& p, int tau,
                                 CounterRng& rng);

// Smallest tau <= limit giving every pair integer multiplicity, if any.
std::optional<int> SmallestBlockLength(const PreferenceMatrix& p,
                                       int limit = 10000);

struct RoundResult {
  DuelOutcome outcome;
  // Absent when the loss model can only be evaluated after the horizon.
  std::optional<LossVector> loss;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual int arms() const = 0;
  std::int64_t horizon() const { return horizon_; }
  virtual LossModel loss_model() const = 0;

  // Plays round t (1 <= t <= horizon). A self-duel (first == second) is
  // decided by a fair coin.
  RoundResult Play(std::int64_t t, ActionPair pair);

  // Deferred models (Copeland, von-Neumann) define losses through M(T).
  // After the last round call Settle(), then read SettledLoss(t).
  virtual bool deferred() const { return false; }
  virtual void Settle() {}
  virtual LossVector SettledLoss(std::int64_t t) const;

 protected:
  explicit Environment(std::int64_t horizon);
  virtual RoundResult DoPlay(std::int64_t t, ActionPair pair) = 0;

 private:
  std::int64_t horizon_;
};

// Duels sampled from a preference matrix. Each unordered pair gets one draw
// per round, so (i, j) and (j, i) queried in the same round agree. Losses
// reported are the expected losses given at construction.
class StochasticEnvironment final : public Environment {
 public:
  StochasticEnvironment(PreferenceMatrix p, LossVector expected_loss,
                        std::int64_t horizon, std::uint64_t seed);

  int arms() const override { return p_.arms(); }
  LossModel loss_model() const override { return loss_.model(); }

  // Realised outcome matrix of round t (what a full query would reveal).
  OutcomeMatrix RealisedMatrix(std::int64_t t) const;

 private:
  RoundResult DoPlay(std::int64_t t, ActionPair pair) override;
  int Duel(std::int64_t t, int i, int j) const;

  PreferenceMatrix p_;
  LossVector loss_;
  std::uint64_t key_;
};

// Stochastic Borda environment: expected Borda losses of p.
std::unique_ptr<StochasticEnvironment> MakeBordaEnvironment(
    const PreferenceMatrix& p, std::int64_t horizon, std::uint64_t seed);
// Utility environment: linear-link duels, utility losses 1 - x.
std::unique_ptr<StochasticEnvironment> MakeUtilityEnvironment(
    const UtilityVector& x, std::int64_t horizon, std::uint64_t seed);

// Deterministic cyclic replay of a block sequence.
class BlockEnvironment final : public Environment {
 public:
  // model is kBorda (losses per round), kCopeland or kVonNeumann (deferred).
  BlockEnvironment(BlockSequence sequence, std::int64_t horizon,
                   LossModel model, std::uint64_t seed);

  int arms() const override { return sequence_.source.arms(); }
  LossModel loss_model() const override { return model_; }
  bool deferred() const override { return model_ != LossModel::kBorda; }
  void Settle() override;
  LossVector SettledLoss(std::int64_t t) const override;

  const BlockSequence& sequence() const { return sequence_; }
  // Von-Neumann winner of M(T); set by Settle() for the von-Neumann model.
  const std::optional<GameSolution>& equilibrium() const { return equilibrium_; }

 private:
  RoundResult DoPlay(std::int64_t t, ActionPair pair) override;

  BlockSequence sequence_;
  LossModel model_;
  std::uint64_t key_;
  std::vector<LossVector> block_losses_;  // one per block position
  std::optional<GameSolution> equilibrium_;
};

}  // namespace duelbench
