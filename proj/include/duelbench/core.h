#pragma once

// Domain types shared by every part of the simulator: preference and outcome
// matrices, loss vectors, mixed strategies, the pair-loss combiners and the
// regret ledger.
//
// Arms are indexed 0..K-1 in code. Anything printed for humans (matrix files,
// reports) is 1-based.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace duelbench {

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Dense K x K matrix, row-major.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int k, T fill = T{})
      : k_(k), data_(static_cast<std::size_t>(k) * k, fill) {}

  int size() const { return k_; }
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * k_ + j;
  }

  int k_ = 0;
  std::vector<T> data_;
};

using Matrix = SquareMatrix<double>;

// P(i, j) is the probability that arm i beats arm j.
class PreferenceMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  // Throws ContractViolation unless K >= 2, entries lie in [0,1],
  // p_ij + p_ji = 1 and p_ii = 1/2.
  explicit PreferenceMatrix(Matrix p);
  static PreferenceMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int arms() const { return p_.size(); }
  double operator()(int i, int j) const { return p_(i, j); }
  const Matrix& probabilities() const { return p_; }

  // Expected outcome matrix 2P - 1 (skew-symmetric, entries in [-1,1]).
  Matrix ExpectedOutcomes() const;

 private:
  Matrix p_;
};

struct MatrixCheck {
  bool ok = true;
  int row = -1;
  int col = -1;
  std::string reason;

  explicit operator bool() const { return ok; }
};

// Passes iff m is skew-symmetric with zero diagonal and +-1 off the diagonal.
// On failure reports the first violating (row, col) in row-major order.
MatrixCheck ValidateOutcomeMatrix(const SquareMatrix<int>& m);

// One round of duel results. m(i, j) = +1 iff arm i beats arm j.
class OutcomeMatrix {
 public:
  explicit OutcomeMatrix(SquareMatrix<int> m);
  static OutcomeMatrix FromRows(const std::vector<std::vector<int>>& rows);

  int arms() const { return m_.size(); }
  int operator()(int i, int j) const { return m_(i, j); }
  const SquareMatrix<int>& entries() const { return m_; }

  bool operator==(const OutcomeMatrix&) const = default;

 private:
  SquareMatrix<int> m_;
};

// Running sum M(T) of outcome matrices.
class CumulativeOutcomeMatrix {
 public:
  explicit CumulativeOutcomeMatrix(int k) : m_(k, 0) {}
  // Checked construction from explicit sums; validates skew-symmetry and
  // |m_ij| <= rounds.
  CumulativeOutcomeMatrix(SquareMatrix<std::int64_t> m, std::int64_t rounds);

  void Add(const OutcomeMatrix& round);
  // Adds `times` copies of `round`.
  void Add(const OutcomeMatrix& round, std::int64_t times);

  int arms() const { return m_.size(); }
  std::int64_t rounds() const { return rounds_; }
  std::int64_t operator()(int i, int j) const { return m_(i, j); }
  Matrix AsReal() const;

 private:
  SquareMatrix<std::int64_t> m_;
  std::int64_t rounds_ = 0;
};

enum class LossModel { kBorda, kCopeland, kUtility, kVonNeumann };

std::string ToString(LossModel model);
LossModel ParseLossModel(const std::string& name);

// Per-arm losses of one round. Von-Neumann losses are signed and live in
// [-1,1]; every other model is confined to [0,1].
class LossVector {
 public:
  LossVector(std::vector<double> values, LossModel model);

  int arms() const { return static_cast<int>(values_.size()); }
  double operator[](int a) const { return values_[a]; }
  const std::vector<double>& values() const { return values_; }
  LossModel model() const { return model_; }

 private:
  std::vector<double> values_;
  LossModel model_;
};

class UtilityVector {
 public:
  explicit UtilityVector(std::vector<double> values);

  int arms() const { return static_cast<int>(values_.size()); }
  double operator[](int a) const { return values_[a]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

class MixedStrategy {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit MixedStrategy(std::vector<double> probs);
  static MixedStrategy Uniform(int k);
  static MixedStrategy PointMass(int k, int arm);

  int arms() const { return static_cast<int>(probs_.size()); }
  double operator[](int a) const { return probs_[a]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

struct ActionPair {
  int first = 0;
  int second = 0;

  bool operator==(const ActionPair&) const = default;
};

// Y_t: +1 iff the first arm of the pair won.
class DuelOutcome {
 public:
  explicit DuelOutcome(int y);
  static DuelOutcome FirstWins() { return DuelOutcome(1); }
  static DuelOutcome SecondWins() { return DuelOutcome(-1); }

  int value() const { return y_; }
  bool first_won() const { return y_ > 0; }

  bool operator==(const DuelOutcome&) const = default;

 private:
  int y_;
};

enum class Combiner { kWeak, kStrong };

std::string ToString(Combiner combiner);

inline double PsiStrong(double x, double y) { return 0.5 * (x + y); }
inline double PsiWeak(double x, double y) { return x < y ? x : y; }
double Combine(Combiner combiner, double x, double y);

// What the learner's pair losses are compared against.
//  kBestArm: min_a sum_t loss_t(a), the usual hindsight benchmark.
//  kZero:    nothing is subtracted. Used for von-Neumann losses, where the
//            equilibrium's expected cumulative loss is zero.
enum class Benchmark { kBestArm, kZero };

// `count` evenly spaced rounds in [1, horizon], always ending at horizon.
std::vector<std::int64_t> CheckpointGrid(std::int64_t horizon, int count = 200);

struct Checkpoint {
  std::int64_t t;
  double regret;

  bool operator==(const Checkpoint&) const = default;
};

class RegretLedger {
 public:
  RegretLedger(Combiner combiner, int arms, std::vector<std::int64_t> grid,
               Benchmark benchmark = Benchmark::kBestArm);

  // Accounts one round. Throws ContractViolation on out-of-range arms or a
  // loss vector of the wrong length.
  void Record(ActionPair pair, const LossVector& losses);

  double Regret() const;
  std::int64_t rounds() const { return rounds_; }
  Combiner combiner() const { return combiner_; }
  double cumulative_pair_loss() const { return pair_loss_; }
  const std::vector<double>& per_arm_cumulative() const { return arm_loss_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

 private:
  Combiner combiner_;
  Benchmark benchmark_;
  double pair_loss_ = 0.0;
  std::vector<double> arm_loss_;
  std::vector<std::int64_t> grid_;
  std::size_t next_grid_ = 0;
  std::vector<Checkpoint> checkpoints_;
  std::int64_t rounds_ = 0;
};

}  // namespace duelbench
