#pragma once

// Equilibria of two-player zero-sum matrix games.
//
// Convention: entry m(i, j) is the row player's payoff when the row player
// picks i and the column player picks j. The row player maximises. For an
// outcome matrix (m(i, j) = +1 iff i beats j) the row player's optimal
// strategy is the von-Neumann winner: it beats or ties every arm.
//
// Two independent routes are provided:
//  * kMultiplicativeWeights: optimistic Hedge self-play with averaged
//    strategies. Every few hundred iterations the supports suggested by the
//    averages are "polished" by solving the equalising linear system on
//    them. A candidate is accepted only when its duality gap, computed
//    exactly from best responses, is within tolerance.
//  * kSimplex: dense tableau simplex with Bland's rule on the classical LP
//    reformulation. Exact up to rounding; used as the reference solver.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "duelbench/core.h"

namespace duelbench {

enum class SolverMethod { kMultiplicativeWeights, kSimplex };

struct GameSolution {
  MixedStrategy row;     // maximiser; the von-Neumann winner
  MixedStrategy column;  // minimiser
  double value = 0.0;    // row^T m column
  double gap = 0.0;      // max_i [m column]_i - min_j [row^T m]_j
  std::int64_t iterations = 0;
};

struct SolverOptions {
  SolverMethod method = SolverMethod::kMultiplicativeWeights;
  double tolerance = 1e-6;
  std::int64_t max_iterations = 1'000'000;
  // Previous solution of a nearby game. Only used by the iterative route.
  const GameSolution* warm_start = nullptr;
};

// Thrown when the iterative route exhausts its iteration cap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved_gap)
      : std::runtime_error(what), achieved_gap_(achieved_gap) {}
  double achieved_gap() const { return achieved_gap_; }

 private:
  double achieved_gap_;
};

// Solves the game. Throws ContractViolation for non-finite entries or
// tolerance <= 0, SolverError on non-convergence.
GameSolution VonNeumannWinner(const Matrix& m, const SolverOptions& options = {});

GameSolution SolveBySimplex(const Matrix& m);

// min_j [row^T m]_j: what the row strategy guarantees.
double SecurityLevel(const Matrix& m, const MixedStrategy& row);
// max_i [m column]_i: the most a row player can extract against `column`.
double BestResponseValue(const Matrix& m, const MixedStrategy& column);
double DualityGap(const Matrix& m, const MixedStrategy& row,
                  const MixedStrategy& column);

}  // namespace duelbench
