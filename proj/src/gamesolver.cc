#include "duelbench/gamesolver.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace duelbench {
namespace {

using Vec = std::vector<double>;

Vec RowPayoffs(const Matrix& a, const Vec& column) {
  const int k = a.size();
  Vec out(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out[i] += a(i, j) * column[j];
  return out;
}

Vec ColumnPayoffs(const Matrix& a, const Vec& row) {
  const int k = a.size();
  Vec out(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out[j] += row[i] * a(i, j);
  return out;
}

double Gap(const Matrix& a, const Vec& row, const Vec& column) {
  const Vec r = RowPayoffs(a, column);
  const Vec c = ColumnPayoffs(a, row);
  return *std::max_element(r.begin(), r.end()) -
         *std::min_element(c.begin(), c.end());
}

// Clips rounding noise and renormalises. Returns false if anything
// meaningfully negative remains.
bool Normalise(Vec& p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < -1e-9) return false;
    v = std::max(v, 0.0);
    sum += v;
  }
  if (!(sum > 0.0)) return false;
  for (double& v : p) v /= sum;
  return true;
}

void Softmax(const Vec& logits, Vec& out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

// Solves sum_{i in support} x_i a(i, j) = v for j in opponents and
// sum x_i = 1, in the least-squares / minimum-norm sense. When `transpose`
// is set the roles of rows and columns are swapped.
Vec SolveEqualiser(const Matrix& a, const std::vector<int>& support,
                   const std::vector<int>& opponents, bool transpose) {
  const int n = static_cast<int>(support.size());
  const int e = static_cast<int>(opponents.size());
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(e + 1, n + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(e + 1);
  for (int r = 0; r < e; ++r) {
    for (int c = 0; c < n; ++c) {
      lhs(r, c) = transpose ? a(opponents[r], support[c])
                            : a(support[c], opponents[r]);
    }
    lhs(r, n) = -1.0;
  }
  for (int c = 0; c < n; ++c) lhs(e, c) = 1.0;
  rhs(e) = 1.0;
  const Eigen::VectorXd sol = lhs.completeOrthogonalDecomposition().solve(rhs);
  Vec out(a.size(), 0.0);
  for (int c = 0; c < n; ++c) out[support[c]] = sol(c);
  return out;
}

// Drops the most negative entry of p from support. Returns false if p was
// already non-negative on it.
bool DropNegative(const Vec& p, std::vector<int>& support) {
  auto worst = std::min_element(support.begin(), support.end(),
                                [&](int l, int r) { return p[l] < p[r]; });
  if (worst == support.end() || p[*worst] >= -1e-12) return false;
  support.erase(worst);
  return true;
}

struct Candidate {
  Vec row;
  Vec column;
  double gap;
};

std::optional<Candidate> PolishOnce(const Matrix& a, std::vector<int>& rows,
                                    std::vector<int>& cols) {
  Vec x, y;
  for (int attempt = 0; attempt < 2 * a.size() + 2; ++attempt) {
    if (rows.empty() || cols.empty()) return std::nullopt;
    x = SolveEqualiser(a, rows, cols, /*transpose=*/false);
    if (DropNegative(x, rows)) continue;
    y = SolveEqualiser(a, cols, rows, /*transpose=*/true);
    if (DropNegative(y, cols)) continue;
    if (!Normalise(x) || !Normalise(y)) return std::nullopt;
    return Candidate{x, y, Gap(a, x, y)};
  }
  return std::nullopt;
}

// Equalises on the given supports, then adjusts them until the gap closes:
// best responses the candidate leaves out are added, and when none are
// missing the lightest members are removed.
std::optional<Candidate> Polish(const Matrix& a, std::vector<int> rows,
                                std::vector<int> cols, double tol) {
  std::optional<Candidate> best;
  for (int round = 0; round <= 4 * a.size(); ++round) {
    auto c = PolishOnce(a, rows, cols);
    if (!c) return best;
    if (!best || c->gap < best->gap) best = c;
    if (c->gap <= tol) return best;
    const Vec r = RowPayoffs(a, c->column);
    const Vec q = ColumnPayoffs(a, c->row);
    const int br = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
    const int bc = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
    bool grew = false;
    for (auto [set, idx] : {std::pair{&rows, br}, std::pair{&cols, bc}}) {
      if (std::find(set->begin(), set->end(), idx) == set->end()) {
        set->push_back(idx);
        std::sort(set->begin(), set->end());
        grew = true;
      }
    }
    if (grew) continue;
    // Nothing left to add, so the supports are too large: an equaliser on
    // them is only a least-squares compromise. Drop the lightest entries.
    auto lightest = [](const Vec& p, std::vector<int>& set) {
      if (set.size() < 2) return false;
      set.erase(std::min_element(set.begin(), set.end(),
                                 [&](int l, int r) { return p[l] < p[r]; }));
      return true;
    };
    const bool shrunk_rows = lightest(c->row, rows);
    const bool shrunk_cols = lightest(c->column, cols);
    if (!shrunk_rows && !shrunk_cols) return best;
  }
  return best;
}

// Supports suggested by approximate strategies: near-best responses to the
// opponent's strategy.
std::optional<Candidate> PolishNear(const Matrix& a, const Vec& row,
                                    const Vec& column, double slack, double tol) {
  const Vec r = RowPayoffs(a, column);
  const Vec c = ColumnPayoffs(a, row);
  const double rmax = *std::max_element(r.begin(), r.end());
  const double cmin = *std::min_element(c.begin(), c.end());
  std::vector<int> rows, cols;
  for (int i = 0; i < a.size(); ++i) {
    if (r[i] >= rmax - slack) rows.push_back(i);
    if (c[i] <= cmin + slack) cols.push_back(i);
  }
  return Polish(a, std::move(rows), std::move(cols), tol);
}

std::vector<int> Support(const Vec& p, double threshold = 1e-12) {
  std::vector<int> s;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > threshold) s.push_back(static_cast<int>(i));
  return s;
}

GameSolution Finish(const Matrix& m, Vec row, Vec column,
                    std::int64_t iterations) {
  MixedStrategy u(std::move(row));
  MixedStrategy w(std::move(column));
  double value = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) value += u[i] * m(i, j) * w[j];
  const double gap = DualityGap(m, u, w);
  return GameSolution{std::move(u), std::move(w), value, gap, iterations};
}

void CheckFinite(const Matrix& m) {
  for (double v : m.data())
    if (!std::isfinite(v)) throw ContractViolation("non-finite game entry");
}

GameSolution SolveIteratively(const Matrix& m, const SolverOptions& options) {
  const int k = m.size();
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  const Vec uniform(k, 1.0 / k);
  if (scale == 0.0) return Finish(m, uniform, uniform, 0);

  Matrix a(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = m(i, j) / scale;
  const double tol = options.tolerance / scale;
  auto accept = [&](const Candidate& c, std::int64_t it) {
    return Finish(m, c.row, c.column, it);
  };

  Vec row_start = uniform, col_start = uniform;
  if (const GameSolution* warm = options.warm_start;
      warm != nullptr && warm->row.arms() == k && warm->column.arms() == k) {
    const Vec& wr = warm->row.probs();
    const Vec& wc = warm->column.probs();
    if (Gap(a, wr, wc) <= tol) return Finish(m, wr, wc, 0);
    if (auto c = Polish(a, Support(wr), Support(wc), tol); c && c->gap <= tol)
      return accept(*c, 0);
    for (int i = 0; i < k; ++i) {
      row_start[i] = 0.9 * wr[i] + 0.1 / k;
      col_start[i] = 0.9 * wc[i] + 0.1 / k;
    }
  } else if (Gap(a, uniform, uniform) <= tol) {
    return Finish(m, uniform, uniform, 0);
  }

  constexpr double kStep = 0.2;
  Vec row_logits(k), col_logits(k);
  for (int i = 0; i < k; ++i) {
    row_logits[i] = std::log(row_start[i]);
    col_logits[i] = std::log(col_start[i]);
  }
  Vec x(k), y(k), row_grad_prev(k, 0.0), col_grad_prev(k, 0.0);
  Vec x_sum(k, 0.0), y_sum(k, 0.0);
  std::int64_t next_check = 16;
  double best_gap = std::numeric_limits<double>::infinity();

  for (std::int64_t it = 1; it <= options.max_iterations; ++it) {
    Softmax(row_logits, x);
    Softmax(col_logits, y);
    const Vec row_grad = RowPayoffs(a, y);
    const Vec col_grad = ColumnPayoffs(a, x);
    for (int i = 0; i < k; ++i) {
      row_logits[i] += kStep * (2.0 * row_grad[i] - row_grad_prev[i]);
      col_logits[i] -= kStep * (2.0 * col_grad[i] - col_grad_prev[i]);
      x_sum[i] += x[i];
      y_sum[i] += y[i];
    }
    row_grad_prev = row_grad;
    col_grad_prev = col_grad;

    if (it != next_check && it != options.max_iterations) continue;
    next_check = it < 4096 ? 2 * it : it + 4096;

    const double top_r = *std::max_element(row_logits.begin(), row_logits.end());
    const double top_c = *std::max_element(col_logits.begin(), col_logits.end());
    for (int i = 0; i < k; ++i) {
      row_logits[i] = std::max(row_logits[i] - top_r, -700.0);
      col_logits[i] = std::max(col_logits[i] - top_c, -700.0);
    }

    Vec x_avg(k), y_avg(k);
    for (int i = 0; i < k; ++i) {
      x_avg[i] = x_sum[i] / it;
      y_avg[i] = y_sum[i] / it;
    }
    for (const auto& [row, col] : {std::pair{&x_avg, &y_avg}, std::pair{&x, &y}}) {
      const double gap = Gap(a, *row, *col);
      best_gap = std::min(best_gap, gap);
      if (gap <= tol) return Finish(m, *row, *col, it);
      for (double slack : {2.0 * gap, 0.5 * gap, 8.0 * gap}) {
        if (auto c = PolishNear(a, *row, *col, slack, tol); c) {
          best_gap = std::min(best_gap, c->gap);
          if (c->gap <= tol) return accept(*c, it);
        }
      }
      // Off-support weights decay, so heavy entries also suggest supports.
      for (double threshold : {1e-2, 1e-4, 1e-6}) {
        if (auto c = Polish(a, Support(*row, threshold), Support(*col, threshold), tol);
            c) {
          best_gap = std::min(best_gap, c->gap);
          if (c->gap <= tol) return accept(*c, it);
        }
      }
    }
  }
  throw SolverError("multiplicative weights did not reach the gap tolerance",
                    best_gap * scale);
}

}  // namespace

double SecurityLevel(const Matrix& m, const MixedStrategy& row) {
  const Vec c = ColumnPayoffs(m, row.probs());
  return *std::min_element(c.begin(), c.end());
}

double BestResponseValue(const Matrix& m, const MixedStrategy& column) {
  const Vec r = RowPayoffs(m, column.probs());
  return *std::max_element(r.begin(), r.end());
}

double DualityGap(const Matrix& m, const MixedStrategy& row,
                  const MixedStrategy& column) {
  return BestResponseValue(m, column) - SecurityLevel(m, row);
}

GameSolution SolveBySimplex(const Matrix& m) {
  CheckFinite(m);
  const int k = m.size();
  if (k < 1) throw ContractViolation("empty game");

  // Shift so every payoff is >= 1; the column player's LP
  //   max sum y  s.t.  A y <= 1, y >= 0
  // then has optimum 1/value(A), and the duals of its rows give the row
  // player's strategy.
  const double shift = 1.0 - *std::min_element(m.data().begin(), m.data().end());
  const int cols = 2 * k + 1;
  const int rhs = 2 * k;
  std::vector<double> tab(static_cast<std::size_t>(k + 1) * cols, 0.0);
  auto at = [&](int r, int c) -> double& {
    return tab[static_cast<std::size_t>(r) * cols + c];
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) at(i, j) = m(i, j) + shift;
    at(i, k + i) = 1.0;
    at(i, rhs) = 1.0;
  }
  for (int j = 0; j < k; ++j) at(k, j) = -1.0;
  std::vector<int> basis(k);
  for (int i = 0; i < k; ++i) basis[i] = k + i;

  constexpr double kEps = 1e-12;
  std::int64_t pivots = 0;
  for (;; ++pivots) {
    if (pivots > 100000) throw SolverError("simplex pivot limit reached", NAN);
    int enter = -1;
    for (int c = 0; c < 2 * k; ++c) {
      if (at(k, c) < -kEps) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < k; ++r) {
      if (at(r, enter) <= kEps) continue;
      const double ratio = at(r, rhs) / at(r, enter);
      if (leave < 0 || ratio < best_ratio - kEps ||
          (ratio <= best_ratio + kEps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw SolverError("unbounded game LP", NAN);
    const double pivot = at(leave, enter);
    for (int c = 0; c < cols; ++c) at(leave, c) /= pivot;
    for (int r = 0; r <= k; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (int c = 0; c < cols; ++c) at(r, c) -= factor * at(leave, c);
    }
    basis[leave] = enter;
  }

  const double total = at(k, rhs);
  Vec column(k, 0.0), row(k, 0.0);
  for (int r = 0; r < k; ++r)
    if (basis[r] < k) column[basis[r]] = at(r, rhs) / total;
  for (int i = 0; i < k; ++i) row[i] = at(k, k + i) / total;
  if (!Normalise(row) || !Normalise(column))
    throw SolverError("simplex produced an invalid strategy", NAN);
  return Finish(m, std::move(row), std::move(column), pivots);
}

GameSolution VonNeumannWinner(const Matrix& m, const SolverOptions& options) {
  if (m.size() < 1) throw ContractViolation("empty game");
  if (!(options.tolerance > 0.0))
    throw ContractViolation("gap tolerance must be positive");
  CheckFinite(m);
  if (options.method == SolverMethod::kSimplex) return SolveBySimplex(m);
  return SolveIteratively(m, options);
}

}  // namespace duelbench
