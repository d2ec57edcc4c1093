#include "duelbench/losses.h"

#include <algorithm>
#include <numeric>

namespace duelbench {

LossVector BordaLoss(const OutcomeMatrix& m) {
  const int k = m.arms();
  std::vector<double> loss(k, 0.5);
  for (int i = 0; i < k; ++i) {
    int column = 0;
    for (int j = 0; j < k; ++j) column += m(j, i);
    loss[i] += column / (2.0 * k);
  }
  return LossVector(std::move(loss), LossModel::kBorda);
}

LossVector ExpectedBordaLoss(const PreferenceMatrix& p) {
  const int k = p.arms();
  std::vector<double> loss(k);
  for (int i = 0; i < k; ++i) {
    double row = 0.0;
    for (int j = 0; j < k; ++j) row += p(i, j);
    loss[i] = 1.0 - row / k;
  }
  return LossVector(std::move(loss), LossModel::kBorda);
}

LossVector CopelandLoss(const CumulativeOutcomeMatrix& m) {
  const int k = m.arms();
  if (k < 2) throw ContractViolation("Copeland loss needs K >= 2");
  std::vector<double> loss(k, 0.0);
  for (int i = 0; i < k; ++i) {
    int beaten_by = 0;
    for (int j = 0; j < k; ++j)
      if (m(i, j) < 0) ++beaten_by;
    loss[i] = static_cast<double>(beaten_by) / (k - 1);
  }
  return LossVector(std::move(loss), LossModel::kCopeland);
}

LossVector UtilityLoss(const UtilityVector& x) {
  std::vector<double> loss(x.values());
  for (double& v : loss) v = 1.0 - v;
  return LossVector(std::move(loss), LossModel::kUtility);
}

LossVector VonNeumannLoss(const MixedStrategy& u, const OutcomeMatrix& m) {
  const int k = m.arms();
  if (u.arms() != k)
    throw ContractViolation("strategy and outcome matrix dimensions differ");
  std::vector<double> loss(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) loss[i] += u[j] * m(j, i);
  return LossVector(std::move(loss), LossModel::kVonNeumann);
}

std::vector<int> WinnerArgmin(const std::vector<double>& cumulative_losses) {
  if (cumulative_losses.empty())
    throw ContractViolation("winner of an empty loss vector");
  const double best =
      *std::min_element(cumulative_losses.begin(), cumulative_losses.end());
  std::vector<int> winners;
  for (std::size_t a = 0; a < cumulative_losses.size(); ++a)
    if (cumulative_losses[a] == best) winners.push_back(static_cast<int>(a));
  return winners;
}

double LinearLink(double xi, double xj) { return 0.5 * (1.0 + xi - xj); }

PreferenceMatrix LinkedPreferences(const UtilityVector& x) {
  const int k = x.arms();
  Matrix p(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) p(i, j) = LinearLink(x[i], x[j]);
  return PreferenceMatrix(std::move(p));
}

LossVector BordaFromUtilityLoss(const LossVector& utility_losses) {
  const int k = utility_losses.arms();
  const auto& lbar = utility_losses.values();
  const double mean = std::accumulate(lbar.begin(), lbar.end(), 0.0) / k;
  std::vector<double> loss(k);
  for (int i = 0; i < k; ++i) loss[i] = 0.5 + 0.5 * lbar[i] - 0.5 * mean;
  return LossVector(std::move(loss), LossModel::kBorda);
}

}  // namespace duelbench
