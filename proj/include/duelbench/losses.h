#pragma once

// Loss models. Each function maps a round's (or the horizon's) duel results
// to a per-arm loss vector; lower is better.

#include <vector>

#include "duelbench/core.h"

namespace duelbench {

// Probability of losing against an opponent drawn uniformly from all K arms
// (including the arm itself, which contributes a draw of 1/2):
//   loss_i = 1/2 + 1/(2K) * sum_j m(j, i).
LossVector BordaLoss(const OutcomeMatrix& m);

// Expectation of BordaLoss when every duel is sampled from p:
//   loss_i = 1 - (1/K) * sum_j p(i, j).
LossVector ExpectedBordaLoss(const PreferenceMatrix& p);

// Normalised count of arms that beat i over the whole horizon:
//   loss_i = #{ j : M(T)_ij < 0 } / (K - 1).
LossVector CopelandLoss(const CumulativeOutcomeMatrix& m);

LossVector UtilityLoss(const UtilityVector& x);

// Loss of each arm against the mixed strategy u: loss_i = sum_j u_j m(j, i).
LossVector VonNeumannLoss(const MixedStrategy& u, const OutcomeMatrix& m);

// All indices attaining the minimum, ascending.
std::vector<int> WinnerArgmin(const std::vector<double>& cumulative_losses);

// Linear link (1 + x_i - x_j) / 2.
double LinearLink(double xi, double xj);

// Preference matrix induced by utilities through the linear link.
PreferenceMatrix LinkedPreferences(const UtilityVector& x);

// Expected Borda loss of the duels induced by utility losses under the
// linear link: 1/2 + lbar_i / 2 - (1/(2K)) sum_j lbar_j. Analysis helper;
// no policy uses it.
LossVector BordaFromUtilityLoss(const LossVector& utility_losses);

}  // namespace duelbench
