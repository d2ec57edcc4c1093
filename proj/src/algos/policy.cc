#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "duelbench/algos.h"

namespace duelbench {

double EtaUtility(int k, std::int64_t horizon) {
  if (k < 2 || horizon < 1) throw ContractViolation("need K >= 2, T >= 1");
  return 4.0 / k * std::sqrt((k - 1) * std::log(k) / (3.0 * horizon));
}

double EtaBorda(int k, std::int64_t horizon) {
  if (k < 2 || horizon < 1) throw ContractViolation("need K >= 2, T >= 1");
  return 2.0 * std::sqrt(std::log(k) / (static_cast<double>(k) * horizon));
}

double EtaSparring(int k, std::int64_t round) {
  if (k < 2 || round < 1) throw ContractViolation("need K >= 2, t >= 1");
  return std::sqrt(2.0 * std::log(k) / (static_cast<double>(round) * k));
}

std::vector<double> GibbsDistribution(const std::vector<double>& losses,
                                      double eta) {
  const double best = *std::min_element(losses.begin(), losses.end());
  std::vector<double> p(losses.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < losses.size(); ++a) {
    p[a] = std::exp(-eta * (losses[a] - best));
    sum += p[a];
  }
  for (double& v : p) v /= sum;
  return p;
}

Policy::Policy(int k, std::uint64_t seed) : k_(k), rng_(seed) {
  if (k < 2) throw ContractViolation("a duelling policy needs K >= 2");
}

ActionPair Policy::Select() {
  if (pending_) throw std::logic_error("Select() called twice without Observe()");
  const ActionPair pair = DoSelect();
  pending_ = pair;
  return pair;
}

void Policy::Observe(DuelOutcome y) {
  const ActionPair pair = ConsumePending();
  DoObserve(pair, y);
}

ActionPair Policy::ConsumePending() {
  if (!pending_) throw std::logic_error("Observe() called without Select()");
  const ActionPair pair = *pending_;
  pending_.reset();
  ++round_;
  return pair;
}

int Policy::UniformOther(int excluded) {
  const int b = rng_.UniformInt(k_ - 1);
  return b >= excluded ? b + 1 : b;
}

std::string ToString(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kExp3Unif:
      return "Exp3+UnifK-1";
    case Algorithm::kExp3Sparring:
      return "Exp3-Sparring";
    case Algorithm::kExp3PSparring:
      return "Exp3.P-Sparring";
    case Algorithm::kVnUnif:
      return "VN+UnifK-1";
    case Algorithm::kUcbUnif:
      return "UCB+UnifK-1";
    case Algorithm::kWsw:
      return "WS-W";
    case Algorithm::kRex3:
      return "REX3";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  for (Algorithm a :
       {Algorithm::kExp3Unif, Algorithm::kExp3Sparring, Algorithm::kExp3PSparring,
        Algorithm::kVnUnif, Algorithm::kUcbUnif, Algorithm::kWsw,
        Algorithm::kRex3}) {
    if (ToString(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::unique_ptr<Policy> MakePolicy(const AlgorithmConfig& config, int k,
                                   std::int64_t horizon, std::uint64_t seed) {
  switch (config.algorithm) {
    case Algorithm::kExp3Unif: {
      const double eta =
          config.eta ? *config.eta
                     : (config.eta_rule == EtaRule::kBorda ? EtaBorda(k, horizon)
                                                           : EtaUtility(k, horizon));
      return std::make_unique<Exp3UnifPolicy>(k, eta, seed);
    }
    case Algorithm::kExp3Sparring:
      return std::make_unique<Exp3SparringPolicy>(k, seed, config.eta);
    case Algorithm::kExp3PSparring:
      return std::make_unique<Exp3PSparringPolicy>(k, horizon, config.delta, seed);
    case Algorithm::kVnUnif:
      return std::make_unique<VnUnifPolicy>(k, seed, config.solver_tolerance);
    case Algorithm::kUcbUnif:
      return std::make_unique<UcbUnifPolicy>(k, config.alpha, seed);
    case Algorithm::kWsw:
      return std::make_unique<WswPolicy>(k, seed);
    case Algorithm::kRex3:
      return std::make_unique<Rex3Policy>(k, horizon, seed);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace duelbench
