#include "duelbench/rng.h"

#include <stdexcept>

#include "duelbench/core.h"

namespace duelbench {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t HashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveKey(std::uint64_t master,
                        std::initializer_list<std::string_view> labels) {
  std::uint64_t key = Mix64(master + kGolden);
  for (std::string_view label : labels) {
    // Length is mixed in so ("ab", "c") and ("a", "bc") differ.
    key = Mix64(key ^ HashLabel(label));
    key = Mix64(key + label.size() + kGolden);
  }
  return key;
}

std::uint64_t CounterRng::At(std::uint64_t key, std::uint64_t position) {
  return Mix64(key + position * kGolden);
}

int CounterRng::UniformInt(int n) {
  if (n < 1) throw ContractViolation("UniformInt needs n >= 1");
  // Lemire's multiply-shift with rejection.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = NextU64();
    const unsigned __int128 product =
        static_cast<unsigned __int128>(x) * range;
    if (static_cast<std::uint64_t>(product) >= threshold)
      return static_cast<int>(product >> 64);
  }
}

int CounterRng::Sample(std::span<const double> probs) {
  if (probs.empty()) throw ContractViolation("sampling from an empty vector");
  const double u = Uniform01();
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left u above the accumulated total.
  return last_positive;
}

std::uint64_t EnvSeed::Derive(std::string_view purpose) const {
  const std::string it = std::to_string(iteration);
  return DeriveKey(master, {experiment, algorithm, it, purpose});
}

}  // namespace duelbench
