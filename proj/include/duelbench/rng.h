#pragma once

// Counter-based random numbers. A stream is a 64-bit key; the n-th draw is a
// pure function of (key, n), so streams can be derived independently for
// every (experiment, algorithm, iteration) cell and results never depend on
// scheduling. Distributions are implemented here rather than via <random>
// so that transcripts are bit-identical across standard libraries.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace duelbench {

// SplitMix64 finaliser.
std::uint64_t Mix64(std::uint64_t x);

// Hashes labels into a stream key below `master`.
std::uint64_t DeriveKey(std::uint64_t master,
                        std::initializer_list<std::string_view> labels);

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t NextU64() { return At(key_, ++counter_); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() { return ToUnit(NextU64()); }
  // Uniform on {0, ..., n-1}; n >= 1.
  int UniformInt(int n);
  bool Bernoulli(double p) { return Uniform01() < p; }
  // Index drawn from a probability vector by inversion.
  int Sample(std::span<const double> probs);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  // Stateless access: draw number `position` of stream `key`.
  static std::uint64_t At(std::uint64_t key, std::uint64_t position);
  static double ToUnit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Seed of one simulation cell.
struct EnvSeed {
  std::uint64_t master = 0;
  std::string experiment;
  std::string algorithm;
  std::int64_t iteration = 0;

  // Key of the stream used for `purpose` ("env", "policy", ...).
  std::uint64_t Derive(std::string_view purpose) const;
};

}  // namespace duelbench
