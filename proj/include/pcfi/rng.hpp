#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pcfi {

// Deterministic random source used for every seeded operation.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// derived variates are produced here:
//   - uniform_index(n): rejection sampling on the raw 64-bit output
//   - uniform01():      top 53 bits scaled into [0, 1)
//   - normal():         Box-Muller, one variate per call (two uniforms)
// Changing any of these changes kRngAlgorithm.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64-rejection-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  double uniform01();

  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

// First k entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n,
                                                      std::uint64_t k,
                                                      Rng& rng);

}  // namespace pcfi
