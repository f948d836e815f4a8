#pragma once

#include <cstdint>
#include <vector>

namespace kge {

// Stateless stream derivation: finalizes seed + (index+1)*golden_gamma with the
// SplitMix64 mixer, so (seed, index) pairs yield decorrelated sub-seeds without
// sequential advancement.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// pcg32 (oneseq variant): 64-bit LCG state with multiplier 6364136223846793005
// and increment 1442695040888963407, XSH-RR output permutation. Fixed constants
// so identical seeds reproduce identical streams on any platform.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed);

  std::uint32_t next_u32();
  // Uniform integer in [0, bound), unbiased via rejection. bound >= 1.
  std::uint32_t next_below(std::uint32_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double next_double();
  // Standard normal via inverse CDF on (k + 0.5) / 2^53; single draw, no rejection.
  double next_normal();

 private:
  std::uint64_t state_;
};

// Inverse of the standard normal CDF for p in (0, 1). Rational initial guess
// (Acklam's coefficients) plus one Halley refinement against std::erfc.
double inverse_normal_cdf(double p);

// In-place Fisher-Yates shuffle driven by the given generator.
void shuffle(std::vector<int>& values, Pcg32& rng);

}  // namespace kge
