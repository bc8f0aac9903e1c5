#pragma once

// Randomized sweeps over the quantum and read-k checks, as run by the
// `verify-quantum` and `verify-finner` commands.

#include <cstddef>
#include <cstdint>

namespace smplab {

struct XorMixtureSweep {
  std::size_t configurations = 0;
  double max_abs_difference = 0;  // max |lhs - rhs|
  bool passed = false;            // max_abs_difference <= 1e-9
};

/// Random qubit pairs (mixed or pure), m cycling through 1, 2, 3.
XorMixtureSweep sweep_xor_mixture(std::size_t configurations, std::uint64_t seed);

struct RacSweep {
  std::size_t encodings = 0;
  double max_excess = 0;           // max of entropy_sum - q (<= 0 expected)
  double max_squared_excess = 0;   // max of squared_sum - 8 ln2 q
  double identity_deviation = 0;   // |entropy_sum - q| for basis encodings, q = n = 1..5
  bool passed = false;
};

/// Random encodings with n in [1, 6] and q in [1, 3], plus basis encodings.
RacSweep sweep_rac(std::size_t encodings, std::uint64_t seed);

struct EntropyGrid {
  std::size_t points = 0;
  double min_slack = 0;  // min over the grid of (1 - h(1/2 - x/4)) - x^2/(8 ln 2)
  bool passed = false;
};

/// x = 2i/(points-1) for i = 0..points-1.
EntropyGrid check_entropy_grid(std::size_t points = 2001);

struct FinnerSweep {
  std::size_t families = 0;
  std::size_t failures = 0;
  double min_slack = 0;  // min of rhs - lhs
  bool passed = false;
};

FinnerSweep sweep_finner(std::size_t families, std::uint64_t seed);

}  // namespace smplab
