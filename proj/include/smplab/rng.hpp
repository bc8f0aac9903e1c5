#pragma once

#include "smplab/bitstring.hpp"

#include <cstdint>
#include <random>

namespace smplab {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of the experiment seeded with `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ull));
}

/// Seedable deterministic generator (mt19937_64). Streams are split with
/// `derive_seed`, never by sharing one engine across trials.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  Rng split(std::uint64_t index) { return Rng(derive_seed(engine_(), index)); }

  /// Uniform integer in [0, bound). bound >= 1.
  std::uint64_t uniform(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }
  bool bit() { return engine_() >> 63; }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  BitString bits(std::size_t size) {
    BitString out(size);
    std::size_t pos = 0;
    while (pos < size) {
      std::uint64_t word = engine_();
      const std::size_t take = std::min<std::size_t>(64, size - pos);
      for (std::size_t i = 0; i < take; ++i, ++pos) out.set(pos, (word >> (63 - i)) & 1u);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace smplab
