#pragma once

// Shared-randomness modes for k-player protocols, their samplers, and the
// constructions that emulate a weaker mode from a stronger one.
//
// Player indices are 0-based throughout the API and in serialized form.

#include "smplab/bitstring.hpp"
#include "smplab/rational.hpp"
#include "smplab/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace smplab {

enum class ModeKind { None, XorShared, TShared };

/// None: private coins only. XorShared: r_0 ^ ... ^ r_{k-1} == 0 and any k-1
/// strings are uniform and independent. TShared(t): one string per t-subset of
/// players; TShared(k) is unrestricted shared randomness, TShared(k-1) is
/// randomness on the forehead.
class RandomnessMode {
 public:
  static RandomnessMode none() { return RandomnessMode(ModeKind::None, 0); }
  static RandomnessMode xor_shared() { return RandomnessMode(ModeKind::XorShared, 0); }
  static RandomnessMode t_shared(int t) { return RandomnessMode(ModeKind::TShared, t); }
  /// "none", "xor", "tshared:<t>" (also "unrestricted" given k).
  static RandomnessMode parse(const std::string& text, int k);

  ModeKind kind() const { return kind_; }
  int t() const { return t_; }

  /// Throws ConfigError unless the mode makes sense for k players.
  void validate(int k) const;
  std::string to_string() const;

  friend bool operator==(const RandomnessMode&, const RandomnessMode&) = default;

 private:
  RandomnessMode(ModeKind kind, int t) : kind_(kind), t_(t) {}

  ModeKind kind_;
  int t_;
};

/// Sorted 0-based player set.
using Subset = std::vector<int>;

/// All t-subsets of {0..k-1} in lexicographic order.
std::vector<Subset> subsets_of_size(int k, int t);
/// The t-subsets that contain `player`, lexicographic order.
std::vector<Subset> subsets_containing(int k, int t, int player);
std::string subset_key(const Subset& s);
Subset parse_subset_key(const std::string& key);
std::uint64_t binomial(int n, int r);

struct XorTuple {
  int k = 0;
  std::size_t len = 0;
  std::vector<BitString> strings;

  /// Validating constructor; throws ConfigError if the XOR of all strings is non-zero.
  static XorTuple from_strings(std::vector<BitString> strings);
  BitString combined() const;
};

struct TSharedAssignment {
  int k = 0;
  int t = 0;
  std::size_t len = 0;
  std::map<Subset, BitString> table;

  const BitString& at(const Subset& s) const;
  /// Throws ConfigError unless the table has one len-bit string per t-subset.
  void validate() const;
};

/// Private coins, one independent string per player.
struct PrivateAssignment {
  int k = 0;
  std::size_t len = 0;
  std::vector<BitString> strings;
};

using RandomnessAssignment = std::variant<PrivateAssignment, XorTuple, TSharedAssignment>;

RandomnessMode mode_of(const RandomnessAssignment& a);
int players_of(const RandomnessAssignment& a);
std::size_t length_of(const RandomnessAssignment& a);

/// The strings player `player` may read: {p_i} for None, {r_i} for XorShared,
/// (R_S) for S containing the player, lexicographic in S, for TShared.
std::vector<BitString> view_of(const RandomnessAssignment& a, int player);

// Samplers. The seed overloads construct a fresh generator.
XorTuple sample_xor_shared(int k, std::size_t len, std::uint64_t seed);
XorTuple sample_xor_shared(int k, std::size_t len, Rng& rng);
TSharedAssignment sample_t_shared(int k, int t, std::size_t len, std::uint64_t seed);
TSharedAssignment sample_t_shared(int k, int t, std::size_t len, Rng& rng);

/// r_i = XOR of the strings shared over the distinct pairs among
/// {i-1, i} and {i, i+1} (indices mod k). Needs t == 2.
XorTuple emulate_xor_from_2shared(const TSharedAssignment& pairs);

/// Source length needed to emulate `target`-shared strings of `out_len` bits
/// from `t`-shared strings by repeated one-level slicing.
std::size_t required_source_len(int k, int t, int target, std::size_t out_len);

/// One-level rule (t -> t-1): each (t-1)-subset S, in lexicographic order, is
/// carved from parent S + {min(complement of S)}; siblings take consecutive
/// disjoint slices of the parent in lexicographic order. Larger gaps compose
/// the rule. `out_len` defaults to the longest length the source allows.
TSharedAssignment emulate_lower_from_higher(const TSharedAssignment& source, int target,
                                            std::optional<std::size_t> out_len = std::nullopt);

/// Player-local form of `emulate_lower_from_higher`: derives the player's
/// `target`-view from its `t`-view, with identical results.
std::vector<BitString> emulate_lower_view(int k, int t, int target, int player,
                                          const std::vector<BitString>& view,
                                          std::size_t out_len);

/// Player-local form of `emulate_xor_from_2shared`, from the player's 2-view.
BitString emulate_xor_view(int k, int player, const std::vector<BitString>& pair_view);

/// Distribution over assignments of a mode. Each independent string consists
/// of `symbols` symbols of `symbol_bits` bits, each uniform over
/// [0, symbol_range). The default is uniform bits. XorShared requires
/// symbol_range == 2^symbol_bits.
struct RandomnessSpace {
  RandomnessMode mode = RandomnessMode::none();
  int k = 2;
  std::size_t symbols = 0;
  std::size_t symbol_bits = 1;
  std::uint64_t symbol_range = 2;

  static RandomnessSpace uniform_bits(RandomnessMode mode, int k, std::size_t len);
  static RandomnessSpace uniform_symbols(RandomnessMode mode, int k, std::size_t symbols,
                                         std::uint64_t range);

  std::size_t len() const { return symbols * symbol_bits; }
  /// Number of independently drawn strings (k, k-1 or C(k,t)).
  std::size_t free_strings() const;
  /// Number of equally likely assignments, or nullopt past 2^63.
  std::optional<std::uint64_t> size() const;

  void validate() const;
  RandomnessAssignment element(std::uint64_t index) const;
  RandomnessAssignment sample(Rng& rng) const;
  /// Throws ConfigError if `a` could not have come from this space.
  void check(const RandomnessAssignment& a) const;

  friend bool operator==(const RandomnessSpace&, const RandomnessSpace&) = default;
};

/// Bits needed to write values in [0, range).
std::size_t bits_for_range(std::uint64_t range);

nlohmann::json to_json(const RandomnessAssignment& a);
RandomnessAssignment assignment_from_json(const nlohmann::json& j);

}  // namespace smplab
