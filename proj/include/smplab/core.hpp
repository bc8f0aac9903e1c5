#pragma once

// Number-in-hand SMP model: k players each see one n-bit fragment and their
// granted random strings, send one message, and a deterministic referee maps
// the k messages to an output bit.

#include "smplab/bitstring.hpp"
#include "smplab/randomness.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smplab {

class InputTuple {
 public:
  /// Throws ConfigError unless k >= 2, n >= 1 and every fragment has n bits.
  explicit InputTuple(std::vector<BitString> fragments);
  /// Player i receives bits [(k-1-i)*n, (k-i)*n) of `packed`. Needs k*n <= 64.
  static InputTuple unpack(std::uint64_t packed, int k, std::size_t n);

  int k() const { return static_cast<int>(fragments_.size()); }
  std::size_t n() const { return fragments_.front().size(); }
  const BitString& operator[](int i) const { return fragments_[static_cast<std::size_t>(i)]; }
  const std::vector<BitString>& fragments() const { return fragments_; }

  /// x_1 ^ ... ^ x_k.
  BitString combined() const;

  friend bool operator==(const InputTuple&, const InputTuple&) = default;

 private:
  std::vector<BitString> fragments_;
};

struct Transcript {
  std::vector<BitString> messages;
  std::size_t cost = 0;
};

std::size_t cost_of(const Transcript& t);

struct ProtocolOutcome {
  bool output = false;
  std::optional<bool> correct;
};

/// (fragment, granted random strings) -> message.
using PlayerMap = std::function<BitString(const BitString& fragment, std::span<const BitString> view)>;
/// (messages, referee coins) -> output. The coins are empty unless the
/// protocol declares referee_coin_bits > 0.
using RefereeMap = std::function<bool(std::span<const BitString> messages, const BitString& coins)>;

struct ProtocolSpec;

/// Marks a spec as `count` independent instances of `base` whose referee
/// accepts iff every instance accepts. Lets the exact evaluator factor the
/// randomness space.
struct Repetition {
  std::shared_ptr<const ProtocolSpec> base;
  int count = 1;
};

struct ProtocolSpec {
  std::string name;
  int k = 2;
  std::size_t n = 1;
  RandomnessSpace randomness;
  std::vector<PlayerMap> players;
  RefereeMap referee;
  /// Upper bound on each player's message length; declared cost is the sum.
  std::vector<std::size_t> message_bits;
  std::size_t referee_coin_bits = 0;
  std::optional<Repetition> repetition;

  std::size_t declared_cost() const;
  const RandomnessMode& mode() const { return randomness.mode; }
  /// Structural checks: counts agree, randomness space is valid.
  void validate() const;
};

/// Runs one execution. Pure: the result depends only on the arguments.
std::pair<Transcript, ProtocolOutcome> execute(const ProtocolSpec& spec, const InputTuple& input,
                                               const RandomnessAssignment& randomness,
                                               const BitString& referee_coins = {});

/// Same as `execute` with precomputed per-player views.
std::pair<Transcript, ProtocolOutcome> execute_views(const ProtocolSpec& spec,
                                                     const InputTuple& input,
                                                     std::span<const std::vector<BitString>> views,
                                                     const BitString& referee_coins = {});

nlohmann::json to_json(const InputTuple& input);
InputTuple input_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

}  // namespace smplab
