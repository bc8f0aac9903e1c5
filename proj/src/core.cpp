#include "smplab/core.hpp"

#include "smplab/error.hpp"

#include <numeric>

namespace smplab {

InputTuple::InputTuple(std::vector<BitString> fragments) : fragments_(std::move(fragments)) {
  if (fragments_.size() < 2) {
    throw ConfigError("an instance needs k >= 2 fragments, got " +
                      std::to_string(fragments_.size()));
  }
  const std::size_t n = fragments_.front().size();
  if (n < 1) throw ConfigError("fragments must have n >= 1 bits");
  for (const auto& f : fragments_) {
    if (f.size() != n) throw ConfigError("all fragments must have the same length n");
  }
}

InputTuple InputTuple::unpack(std::uint64_t packed, int k, std::size_t n) {
  if (k < 2 || n < 1 || static_cast<std::size_t>(k) * n > 64) {
    throw ConfigError("InputTuple::unpack needs k >= 2, n >= 1 and k*n <= 64");
  }
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<BitString> fragments;
  fragments.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::size_t shift = static_cast<std::size_t>(k - 1 - i) * n;
    fragments.push_back(BitString::from_uint((packed >> shift) & mask, n));
  }
  return InputTuple(std::move(fragments));
}

BitString InputTuple::combined() const {
  BitString acc(n());
  for (const auto& f : fragments_) acc ^= f;
  return acc;
}

std::size_t cost_of(const Transcript& t) {
  return std::accumulate(t.messages.begin(), t.messages.end(), std::size_t{0},
                         [](std::size_t acc, const BitString& m) { return acc + m.size(); });
}

std::size_t ProtocolSpec::declared_cost() const {
  return std::accumulate(message_bits.begin(), message_bits.end(), std::size_t{0});
}

void ProtocolSpec::validate() const {
  randomness.validate();
  if (randomness.k != k) throw ConfigError(name + ": randomness space is for a different k");
  if (n < 1) throw ConfigError(name + ": n must be at least 1");
  if (players.size() != static_cast<std::size_t>(k) ||
      message_bits.size() != static_cast<std::size_t>(k)) {
    throw ConfigError(name + ": need exactly one player map and message bound per player");
  }
  if (!referee) throw ConfigError(name + ": missing referee");
}

std::pair<Transcript, ProtocolOutcome> execute(const ProtocolSpec& spec, const InputTuple& input,
                                               const RandomnessAssignment& randomness,
                                               const BitString& referee_coins) {
  spec.randomness.check(randomness);
  std::vector<std::vector<BitString>> views;
  views.reserve(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i) views.push_back(view_of(randomness, i));
  return execute_views(spec, input, views, referee_coins);
}

std::pair<Transcript, ProtocolOutcome> execute_views(const ProtocolSpec& spec,
                                                     const InputTuple& input,
                                                     std::span<const std::vector<BitString>> views,
                                                     const BitString& referee_coins) {
  if (input.k() != spec.k) {
    throw ConfigError(spec.name + ": input has k=" + std::to_string(input.k()) +
                      " but the protocol has k=" + std::to_string(spec.k));
  }
  if (input.n() != spec.n) {
    throw ConfigError(spec.name + ": fragments have " + std::to_string(input.n()) +
                      " bits, protocol expects " + std::to_string(spec.n));
  }
  if (views.size() != static_cast<std::size_t>(spec.k)) {
    throw ConfigError(spec.name + ": need one random view per player");
  }
  if (referee_coins.size() != spec.referee_coin_bits) {
    throw ConfigError(spec.name + ": referee coins have the wrong length");
  }
  Transcript transcript;
  transcript.messages.reserve(views.size());
  for (int i = 0; i < spec.k; ++i) {
    BitString m = spec.players[i](input[i], views[i]);
    if (m.size() > spec.message_bits[i]) {
      throw ProtocolError(spec.name + ": player " + std::to_string(i) + " sent " +
                          std::to_string(m.size()) + " bits, declared at most " +
                          std::to_string(spec.message_bits[i]));
    }
    transcript.messages.push_back(std::move(m));
  }
  transcript.cost = cost_of(transcript);
  ProtocolOutcome outcome;
  outcome.output = spec.referee(transcript.messages, referee_coins);
  return {std::move(transcript), outcome};
}

nlohmann::json to_json(const InputTuple& input) {
  nlohmann::json fragments = nlohmann::json::array();
  for (const auto& f : input.fragments()) fragments.push_back(f.to_hex());
  return {{"schema_version", 1}, {"index_base", 0}, {"k", input.k()},
          {"n", input.n()},      {"fragments", std::move(fragments)}};
}

InputTuple input_from_json(const nlohmann::json& j) {
  try {
    const int k = j.at("k").get<int>();
    const auto n = j.at("n").get<std::size_t>();
    const auto& fragments = j.at("fragments");
    if (fragments.size() != static_cast<std::size_t>(k)) {
      throw ConfigError("instance JSON: fragments.length != k");
    }
    std::vector<BitString> out;
    for (const auto& f : fragments) out.push_back(BitString::from_hex(f.get<std::string>(), n));
    return InputTuple(std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance JSON: ") + e.what());
  }
}

nlohmann::json to_json(const Transcript& t) {
  nlohmann::json messages = nlohmann::json::array();
  nlohmann::json lengths = nlohmann::json::array();
  for (const auto& m : t.messages) {
    messages.push_back(m.to_hex());
    lengths.push_back(m.size());
  }
  return {{"schema_version", 1},
          {"index_base", 0},
          {"k", t.messages.size()},
          {"lengths", std::move(lengths)},
          {"messages", std::move(messages)},
          {"cost", t.cost}};
}

Transcript transcript_from_json(const nlohmann::json& j) {
  try {
    const auto& messages = j.at("messages");
    const auto& lengths = j.at("lengths");
    if (messages.size() != lengths.size()) {
      throw ConfigError("transcript JSON: messages and lengths differ in size");
    }
    Transcript t;
    for (std::size_t i = 0; i < messages.size(); ++i) {
      t.messages.push_back(
          BitString::from_hex(messages[i].get<std::string>(), lengths[i].get<std::size_t>()));
    }
    t.cost = cost_of(t);
    if (j.contains("cost") && j.at("cost").get<std::size_t>() != t.cost) {
      throw ConfigError("transcript JSON: cost does not match message lengths");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed transcript JSON: ") + e.what());
  }
}

}  // namespace smplab
