#include "smplab/protocols.hpp"

#include "smplab/error.hpp"
#include "smplab/harness.hpp"

#include <algorithm>
#include <numeric>

namespace smplab {

namespace {

void check_kn(int k, std::size_t n) {
  if (k < 2) throw ConfigError("k must be at least 2");
  if (n < 1) throw ConfigError("n must be at least 1");
}

std::string params(int k, std::size_t n) {
  return "k=" + std::to_string(k) + ",n=" + std::to_string(n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Gap-Parity

bool gap_parity_promise(std::size_t weight, std::size_t n) {
  return !(3 * weight >= n && 3 * weight <= 2 * n);
}

std::optional<bool> gp_value(const InputTuple& input) {
  const std::size_t w = input.combined().popcount();
  const std::size_t n = input.n();
  if (!gap_parity_promise(w, n)) return std::nullopt;
  return 2 * w >= n;
}

bool gap_parity_protocol(const InputTuple& input, std::size_t shared_index) {
  if (shared_index >= input.n()) {
    throw ConfigError("shared index " + std::to_string(shared_index) + " out of range [0, " +
                      std::to_string(input.n()) + ")");
  }
  bool parity = false;
  for (const auto& fragment : input.fragments()) parity ^= fragment.get(shared_index);
  return parity;
}

ProtocolSpec boosted_gap_parity_spec(int k, std::size_t n, std::size_t samples) {
  check_kn(k, n);
  if (samples % 2 == 0) throw ConfigError("boosted Gap-Parity needs an odd number of indices");
  ProtocolSpec spec;
  spec.name = samples == 1 ? "gap-parity(" + params(k, n) + ")"
                           : "gap-parity-boosted(" + params(k, n) + ",s=" + std::to_string(samples) + ")";
  spec.k = k;
  spec.n = n;
  spec.randomness = RandomnessSpace::uniform_symbols(RandomnessMode::t_shared(k), k, samples, n);
  const std::size_t index_bits = spec.randomness.symbol_bits;
  for (int i = 0; i < k; ++i) {
    spec.players.push_back([samples, index_bits, n](const BitString& x,
                                                     std::span<const BitString> view) {
      BitString m(samples);
      for (std::size_t s = 0; s < samples; ++s) {
        const std::uint64_t j = view[0].slice(s * index_bits, index_bits).to_uint();
        if (j >= n) throw ConfigError("shared index out of range");
        m.set(s, x.get(j));
      }
      return m;
    });
    spec.message_bits.push_back(samples);
  }
  spec.referee = [samples](std::span<const BitString> messages, const BitString&) {
    BitString parities(samples);
    for (const auto& m : messages) parities ^= m;
    return 2 * parities.popcount() > samples;
  };
  return spec;
}

ProtocolSpec gap_parity_spec(int k, std::size_t n) { return boosted_gap_parity_spec(k, n, 1); }

// ---------------------------------------------------------------------------
// Equality

bool all_equal(const InputTuple& input) {
  const auto& f = input.fragments();
  return std::all_of(f.begin(), f.end(), [&](const BitString& x) { return x == f.front(); });
}

BitString equality_xor_player(const BitString& fragment, std::span<const BitString> instances) {
  BitString m(instances.size());
  for (std::size_t j = 0; j < instances.size(); ++j) {
    if (instances[j].size() != fragment.size()) {
      throw ConfigError("equality-xor: random string and fragment lengths differ");
    }
    m.set(j, instances[j].dot(fragment));
  }
  return m;
}

bool equality_xor_referee(std::span<const BitString> messages) {
  if (messages.empty()) throw ConfigError("equality-xor referee: no messages");
  BitString parity(messages.front().size());
  for (const auto& m : messages) {
    if (m.size() != parity.size()) throw ConfigError("equality-xor referee: ragged messages");
    parity ^= m;
  }
  return parity.is_zero();
}

namespace {

ProtocolSpec equality_xor_single(int k, std::size_t n) {
  ProtocolSpec spec;
  spec.name = "equality-xor(" + params(k, n) + ",c=1)";
  spec.k = k;
  spec.n = n;
  spec.randomness = RandomnessSpace::uniform_bits(RandomnessMode::xor_shared(), k, n);
  for (int i = 0; i < k; ++i) {
    spec.players.push_back([](const BitString& x, std::span<const BitString> view) {
      return equality_xor_player(x, view.first(1));
    });
    spec.message_bits.push_back(1);
  }
  spec.referee = [](std::span<const BitString> messages, const BitString&) {
    return equality_xor_referee(messages);
  };
  return spec;
}

}  // namespace

ProtocolSpec equality_xor_spec(int k, std::size_t n, int c) {
  check_kn(k, n);
  if (c < 1) throw ConfigError("equality-xor needs c >= 1");
  ProtocolSpec base = equality_xor_single(k, n);
  if (c == 1) return base;
  ProtocolSpec spec = parallel_repeat(base, c);
  spec.name = "equality-xor(" + params(k, n) + ",c=" + std::to_string(c) + ")";
  return spec;
}

bool equality_xor_parity_identity(const InputTuple& input, const XorTuple& r) {
  const int k = input.k();
  if (r.k != k || r.len != input.n()) throw ConfigError("parity identity: shape mismatch");
  const BitString& last = input[k - 1];
  bool acc = false;
  for (int i = 0; i + 1 < k; ++i) acc ^= r.strings[i].dot(input[i] ^ last);
  return acc;
}

std::optional<Rational> equality_xor_error(int k, std::size_t n, int c, const InputTuple& input) {
  if (input.k() != k || input.n() != n) throw ConfigError("equality-xor: input shape mismatch");
  if (all_equal(input)) return std::nullopt;
  const auto eval = exact_eval(equality_xor_spec(k, n, c), equality_problem(), InputSet::of({input}));
  return Rational(1) - eval.acceptance(0);
}

ProtocolSpec send_all_equality_spec(int k, std::size_t n) {
  check_kn(k, n);
  ProtocolSpec spec;
  spec.name = "send-all-equality(" + params(k, n) + ")";
  spec.k = k;
  spec.n = n;
  spec.randomness = RandomnessSpace::uniform_bits(RandomnessMode::none(), k, 0);
  for (int i = 0; i < k; ++i) {
    spec.players.push_back([](const BitString& x, std::span<const BitString>) { return x; });
    spec.message_bits.push_back(n);
  }
  spec.referee = [](std::span<const BitString> messages, const BitString&) {
    return std::all_of(messages.begin(), messages.end(),
                       [&](const BitString& m) { return m == messages.front(); });
  };
  return spec;
}

ProtocolSpec sampled_equality_spec(int k, std::size_t n, int samples) {
  check_kn(k, n);
  if (samples < 1) throw ConfigError("sampled equality needs at least one sample");
  ProtocolSpec spec;
  spec.name = "sampled-equality(" + params(k, n) + ",s=" + std::to_string(samples) + ")";
  spec.k = k;
  spec.n = n;
  spec.randomness = RandomnessSpace::uniform_symbols(RandomnessMode::none(), k,
                                                     static_cast<std::size_t>(samples), n);
  const std::size_t index_bits = spec.randomness.symbol_bits;
  const std::size_t report_bits = index_bits + 1;
  for (int i = 0; i < k; ++i) {
    spec.players.push_back([samples, index_bits](const BitString& x,
                                                 std::span<const BitString> view) {
      BitString m;
      for (int s = 0; s < samples; ++s) {
        const BitString index = view[0].slice(static_cast<std::size_t>(s) * index_bits, index_bits);
        m.append(index);
        m.push_back(x.get(index.to_uint()));
      }
      return m;
    });
    spec.message_bits.push_back(static_cast<std::size_t>(samples) * report_bits);
  }
  spec.referee = [index_bits, report_bits](std::span<const BitString> messages, const BitString&) {
    std::map<std::uint64_t, bool> seen;
    for (const auto& m : messages) {
      for (std::size_t pos = 0; pos + report_bits <= m.size(); pos += report_bits) {
        const std::uint64_t j = m.slice(pos, index_bits).to_uint();
        const bool bit = m.get(pos + index_bits);
        auto [it, inserted] = seen.emplace(j, bit);
        if (!inserted && it->second != bit) return false;
      }
    }
    return true;
  };
  return spec;
}

// ---------------------------------------------------------------------------
// Reductions

namespace {

BitString exact_message(const ProtocolSpec& spec, int player, BitString m) {
  if (m.size() != spec.message_bits[player]) {
    throw ProtocolError(spec.name + ": player " + std::to_string(player) +
                        " sent a message shorter than declared; it cannot be split");
  }
  return m;
}

std::vector<BitString> split(const BitString& s, std::span<const std::size_t> lengths) {
  std::vector<BitString> out;
  std::size_t pos = 0;
  for (auto len : lengths) {
    out.push_back(s.slice(pos, len));
    pos += len;
  }
  if (pos != s.size()) throw ProtocolError("message length does not match the declared layout");
  return out;
}

}  // namespace

ProtocolSpec parallel_repeat(const ProtocolSpec& base_in, int count) {
  base_in.validate();
  if (count < 1) throw ConfigError("repetition count must be at least 1");
  auto base = std::make_shared<const ProtocolSpec>(base_in);
  ProtocolSpec spec;
  spec.name = base->name + "^" + std::to_string(count);
  spec.k = base->k;
  spec.n = base->n;
  spec.randomness = base->randomness;
  spec.randomness.symbols *= static_cast<std::size_t>(count);
  spec.referee_coin_bits = base->referee_coin_bits * static_cast<std::size_t>(count);
  const std::size_t base_len = base->randomness.len();
  for (int i = 0; i < base->k; ++i) {
    spec.players.push_back([base, i, count, base_len](const BitString& x,
                                                      std::span<const BitString> view) {
      BitString m;
      std::vector<BitString> instance_view(view.size());
      for (int c = 0; c < count; ++c) {
        for (std::size_t v = 0; v < view.size(); ++v) {
          instance_view[v] = view[v].slice(static_cast<std::size_t>(c) * base_len, base_len);
        }
        m.append(exact_message(*base, i, base->players[i](x, instance_view)));
      }
      return m;
    });
    spec.message_bits.push_back(base->message_bits[i] * static_cast<std::size_t>(count));
  }
  spec.referee = [base, count](std::span<const BitString> messages, const BitString& coins) {
    std::vector<BitString> instance(messages.size());
    const std::size_t coin_bits = base->referee_coin_bits;
    for (int c = 0; c < count; ++c) {
      for (std::size_t i = 0; i < messages.size(); ++i) {
        const std::size_t len = base->message_bits[i];
        instance[i] = messages[i].slice(static_cast<std::size_t>(c) * len, len);
      }
      if (!base->referee(instance, coins.slice(static_cast<std::size_t>(c) * coin_bits, coin_bits))) {
        return false;
      }
    }
    return true;
  };
  spec.repetition = Repetition{base, count};
  return spec;
}

ProtocolSpec collapse_players(const ProtocolSpec& spec_in) {
  spec_in.validate();
  if (spec_in.mode().kind() != ModeKind::None) {
    throw UnsupportedModeError("collapse_players needs a protocol without shared randomness, got " +
                               spec_in.mode().to_string());
  }
  if (spec_in.k == 2) return spec_in;
  auto orig = std::make_shared<const ProtocolSpec>(spec_in);
  const int k = orig->k;
  const std::size_t n = orig->n;
  const std::size_t len = orig->randomness.len();

  ProtocolSpec spec;
  spec.name = "collapsed(" + orig->name + ")";
  spec.k = 2;
  spec.n = static_cast<std::size_t>(k - 1) * n;
  spec.randomness = orig->randomness;
  spec.randomness.k = 2;
  spec.randomness.symbols *= static_cast<std::size_t>(k - 1);
  spec.referee_coin_bits = orig->referee_coin_bits;

  spec.players.push_back([orig, n, len](const BitString& x, std::span<const BitString> view) {
    const std::vector<BitString> own{view[0].slice(0, len)};
    return orig->players[0](x.slice(0, n), own);
  });
  spec.players.push_back([orig, k, n, len](const BitString& x, std::span<const BitString> view) {
    BitString m;
    for (int i = 1; i < k; ++i) {
      const auto offset = static_cast<std::size_t>(i - 1);
      const std::vector<BitString> own{view[0].slice(offset * len, len)};
      m.append(exact_message(*orig, i, orig->players[i](x.slice(offset * n, n), own)));
    }
    return m;
  });
  spec.message_bits = {orig->message_bits[0],
                       std::accumulate(orig->message_bits.begin() + 1, orig->message_bits.end(),
                                       std::size_t{0})};
  spec.referee = [orig](std::span<const BitString> messages, const BitString& coins) {
    std::vector<BitString> all{messages[0]};
    const std::span<const std::size_t> rest(orig->message_bits.data() + 1,
                                            orig->message_bits.size() - 1);
    for (auto& m : split(messages[1], rest)) all.push_back(std::move(m));
    return orig->referee(all, coins);
  };
  return spec;
}

InputTuple collapse_input(const InputTuple& input) {
  if (input.k() == 2) return input;
  const std::size_t wide = static_cast<std::size_t>(input.k() - 1) * input.n();
  BitString first = input[0];
  first.append(BitString(wide - input.n()));
  BitString rest;
  for (int i = 1; i < input.k(); ++i) rest.append(input[i]);
  return InputTuple({std::move(first), std::move(rest)});
}

ProtocolSpec newman_sample(const ProtocolSpec& spec_in, std::size_t m, std::uint64_t seed) {
  spec_in.validate();
  if (m < 1) throw ConfigError("newman_sample needs at least one table row");
  auto orig = std::make_shared<const ProtocolSpec>(spec_in);
  Rng rng(seed);
  // table[row][player] is that player's view under the row's assignment.
  auto table = std::make_shared<std::vector<std::vector<std::vector<BitString>>>>();
  for (std::size_t row = 0; row < m; ++row) {
    const RandomnessAssignment a = orig->randomness.sample(rng);
    std::vector<std::vector<BitString>> views;
    for (int i = 0; i < orig->k; ++i) views.push_back(view_of(a, i));
    table->push_back(std::move(views));
  }

  ProtocolSpec spec;
  spec.name = "newman(" + orig->name + ",m=" + std::to_string(m) + ")";
  spec.k = orig->k;
  spec.n = orig->n;
  spec.randomness = RandomnessSpace::uniform_symbols(RandomnessMode::t_shared(orig->k), orig->k, 1, m);
  spec.message_bits = orig->message_bits;
  spec.referee_coin_bits = orig->referee_coin_bits;
  spec.referee = orig->referee;
  for (int i = 0; i < orig->k; ++i) {
    spec.players.push_back([orig, table, i](const BitString& x, std::span<const BitString> view) {
      const std::uint64_t row = view[0].to_uint();
      return orig->players[i](x, (*table).at(row)[static_cast<std::size_t>(i)]);
    });
  }
  return spec;
}

ProtocolSpec via_xor_emulation(const ProtocolSpec& xor_spec) {
  xor_spec.validate();
  if (xor_spec.mode().kind() != ModeKind::XorShared) {
    throw UnsupportedModeError("via_xor_emulation needs an XOR-shared protocol");
  }
  auto orig = std::make_shared<const ProtocolSpec>(xor_spec);
  ProtocolSpec spec = xor_spec;
  spec.name = orig->name + "@tshared:2";
  spec.randomness.mode = RandomnessMode::t_shared(2);
  spec.repetition.reset();
  spec.players.clear();
  for (int i = 0; i < orig->k; ++i) {
    spec.players.push_back([orig, i](const BitString& x, std::span<const BitString> view) {
      const std::vector<BitString> pairs(view.begin(), view.end());
      const std::vector<BitString> own{emulate_xor_view(orig->k, i, pairs)};
      return orig->players[i](x, own);
    });
  }
  return spec;
}

ProtocolSpec via_lower_emulation(const ProtocolSpec& spec_in, int t) {
  spec_in.validate();
  if (spec_in.mode().kind() != ModeKind::TShared) {
    throw UnsupportedModeError("via_lower_emulation needs a t-shared protocol");
  }
  const RandomnessSpace& space = spec_in.randomness;
  if (space.symbol_range != (std::uint64_t{1} << space.symbol_bits)) {
    throw UnsupportedModeError("slicing emulation needs uniform bit strings");
  }
  auto orig = std::make_shared<const ProtocolSpec>(spec_in);
  const int target = orig->mode().t();
  const std::size_t out_len = space.len();
  const std::size_t source_len = required_source_len(orig->k, t, target, out_len);

  ProtocolSpec spec = spec_in;
  spec.name = orig->name + "@tshared:" + std::to_string(t);
  spec.randomness = RandomnessSpace::uniform_bits(RandomnessMode::t_shared(t), orig->k, source_len);
  spec.repetition.reset();
  spec.players.clear();
  for (int i = 0; i < orig->k; ++i) {
    spec.players.push_back([orig, i, t, target, out_len](const BitString& x,
                                                         std::span<const BitString> view) {
      const std::vector<BitString> higher(view.begin(), view.end());
      return orig->players[i](x, emulate_lower_view(orig->k, t, target, i, higher, out_len));
    });
  }
  return spec;
}

}  // namespace smplab
