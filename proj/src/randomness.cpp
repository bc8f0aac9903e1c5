#include "smplab/randomness.hpp"

#include "smplab/error.hpp"

#include <algorithm>
#include <sstream>

namespace smplab {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_players(int k) {
  if (k < 2) throw ConfigError("player count k must be at least 2, got " + std::to_string(k));
}

// Child (t-1)-subsets of every t-subset under the one-level slicing rule,
// as child -> (parent, position among the parent's children).
struct ChildSlot {
  Subset parent;
  std::size_t index;
};

std::map<Subset, ChildSlot> child_layout(int k, int t) {
  std::map<Subset, std::size_t> counts;
  std::map<Subset, ChildSlot> layout;
  for (const auto& child : subsets_of_size(k, t - 1)) {
    int missing = 0;
    while (std::binary_search(child.begin(), child.end(), missing)) ++missing;
    Subset parent = child;
    parent.insert(std::lower_bound(parent.begin(), parent.end(), missing), missing);
    const std::size_t index = counts[parent]++;
    layout.emplace(child, ChildSlot{std::move(parent), index});
  }
  return layout;
}

std::size_t max_children(int k, int t) {
  std::map<Subset, std::size_t> counts;
  for (const auto& [child, slot] : child_layout(k, t)) ++counts[slot.parent];
  std::size_t best = 0;
  for (const auto& [parent, c] : counts) best = std::max(best, c);
  return best;
}

void check_emulation_levels(int k, int t, int target) {
  check_players(k);
  if (!(2 <= target && target < t && t <= k)) {
    throw ConfigError("emulation needs 2 <= target < t <= k (k=" + std::to_string(k) +
                      ", t=" + std::to_string(t) + ", target=" + std::to_string(target) + ")");
  }
}

std::size_t index_in(const std::vector<Subset>& subsets, const Subset& s) {
  auto it = std::lower_bound(subsets.begin(), subsets.end(), s);
  if (it == subsets.end() || *it != s) throw ConfigError("subset " + subset_key(s) + " missing");
  return static_cast<std::size_t>(it - subsets.begin());
}

BitString encode_symbols(const std::vector<std::uint64_t>& values, std::size_t bits) {
  BitString out;
  for (auto v : values) out.append(BitString::from_uint(v, bits));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RandomnessMode

RandomnessMode RandomnessMode::parse(const std::string& text, int k) {
  if (text == "none") return none();
  if (text == "xor") return xor_shared();
  if (text == "unrestricted") return t_shared(k);
  if (text.rfind("tshared", 0) == 0) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("mode 'tshared' needs a t, e.g. tshared:2");
    try {
      return t_shared(std::stoi(text.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("cannot parse mode '" + text + "'");
    }
  }
  throw ConfigError("unknown randomness mode '" + text + "'");
}

void RandomnessMode::validate(int k) const {
  check_players(k);
  if (kind_ == ModeKind::TShared && (t_ < 2 || t_ > k)) {
    throw ConfigError("t-shared mode needs 2 <= t <= k (t=" + std::to_string(t_) +
                      ", k=" + std::to_string(k) + ")");
  }
}

std::string RandomnessMode::to_string() const {
  switch (kind_) {
    case ModeKind::None:
      return "none";
    case ModeKind::XorShared:
      return "xor";
    case ModeKind::TShared:
      return "tshared:" + std::to_string(t_);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Subsets

std::vector<Subset> subsets_of_size(int k, int t) {
  std::vector<Subset> out;
  if (t < 0 || t > k) return out;
  Subset cur(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = t - 1;
    while (i >= 0 && cur[i] == k - t + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < t; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<Subset> subsets_containing(int k, int t, int player) {
  std::vector<Subset> out;
  for (auto& s : subsets_of_size(k, t)) {
    if (std::binary_search(s.begin(), s.end(), player)) out.push_back(std::move(s));
  }
  return out;
}

std::string subset_key(const Subset& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

Subset parse_subset_key(const std::string& key) {
  Subset out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::logic_error&) {
      throw ConfigError("bad subset key '" + key + "'");
    }
  }
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw ConfigError("subset key '" + key + "' must be strictly increasing");
  }
  return out;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t out = 1;
  for (int i = 1; i <= r; ++i) out = out * static_cast<std::uint64_t>(n - r + i) / i;
  return out;
}

// ---------------------------------------------------------------------------
// Assignments

XorTuple XorTuple::from_strings(std::vector<BitString> strings) {
  XorTuple out;
  out.k = static_cast<int>(strings.size());
  check_players(out.k);
  out.len = strings.front().size();
  out.strings = std::move(strings);
  for (const auto& s : out.strings) {
    if (s.size() != out.len) throw ConfigError("XOR tuple strings have different lengths");
  }
  if (!out.combined().is_zero()) throw ConfigError("XOR tuple does not XOR to zero");
  return out;
}

BitString XorTuple::combined() const {
  BitString acc(len);
  for (const auto& s : strings) acc ^= s;
  return acc;
}

const BitString& TSharedAssignment::at(const Subset& s) const {
  auto it = table.find(s);
  if (it == table.end()) throw ConfigError("no shared string for players {" + subset_key(s) + "}");
  return it->second;
}

void TSharedAssignment::validate() const {
  RandomnessMode::t_shared(t).validate(k);
  if (table.size() != binomial(k, t)) {
    throw ConfigError("t-shared table has " + std::to_string(table.size()) + " entries, expected " +
                      std::to_string(binomial(k, t)));
  }
  for (const auto& s : subsets_of_size(k, t)) {
    if (at(s).size() != len) throw ConfigError("t-shared string has wrong length");
  }
}

RandomnessMode mode_of(const RandomnessAssignment& a) {
  return std::visit(Overloaded{
                        [](const PrivateAssignment&) { return RandomnessMode::none(); },
                        [](const XorTuple&) { return RandomnessMode::xor_shared(); },
                        [](const TSharedAssignment& s) { return RandomnessMode::t_shared(s.t); },
                    },
                    a);
}

int players_of(const RandomnessAssignment& a) {
  return std::visit([](const auto& x) { return x.k; }, a);
}

std::size_t length_of(const RandomnessAssignment& a) {
  return std::visit([](const auto& x) { return x.len; }, a);
}

std::vector<BitString> view_of(const RandomnessAssignment& a, int player) {
  if (player < 0 || player >= players_of(a)) throw ConfigError("player index out of range");
  return std::visit(
      Overloaded{
          [&](const PrivateAssignment& p) { return std::vector<BitString>{p.strings[player]}; },
          [&](const XorTuple& x) { return std::vector<BitString>{x.strings[player]}; },
          [&](const TSharedAssignment& s) {
            std::vector<BitString> out;
            for (const auto& subset : subsets_containing(s.k, s.t, player)) {
              out.push_back(s.at(subset));
            }
            return out;
          },
      },
      a);
}

// ---------------------------------------------------------------------------
// Samplers

XorTuple sample_xor_shared(int k, std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  return sample_xor_shared(k, len, rng);
}

XorTuple sample_xor_shared(int k, std::size_t len, Rng& rng) {
  check_players(k);
  if (len < 1) throw ConfigError("XOR-shared strings need len >= 1");
  XorTuple out;
  out.k = k;
  out.len = len;
  BitString last(len);
  for (int i = 0; i + 1 < k; ++i) {
    out.strings.push_back(rng.bits(len));
    last ^= out.strings.back();
  }
  out.strings.push_back(std::move(last));
  return out;
}

TSharedAssignment sample_t_shared(int k, int t, std::size_t len, std::uint64_t seed) {
  Rng rng(seed);
  return sample_t_shared(k, t, len, rng);
}

TSharedAssignment sample_t_shared(int k, int t, std::size_t len, Rng& rng) {
  RandomnessMode::t_shared(t).validate(k);
  TSharedAssignment out{k, t, len, {}};
  for (auto& s : subsets_of_size(k, t)) out.table.emplace(std::move(s), rng.bits(len));
  return out;
}

// ---------------------------------------------------------------------------
// Emulations

namespace {

std::vector<Subset> adjacent_pairs(int k, int player) {
  const int prev = (player + k - 1) % k;
  const int next = (player + 1) % k;
  std::vector<Subset> out{{std::min(prev, player), std::max(prev, player)}};
  Subset second{std::min(player, next), std::max(player, next)};
  if (second != out.front()) out.push_back(second);
  return out;
}

}  // namespace

XorTuple emulate_xor_from_2shared(const TSharedAssignment& pairs) {
  if (pairs.t != 2) throw ConfigError("XOR emulation needs a 2-shared assignment");
  check_players(pairs.k);
  std::vector<BitString> strings;
  for (int i = 0; i < pairs.k; ++i) {
    BitString r(pairs.len);
    for (const auto& s : adjacent_pairs(pairs.k, i)) {
      const BitString& shared = pairs.at(s);
      if (shared.size() != pairs.len) throw ConfigError("pair string has wrong length");
      r ^= shared;
    }
    strings.push_back(std::move(r));
  }
  return XorTuple::from_strings(std::move(strings));
}

BitString emulate_xor_view(int k, int player, const std::vector<BitString>& pair_view) {
  const auto mine = subsets_containing(k, 2, player);
  if (pair_view.size() != mine.size()) throw ConfigError("2-shared view has wrong size");
  BitString r(pair_view.front().size());
  for (const auto& s : adjacent_pairs(k, player)) r ^= pair_view[index_in(mine, s)];
  return r;
}

std::size_t required_source_len(int k, int t, int target, std::size_t out_len) {
  check_emulation_levels(k, t, target);
  std::size_t len = out_len;
  for (int s = target + 1; s <= t; ++s) len *= max_children(k, s);
  return len;
}

namespace {

std::size_t default_out_len(int k, int t, int target, std::size_t source_len) {
  const std::size_t per_bit = required_source_len(k, t, target, 1);
  return source_len / per_bit;
}

}  // namespace

TSharedAssignment emulate_lower_from_higher(const TSharedAssignment& source, int target,
                                            std::optional<std::size_t> out_len) {
  source.validate();
  const int k = source.k;
  check_emulation_levels(k, source.t, target);
  const std::size_t final_len = out_len.value_or(default_out_len(k, source.t, target, source.len));
  if (final_len == 0 || required_source_len(k, source.t, target, final_len) > source.len) {
    throw CapacityError("source strings of " + std::to_string(source.len) +
                        " bits are too short to emulate " + std::to_string(target) +
                        "-shared strings" +
                        (out_len ? " of " + std::to_string(*out_len) + " bits" : ""));
  }
  TSharedAssignment level = source;
  for (int s = source.t; s > target; --s) {
    const std::size_t child_len = required_source_len(k, s, target, final_len) / max_children(k, s);
    TSharedAssignment next{k, s - 1, child_len, {}};
    for (const auto& [child, slot] : child_layout(k, s)) {
      next.table.emplace(child, level.at(slot.parent).slice(slot.index * child_len, child_len));
    }
    level = std::move(next);
  }
  return level;
}

std::vector<BitString> emulate_lower_view(int k, int t, int target, int player,
                                          const std::vector<BitString>& view,
                                          std::size_t out_len) {
  check_emulation_levels(k, t, target);
  std::vector<BitString> level = view;
  for (int s = t; s > target; --s) {
    const auto parents = subsets_containing(k, s, player);
    if (level.size() != parents.size()) throw ConfigError("t-shared view has wrong size");
    const std::size_t child_len = required_source_len(k, s, target, out_len) / max_children(k, s);
    const auto layout = child_layout(k, s);
    std::vector<BitString> next;
    for (const auto& child : subsets_containing(k, s - 1, player)) {
      const ChildSlot& slot = layout.at(child);
      const BitString& parent = level[index_in(parents, slot.parent)];
      if (parent.size() < (slot.index + 1) * child_len) {
        throw CapacityError("t-shared view too short for emulation");
      }
      next.push_back(parent.slice(slot.index * child_len, child_len));
    }
    level = std::move(next);
  }
  return level;
}

// ---------------------------------------------------------------------------
// RandomnessSpace

std::size_t bits_for_range(std::uint64_t range) {
  std::size_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < range) ++bits;
  return bits;
}

RandomnessSpace RandomnessSpace::uniform_bits(RandomnessMode mode, int k, std::size_t len) {
  RandomnessSpace out{mode, k, len, 1, 2};
  out.validate();
  return out;
}

RandomnessSpace RandomnessSpace::uniform_symbols(RandomnessMode mode, int k, std::size_t symbols,
                                                 std::uint64_t range) {
  RandomnessSpace out{mode, k, symbols, bits_for_range(range), range};
  out.validate();
  return out;
}

std::size_t RandomnessSpace::free_strings() const {
  switch (mode.kind()) {
    case ModeKind::None:
      return static_cast<std::size_t>(k);
    case ModeKind::XorShared:
      return static_cast<std::size_t>(k - 1);
    case ModeKind::TShared:
      return binomial(k, mode.t());
  }
  return 0;
}

void RandomnessSpace::validate() const {
  mode.validate(k);
  if (symbol_range < 1) throw ConfigError("symbol range must be at least 1");
  if (symbol_bits > 63 || (symbol_bits < 63 && (symbol_range > (std::uint64_t{1} << symbol_bits)))) {
    throw ConfigError("symbol range does not fit in the declared symbol width");
  }
  if (mode.kind() == ModeKind::XorShared && symbols > 0 &&
      symbol_range != (std::uint64_t{1} << symbol_bits)) {
    throw ConfigError("XOR-shared strings must be uniform bit strings");
  }
}

std::optional<std::uint64_t> RandomnessSpace::size() const {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;
  const std::size_t draws = symbols * free_strings();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < draws; ++i) {
    if (symbol_range != 0 && total > kLimit / symbol_range) return std::nullopt;
    total *= symbol_range;
  }
  return total;
}

RandomnessAssignment RandomnessSpace::element(std::uint64_t index) const {
  std::vector<BitString> drawn;
  for (std::size_t s = 0; s < free_strings(); ++s) {
    std::vector<std::uint64_t> values(symbols);
    for (auto& v : values) {
      v = index % symbol_range;
      index /= symbol_range;
    }
    drawn.push_back(encode_symbols(values, symbol_bits));
  }
  if (index != 0) throw ConfigError("randomness index out of range");
  switch (mode.kind()) {
    case ModeKind::None:
      return PrivateAssignment{k, len(), std::move(drawn)};
    case ModeKind::XorShared: {
      BitString last(len());
      for (const auto& s : drawn) last ^= s;
      drawn.push_back(std::move(last));
      XorTuple x;
      x.k = k;
      x.len = len();
      x.strings = std::move(drawn);
      return x;
    }
    case ModeKind::TShared: {
      TSharedAssignment out{k, mode.t(), len(), {}};
      auto subsets = subsets_of_size(k, mode.t());
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        out.table.emplace(std::move(subsets[i]), std::move(drawn[i]));
      }
      return out;
    }
  }
  throw ConfigError("unreachable randomness mode");
}

RandomnessAssignment RandomnessSpace::sample(Rng& rng) const {
  std::vector<BitString> drawn;
  const bool full_range = symbol_bits < 64 && symbol_range == (std::uint64_t{1} << symbol_bits);
  for (std::size_t s = 0; s < free_strings(); ++s) {
    if (full_range) {
      drawn.push_back(rng.bits(len()));
      continue;
    }
    std::vector<std::uint64_t> values(symbols);
    for (auto& v : values) v = rng.uniform(symbol_range);
    drawn.push_back(encode_symbols(values, symbol_bits));
  }
  switch (mode.kind()) {
    case ModeKind::None:
      return PrivateAssignment{k, len(), std::move(drawn)};
    case ModeKind::XorShared: {
      BitString last(len());
      for (const auto& s : drawn) last ^= s;
      drawn.push_back(std::move(last));
      XorTuple x;
      x.k = k;
      x.len = len();
      x.strings = std::move(drawn);
      return x;
    }
    case ModeKind::TShared: {
      TSharedAssignment out{k, mode.t(), len(), {}};
      auto subsets = subsets_of_size(k, mode.t());
      for (std::size_t i = 0; i < subsets.size(); ++i) {
        out.table.emplace(std::move(subsets[i]), std::move(drawn[i]));
      }
      return out;
    }
  }
  throw ConfigError("unreachable randomness mode");
}

void RandomnessSpace::check(const RandomnessAssignment& a) const {
  if (mode_of(a) != mode) {
    throw ConfigError("randomness mode " + mode_of(a).to_string() + " does not match " +
                      mode.to_string());
  }
  if (players_of(a) != k) throw ConfigError("randomness assignment is for a different k");
  if (length_of(a) != len()) {
    throw ConfigError("randomness strings have " + std::to_string(length_of(a)) +
                      " bits, expected " + std::to_string(len()));
  }
  std::visit(Overloaded{
                 [&](const PrivateAssignment& p) {
                   if (p.strings.size() != static_cast<std::size_t>(k)) {
                     throw ConfigError("private assignment needs one string per player");
                   }
                   for (const auto& s : p.strings) {
                     if (s.size() != len()) throw ConfigError("private string has wrong length");
                   }
                 },
                 [&](const XorTuple& x) {
                   if (x.strings.size() != static_cast<std::size_t>(k)) {
                     throw ConfigError("XOR tuple needs one string per player");
                   }
                   for (const auto& s : x.strings) {
                     if (s.size() != len()) throw ConfigError("XOR string has wrong length");
                   }
                   if (!x.combined().is_zero()) throw ConfigError("XOR tuple does not XOR to zero");
                 },
                 [&](const TSharedAssignment& s) { s.validate(); },
             },
             a);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const RandomnessAssignment& a) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["index_base"] = 0;
  j["mode"] = mode_of(a).kind() == ModeKind::None        ? "none"
              : mode_of(a).kind() == ModeKind::XorShared ? "xor"
                                                         : "tshared";
  j["k"] = players_of(a);
  j["len"] = length_of(a);
  nlohmann::json strings = nlohmann::json::object();
  std::visit(Overloaded{
                 [&](const PrivateAssignment& p) {
                   for (int i = 0; i < p.k; ++i) strings[std::to_string(i)] = p.strings[i].to_hex();
                 },
                 [&](const XorTuple& x) {
                   for (int i = 0; i < x.k; ++i) strings[std::to_string(i)] = x.strings[i].to_hex();
                 },
                 [&](const TSharedAssignment& s) {
                   j["t"] = s.t;
                   for (const auto& [subset, str] : s.table) strings[subset_key(subset)] = str.to_hex();
                 },
             },
             a);
  j["strings"] = std::move(strings);
  return j;
}

RandomnessAssignment assignment_from_json(const nlohmann::json& j) {
  try {
    const std::string mode = j.at("mode").get<std::string>();
    const int k = j.at("k").get<int>();
    const auto len = j.at("len").get<std::size_t>();
    const auto& strings = j.at("strings");
    check_players(k);
    auto per_player = [&] {
      std::vector<BitString> out;
      for (int i = 0; i < k; ++i) {
        out.push_back(BitString::from_hex(strings.at(std::to_string(i)).get<std::string>(), len));
      }
      if (strings.size() != static_cast<std::size_t>(k)) {
        throw ConfigError("unexpected extra strings in assignment");
      }
      return out;
    };
    if (mode == "none") return PrivateAssignment{k, len, per_player()};
    if (mode == "xor") return XorTuple::from_strings(per_player());
    if (mode == "tshared") {
      TSharedAssignment out{k, j.at("t").get<int>(), len, {}};
      for (const auto& [key, hex] : strings.items()) {
        out.table.emplace(parse_subset_key(key), BitString::from_hex(hex.get<std::string>(), len));
      }
      for (const auto& [subset, str] : out.table) {
        if (static_cast<int>(subset.size()) != out.t || subset.back() >= k || subset.front() < 0) {
          throw ConfigError("invalid subset key {" + subset_key(subset) + "}");
        }
      }
      out.validate();
      return out;
    }
    throw ConfigError("unknown assignment mode '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed assignment JSON: ") + e.what());
  }
}

}  // namespace smplab
