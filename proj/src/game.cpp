#include "smplab/game.hpp"

#include "smplab/error.hpp"

namespace smplab {

DeterministicFamily::DeterministicFamily(int k, std::size_t n, std::size_t bits)
    : k_(k), n_(n), bits_(bits) {
  if (k < 2 || n < 1 || bits < 1) throw ConfigError("protocol family needs k >= 2, n >= 1, bits >= 1");
  if (n > 5 || bits > 5 || static_cast<std::size_t>(k) * bits > 6) {
    throw CapacityError("deterministic protocol family is far too large to enumerate");
  }
  const std::uint64_t free_cells = (std::uint64_t{1} << n) - 1;
  if (free_cells * bits >= 64) throw CapacityError("too many player maps to enumerate");
  player_maps_ = std::uint64_t{1} << (free_cells * bits);
  const std::size_t key_space = std::size_t{1} << (static_cast<std::size_t>(k) * bits);
  referees_ = key_space >= 64 ? 0 : std::uint64_t{1} << key_space;
}

std::optional<std::uint64_t> DeterministicFamily::size() const {
  if (referees_ == 0) return std::nullopt;
  std::uint64_t tuples = 1;
  for (int i = 0; i < k_; ++i) {
    if (__builtin_mul_overflow(tuples, player_maps_, &tuples)) return std::nullopt;
  }
  std::uint64_t total;
  if (__builtin_mul_overflow(tuples, referees_, &total)) return std::nullopt;
  return total;
}

std::vector<std::uint32_t> DeterministicFamily::player_table(std::uint64_t map_index) const {
  std::vector<std::uint32_t> table(std::size_t{1} << n_, 0);
  const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
  for (std::size_t v = 1; v < table.size(); ++v) {
    table[v] = static_cast<std::uint32_t>(map_index & mask);
    map_index >>= bits_;
  }
  return table;
}

Eigen::MatrixXf payoff_matrix(const DeterministicFamily& family, const Problem& problem,
                              const InputSet& inputs, std::uint64_t budget) {
  if (inputs.k() != family.k() || inputs.n() != family.n()) {
    throw ConfigError("input set shape does not match the protocol family");
  }
  // Columns: valid inputs as fragment values plus the correct answer.
  std::vector<std::vector<std::uint64_t>> fragments;
  std::vector<bool> answers;
  for (std::uint64_t idx = 0; idx < inputs.size(); ++idx) {
    const InputTuple x = inputs.at(idx);
    const auto value = problem.value(x);
    if (!value) continue;
    std::vector<std::uint64_t> f;
    for (int i = 0; i < x.k(); ++i) f.push_back(x[i].to_uint());
    fragments.push_back(std::move(f));
    answers.push_back(*value);
  }
  const auto rows = family.size();
  const std::uint64_t cols = fragments.size();
  if (cols == 0) throw ConfigError("no valid inputs to play against");
  if (!rows || *rows > budget / cols) {
    throw CapacityError("payoff matrix exceeds the budget of " + std::to_string(budget) +
                        " entries");
  }

  Eigen::MatrixXf payoff(static_cast<Eigen::Index>(*rows), static_cast<Eigen::Index>(cols));
  const std::uint64_t referees = family.referee_count();
  const std::uint64_t tuples = *rows / referees;
  std::vector<std::vector<std::uint32_t>> tables(family.player_map_count());
  for (std::uint64_t m = 0; m < tables.size(); ++m) tables[m] = family.player_table(m);

  std::vector<std::uint64_t> keys(cols);
  for (std::uint64_t tuple = 0; tuple < tuples; ++tuple) {
    // Decode the player-map tuple (player 0 most significant).
    std::vector<std::uint64_t> maps(static_cast<std::size_t>(family.k()));
    std::uint64_t rest = tuple;
    for (int i = family.k() - 1; i >= 0; --i) {
      maps[i] = rest % family.player_map_count();
      rest /= family.player_map_count();
    }
    for (std::uint64_t c = 0; c < cols; ++c) {
      std::uint64_t key = 0;
      for (int i = 0; i < family.k(); ++i) {
        key = (key << family.bits()) | tables[maps[i]][fragments[c][i]];
      }
      keys[c] = key;
    }
    for (std::uint64_t r = 0; r < referees; ++r) {
      const auto row = static_cast<Eigen::Index>(tuple * referees + r);
      for (std::uint64_t c = 0; c < cols; ++c) {
        payoff(row, static_cast<Eigen::Index>(c)) =
            DeterministicFamily::referee_output(r, keys[c]) == answers[c] ? 1.0f : 0.0f;
      }
    }
  }
  return payoff;
}

GameBounds game_value_estimate(const DeterministicFamily& family, const Problem& problem,
                               const InputSet& inputs, std::uint64_t iterations,
                               std::uint64_t budget) {
  return fictitious_play(payoff_matrix(family, problem, inputs, budget), iterations);
}

}  // namespace smplab
