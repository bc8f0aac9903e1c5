#pragma once

// Zero-sum game value of "protocol designer vs. input adversary" for
// deterministic SMP protocols, estimated by fictitious play. Mixing over
// deterministic protocols is exactly what unrestricted shared randomness
// buys, so the value is the best worst-case success at that cost.

#include "smplab/error.hpp"
#include "smplab/harness.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace smplab {

struct GameBounds {
  double lower = 0;  // max over iterations of the row mixture's guaranteed payoff
  double upper = 0;  // min over iterations of the best reply to the column mixture
  std::uint64_t iterations = 0;
  Eigen::VectorXd row_strategy;     // mixture attaining `lower`
  Eigen::VectorXd column_strategy;  // mixture attaining `upper`

  double gap() const { return upper - lower; }
};

/// Fictitious play for the row player maximizing `payoff`. Every iterate's
/// bounds bracket the game value; the best ones are kept. If `history` is
/// given, it receives the (lower, upper) pair of each iteration.
template <typename Derived>
GameBounds fictitious_play(const Eigen::MatrixBase<Derived>& payoff, std::uint64_t iterations,
                           std::vector<std::pair<double, double>>* history = nullptr) {
  const Eigen::Index rows = payoff.rows();
  const Eigen::Index cols = payoff.cols();
  if (rows < 1 || cols < 1) throw ConfigError("payoff matrix must be non-empty");
  if (iterations < 1) throw ConfigError("fictitious play needs at least one iteration");

  Eigen::VectorXd row_counts = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd col_counts = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd row_payoff = Eigen::VectorXd::Zero(rows);  // payoff * col_counts
  Eigen::VectorXd col_payoff = Eigen::VectorXd::Zero(cols);  // payoff^T * row_counts

  GameBounds out;
  out.lower = -std::numeric_limits<double>::infinity();
  out.upper = std::numeric_limits<double>::infinity();
  Eigen::Index row = 0;
  for (std::uint64_t t = 1; t <= iterations; ++t) {
    const double scale = 1.0 / static_cast<double>(t);
    row_counts(row) += 1;
    col_payoff += payoff.row(row).transpose().template cast<double>();
    Eigen::Index col;
    const double lower = col_payoff.minCoeff(&col) * scale;
    if (lower > out.lower) {
      out.lower = lower;
      out.row_strategy = row_counts * scale;
    }
    col_counts(col) += 1;
    row_payoff += payoff.col(col).template cast<double>();
    const double upper = row_payoff.maxCoeff(&row) * scale;
    if (upper < out.upper) {
      out.upper = upper;
      out.column_strategy = col_counts * scale;
    }
    if (history) history->emplace_back(out.lower, out.upper);
  }
  out.iterations = iterations;
  return out;
}

/// All deterministic k-player protocols with `bits`-bit messages on n-bit
/// fragments, up to relabeling each player's messages (a player's message on
/// the all-zero fragment is fixed to 0; the referee absorbs the XOR shift).
/// Row index = player_tuple * referee_count() + referee.
class DeterministicFamily {
 public:
  DeterministicFamily(int k, std::size_t n, std::size_t bits);

  int k() const { return k_; }
  std::size_t n() const { return n_; }
  std::size_t bits() const { return bits_; }
  std::uint64_t player_map_count() const { return player_maps_; }
  std::uint64_t referee_count() const { return referees_; }
  std::optional<std::uint64_t> size() const;

  /// Message of one player map on every fragment value.
  std::vector<std::uint32_t> player_table(std::uint64_t map_index) const;
  /// Messages packed player 0 first, `bits` each.
  static bool referee_output(std::uint64_t referee, std::uint64_t packed_messages) {
    return (referee >> packed_messages) & 1u;
  }

 private:
  int k_;
  std::size_t n_;
  std::size_t bits_;
  std::uint64_t player_maps_ = 0;
  std::uint64_t referees_ = 0;
};

inline constexpr std::uint64_t kPayoffBudget = 10'000'000;

/// payoff(row, col) = 1 iff protocol `row` answers valid input `col`
/// correctly. Columns are the valid inputs of `inputs` in order.
Eigen::MatrixXf payoff_matrix(const DeterministicFamily& family, const Problem& problem,
                              const InputSet& inputs, std::uint64_t budget = kPayoffBudget);

GameBounds game_value_estimate(const DeterministicFamily& family, const Problem& problem,
                               const InputSet& inputs, std::uint64_t iterations,
                               std::uint64_t budget = kPayoffBudget);

}  // namespace smplab
