#pragma once

// Exact enumeration oracle, Monte Carlo runner and related experiment
// plumbing for protocol specs.

#include "smplab/core.hpp"
#include "smplab/rational.hpp"
#include "smplab/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smplab {

/// Target function or promise function. `value` returns nullopt on inputs
/// that violate the promise. `sample_label`, when set, draws an input
/// uniformly among valid inputs with the given value.
struct Problem {
  std::string name;
  std::function<std::optional<bool>(const InputTuple&)> value;
  std::function<InputTuple(bool label, int k, std::size_t n, Rng& rng)> sample_label;
};

Problem equality_problem();
Problem gap_parity_problem();
Problem problem_by_name(const std::string& name);

/// Either every input in ({0,1}^n)^k, indexed by the packed integer of
/// `InputTuple::unpack`, or an explicit list.
class InputSet {
 public:
  static InputSet all(int k, std::size_t n);
  static InputSet of(std::vector<InputTuple> inputs);

  int k() const { return k_; }
  std::size_t n() const { return n_; }
  std::uint64_t size() const;
  InputTuple at(std::uint64_t index) const;
  bool is_complete() const { return !list_.has_value(); }

 private:
  int k_ = 2;
  std::size_t n_ = 1;
  std::optional<std::vector<InputTuple>> list_;
};

enum class InputDistribution { Uniform, Balanced };
InputDistribution parse_distribution(const std::string& name);
std::string to_string(InputDistribution d);

/// Enumeration budget: SMPLAB_BUDGET if set, else 10^8.
std::uint64_t default_budget();

struct ExactOptions {
  std::uint64_t budget = default_budget();
  /// Enumerate the full randomness space of repeated specs instead of
  /// evaluating the base instance and raising to the repetition count.
  bool expand_repetitions = false;
};

/// Per-input exact acceptance probabilities
/// acceptance(i) = (accepts[i] / denominator)^exponent.
class ExactEvaluation {
 public:
  std::string protocol;
  std::string problem;
  InputSet inputs = InputSet::all(2, 1);
  std::uint64_t denominator = 1;
  unsigned exponent = 1;
  std::vector<std::uint32_t> accepts;
  /// -1: promise violated, otherwise the correct output.
  std::vector<std::int8_t> truth;

  std::size_t size() const { return accepts.size(); }
  Rational acceptance(std::size_t i) const;
  /// nullopt on promise-violating inputs.
  std::optional<Rational> success(std::size_t i) const;
  std::size_t valid_count() const;
  std::size_t label_count(bool label) const;

  /// Minimum success over valid inputs (1 when there are none).
  Rational worst_case_success() const;
  /// Minimum success over valid inputs with the given correct output.
  std::optional<Rational> worst_case_success(bool label) const;
  Rational average_success(InputDistribution d) const;

  nlohmann::json summary_json() const;
  /// One entry per input; only sensible for small input sets.
  nlohmann::json per_input_json() const;
};

/// Exact acceptance probability of `spec` on every input of `inputs`, by
/// enumerating the randomness space (and referee coins). Capacity error when
/// |inputs| * |randomness| exceeds the budget.
ExactEvaluation exact_eval(const ProtocolSpec& spec, const Problem& problem, const InputSet& inputs,
                           const ExactOptions& options = {});

struct MonteCarloResult {
  std::string protocol;
  std::string problem;
  InputDistribution distribution = InputDistribution::Uniform;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t master_seed = 0;
  /// Set when every trial ran on this one input.
  std::optional<InputTuple> input;

  double estimate() const;
  /// Binomial standard error sqrt(p(1-p)/trials) at the estimate.
  double standard_error() const;
  nlohmann::json to_json() const;
};

/// Draws one valid input from the named distribution over inputs of (k, n).
InputTuple sample_input(const Problem& problem, InputDistribution d, int k, std::size_t n,
                        Rng& rng);

/// Trial t uses the generator seeded with derive_seed(master_seed, t) for
/// its input, randomness and referee coins, so results do not depend on how
/// trials are scheduled.
MonteCarloResult monte_carlo(const ProtocolSpec& spec, const Problem& problem,
                             InputDistribution distribution, std::uint64_t trials,
                             std::uint64_t master_seed);

/// Every trial on the fixed `input`; only the randomness is sampled.
MonteCarloResult monte_carlo(const ProtocolSpec& spec, const Problem& problem,
                             const InputTuple& input, std::uint64_t trials,
                             std::uint64_t master_seed);

/// Exact distribution of the message tuple on one input.
std::map<std::vector<BitString>, Rational> transcript_distribution(
    const ProtocolSpec& spec, const InputTuple& input, std::uint64_t budget = default_budget());

Rational total_variation(const std::map<std::vector<BitString>, Rational>& p,
                         const std::map<std::vector<BitString>, Rational>& q);

}  // namespace smplab
