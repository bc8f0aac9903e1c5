#include "smplab/harness.hpp"

#include "smplab/error.hpp"
#include "smplab/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <unordered_map>

namespace smplab {

// ---------------------------------------------------------------------------
// Problems and input sets

Problem equality_problem() {
  Problem p;
  p.name = "equality";
  p.value = [](const InputTuple& x) -> std::optional<bool> { return all_equal(x); };
  p.sample_label = [](bool label, int k, std::size_t n, Rng& rng) {
    if (label) {
      const BitString x = rng.bits(n);
      return InputTuple(std::vector<BitString>(static_cast<std::size_t>(k), x));
    }
    while (true) {
      std::vector<BitString> fragments;
      for (int i = 0; i < k; ++i) fragments.push_back(rng.bits(n));
      InputTuple candidate(std::move(fragments));
      if (!all_equal(candidate)) return candidate;
    }
  };
  return p;
}

Problem gap_parity_problem() {
  Problem p;
  p.name = "gap-parity";
  p.value = [](const InputTuple& x) { return gp_value(x); };
  return p;
}

Problem problem_by_name(const std::string& name) {
  if (name == "equality") return equality_problem();
  if (name == "gap-parity") return gap_parity_problem();
  throw ConfigError("unknown problem '" + name + "'");
}

InputSet InputSet::all(int k, std::size_t n) {
  if (k < 2 || n < 1) throw ConfigError("input set needs k >= 2 and n >= 1");
  if (static_cast<std::size_t>(k) * n > 40) {
    throw CapacityError("input space 2^" + std::to_string(static_cast<std::size_t>(k) * n) +
                        " is too large to enumerate");
  }
  InputSet out;
  out.k_ = k;
  out.n_ = n;
  return out;
}

InputSet InputSet::of(std::vector<InputTuple> inputs) {
  if (inputs.empty()) throw ConfigError("input set must not be empty");
  InputSet out;
  out.k_ = inputs.front().k();
  out.n_ = inputs.front().n();
  for (const auto& x : inputs) {
    if (x.k() != out.k_ || x.n() != out.n_) throw ConfigError("input set mixes shapes");
  }
  out.list_ = std::move(inputs);
  return out;
}

std::uint64_t InputSet::size() const {
  if (list_) return list_->size();
  return std::uint64_t{1} << (static_cast<std::size_t>(k_) * n_);
}

InputTuple InputSet::at(std::uint64_t index) const {
  if (list_) return list_->at(index);
  return InputTuple::unpack(index, k_, n_);
}

InputDistribution parse_distribution(const std::string& name) {
  if (name == "uniform") return InputDistribution::Uniform;
  if (name == "balanced") return InputDistribution::Balanced;
  throw ConfigError("unknown input distribution '" + name + "'");
}

std::string to_string(InputDistribution d) {
  return d == InputDistribution::Uniform ? "uniform" : "balanced";
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("SMPLAB_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string("SMPLAB_BUDGET is not a number: ") + env);
    }
  }
  return 100'000'000;
}

// ---------------------------------------------------------------------------
// ExactEvaluation

namespace {

std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) return std::nullopt;
  return out;
}

BigInt big_pow(std::uint64_t base, unsigned e) {
  BigInt out = 1;
  for (unsigned i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Rational ExactEvaluation::acceptance(std::size_t i) const {
  return Rational(big_pow(accepts.at(i), exponent), big_pow(denominator, exponent));
}

std::optional<Rational> ExactEvaluation::success(std::size_t i) const {
  if (truth.at(i) < 0) return std::nullopt;
  const Rational a = acceptance(i);
  return truth[i] == 1 ? a : Rational(1) - a;
}

std::size_t ExactEvaluation::valid_count() const {
  return static_cast<std::size_t>(std::count_if(truth.begin(), truth.end(),
                                                [](std::int8_t t) { return t >= 0; }));
}

std::size_t ExactEvaluation::label_count(bool label) const {
  return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), label ? 1 : 0));
}

std::optional<Rational> ExactEvaluation::worst_case_success(bool label) const {
  // success is monotone in the numerator, so track the extreme numerator.
  std::optional<std::uint32_t> extreme;
  for (std::size_t i = 0; i < accepts.size(); ++i) {
    if (truth[i] != (label ? 1 : 0)) continue;
    if (!extreme) {
      extreme = accepts[i];
    } else {
      extreme = label ? std::min(*extreme, accepts[i]) : std::max(*extreme, accepts[i]);
    }
  }
  if (!extreme) return std::nullopt;
  const Rational a(big_pow(*extreme, exponent), big_pow(denominator, exponent));
  return label ? a : Rational(1) - a;
}

Rational ExactEvaluation::worst_case_success() const {
  Rational best = 1;
  for (bool label : {false, true}) {
    if (auto w = worst_case_success(label)) best = std::min(best, *w);
  }
  return best;
}

Rational ExactEvaluation::average_success(InputDistribution d) const {
  // Per-label sums of success numerators over denominator^exponent.
  BigInt sums[2] = {0, 0};
  std::uint64_t fast[2] = {0, 0};
  std::uint64_t counts[2] = {0, 0};
  for (std::size_t i = 0; i < accepts.size(); ++i) {
    if (truth[i] < 0) continue;
    const int label = truth[i];
    ++counts[label];
    if (exponent == 1) {
      fast[label] += accepts[i];
    } else {
      sums[label] += big_pow(accepts[i], exponent);
    }
  }
  const BigInt den = big_pow(denominator, exponent);
  Rational success_sum[2];
  for (int label = 0; label < 2; ++label) {
    const BigInt accepted = exponent == 1 ? BigInt(fast[label]) : sums[label];
    const Rational acc_sum(accepted, den);
    success_sum[label] = label == 1 ? acc_sum : Rational(counts[label]) - acc_sum;
  }
  const std::uint64_t total = counts[0] + counts[1];
  if (total == 0) return Rational(1);
  if (d == InputDistribution::Uniform || counts[0] == 0 || counts[1] == 0) {
    return (success_sum[0] + success_sum[1]) / Rational(total);
  }
  return success_sum[0] / Rational(2 * counts[0]) + success_sum[1] / Rational(2 * counts[1]);
}

nlohmann::json ExactEvaluation::summary_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["protocol"] = protocol;
  j["problem"] = problem;
  j["inputs"] = accepts.size();
  j["valid_inputs"] = valid_count();
  j["randomness_space"] = denominator;
  j["repetitions"] = exponent;
  j["worst_case_success"] = to_string(worst_case_success());
  for (bool label : {false, true}) {
    const std::string suffix = label ? "_on_1" : "_on_0";
    if (auto w = worst_case_success(label)) {
      j["worst_case_success" + suffix] = to_string(*w);
    } else {
      j["worst_case_success" + suffix] = nullptr;
    }
  }
  if (auto w = worst_case_success(false)) j["worst_case_rejection_on_0"] = to_string(*w);
  j["average_success_uniform"] = to_string(average_success(InputDistribution::Uniform));
  j["average_success_balanced"] = to_string(average_success(InputDistribution::Balanced));
  return j;
}

nlohmann::json ExactEvaluation::per_input_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < accepts.size(); ++i) {
    nlohmann::json row;
    row["input"] = to_json(inputs.at(i));
    row["acceptance"] = to_string(acceptance(i));
    if (truth[i] < 0) {
      row["truth"] = nullptr;
    } else {
      row["truth"] = truth[i];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// exact_eval

namespace {

// Length-tagged message code: (1 << len) | bits. Unique for len <= 62.
std::uint64_t message_code(const BitString& m) {
  return (std::uint64_t{1} << m.size()) | m.to_uint();
}

BitString message_from_code(std::uint64_t code) {
  const auto len = static_cast<std::size_t>(std::bit_width(code) - 1);
  return BitString::from_uint(code & ~(std::uint64_t{1} << len), len);
}

class Evaluator {
 public:
  Evaluator(const ProtocolSpec& spec, std::uint64_t randomness_size, std::uint64_t coin_count)
      : spec_(spec), rsize_(randomness_size), coins_(coin_count) {
    const std::size_t k = static_cast<std::size_t>(spec.k);
    views_.resize(rsize_);
    for (std::uint64_t r = 0; r < rsize_; ++r) {
      const RandomnessAssignment a = spec.randomness.element(r);
      for (int i = 0; i < spec.k; ++i) views_[r].push_back(view_of(a, i));
    }
    for (std::uint64_t c = 0; c < coins_; ++c) {
      coin_strings_.push_back(BitString::from_uint(c, spec.referee_coin_bits));
    }
    const bool short_messages = std::all_of(spec.message_bits.begin(), spec.message_bits.end(),
                                            [](std::size_t b) { return b <= 62; });
    std::size_t key_bits = spec.referee_coin_bits;
    for (auto b : spec.message_bits) key_bits += b + 1;
    memo_messages_ = short_messages && spec.n <= 16 &&
                     (k << spec.n) * rsize_ <= (std::uint64_t{1} << 25);
    if (memo_messages_) {
      codes_.assign(k, std::vector<std::uint64_t>((std::uint64_t{1} << spec.n) * rsize_, 0));
      computed_.assign(k, std::vector<bool>((std::uint64_t{1} << spec.n) * rsize_, false));
    }
    memo_referee_ = memo_messages_ && key_bits <= 64;
    if (memo_referee_ && key_bits <= 24) table_.assign(std::size_t{1} << key_bits, -1);
    for (auto b : spec.message_bits) shifts_.push_back(b + 1);
  }

  std::uint64_t accepts(const InputTuple& input) {
    if (!memo_messages_) return direct(input);
    std::vector<std::uint64_t> fragment(static_cast<std::size_t>(spec_.k));
    for (int i = 0; i < spec_.k; ++i) fragment[i] = input[i].to_uint();
    std::uint64_t total = 0;
    for (std::uint64_t r = 0; r < rsize_; ++r) {
      std::uint64_t key = 0;
      for (int i = 0; i < spec_.k; ++i) {
        key = (key << shifts_[i]) | code(i, fragment[i], input[i], r);
      }
      for (std::uint64_t c = 0; c < coins_; ++c) {
        total += referee((key << spec_.referee_coin_bits) | c, c) ? 1 : 0;
      }
    }
    return total;
  }

 private:
  std::uint64_t direct(const InputTuple& input) const {
    std::uint64_t total = 0;
    for (std::uint64_t r = 0; r < rsize_; ++r) {
      for (std::uint64_t c = 0; c < coins_; ++c) {
        total += execute_views(spec_, input, views_[r], coin_strings_[c]).second.output ? 1 : 0;
      }
    }
    return total;
  }

  std::uint64_t code(int player, std::uint64_t value, const BitString& fragment, std::uint64_t r) {
    const std::size_t slot = static_cast<std::size_t>(value * rsize_ + r);
    if (!computed_[player][slot]) {
      BitString m = spec_.players[player](fragment, views_[r][player]);
      if (m.size() > spec_.message_bits[player]) {
        throw ProtocolError(spec_.name + ": player " + std::to_string(player) +
                            " exceeded its declared message length");
      }
      codes_[player][slot] = message_code(m);
      computed_[player][slot] = true;
    }
    return codes_[player][slot];
  }

  bool referee(std::uint64_t key, std::uint64_t coin) {
    if (!memo_referee_) return call_referee(key, coin);
    if (!table_.empty()) {
      auto& cell = table_[key];
      if (cell < 0) cell = call_referee(key, coin) ? 1 : 0;
      return cell == 1;
    }
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    const bool out = call_referee(key, coin);
    map_.emplace(key, out);
    return out;
  }

  bool call_referee(std::uint64_t key, std::uint64_t coin) const {
    key >>= spec_.referee_coin_bits;
    std::vector<BitString> messages(static_cast<std::size_t>(spec_.k));
    for (int i = spec_.k - 1; i >= 0; --i) {
      const std::uint64_t mask = (std::uint64_t{1} << shifts_[i]) - 1;
      messages[i] = message_from_code(key & mask);
      key >>= shifts_[i];
    }
    return spec_.referee(messages, coin_strings_[coin]);
  }

  const ProtocolSpec& spec_;
  std::uint64_t rsize_;
  std::uint64_t coins_;
  std::vector<std::vector<std::vector<BitString>>> views_;
  std::vector<BitString> coin_strings_;
  bool memo_messages_ = false;
  bool memo_referee_ = false;
  std::vector<std::size_t> shifts_;
  std::vector<std::vector<std::uint64_t>> codes_;
  std::vector<std::vector<bool>> computed_;
  std::vector<std::int8_t> table_;
  std::unordered_map<std::uint64_t, bool> map_;
};

}  // namespace

ExactEvaluation exact_eval(const ProtocolSpec& spec, const Problem& problem, const InputSet& inputs,
                           const ExactOptions& options) {
  spec.validate();
  if (inputs.k() != spec.k || inputs.n() != spec.n) {
    throw ConfigError(spec.name + ": input set shape does not match the protocol");
  }
  if (spec.repetition && !options.expand_repetitions) {
    ExactEvaluation out = exact_eval(*spec.repetition->base, problem, inputs, options);
    out.protocol = spec.name;
    out.exponent *= static_cast<unsigned>(spec.repetition->count);
    return out;
  }
  const auto rsize = spec.randomness.size();
  if (!rsize || spec.referee_coin_bits > 32) {
    throw CapacityError(spec.name + ": randomness space is too large to enumerate");
  }
  const std::uint64_t coins = std::uint64_t{1} << spec.referee_coin_bits;
  const auto space = checked_mul(*rsize, coins);
  if (!space || *space > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError(spec.name + ": randomness space is too large to enumerate");
  }
  const auto work = checked_mul(inputs.size(), *space);
  if (!work || *work > options.budget) {
    throw CapacityError(spec.name + ": enumeration of " + std::to_string(inputs.size()) +
                        " inputs x " + std::to_string(*space) +
                        " random choices exceeds the budget of " + std::to_string(options.budget));
  }

  ExactEvaluation out;
  out.protocol = spec.name;
  out.problem = problem.name;
  out.inputs = inputs;
  out.denominator = *space;
  out.accepts.resize(inputs.size());
  out.truth.resize(inputs.size());

  Evaluator evaluator(spec, *rsize, coins);
  for (std::uint64_t idx = 0; idx < inputs.size(); ++idx) {
    const InputTuple x = inputs.at(idx);
    const auto value = problem.value(x);
    out.truth[idx] = value ? static_cast<std::int8_t>(*value) : std::int8_t{-1};
    out.accepts[idx] = static_cast<std::uint32_t>(evaluator.accepts(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo

double MonteCarloResult::estimate() const {
  return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

double MonteCarloResult::standard_error() const {
  if (trials == 0) return 0.0;
  const double p = estimate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

nlohmann::json MonteCarloResult::to_json() const {
  return {{"schema_version", 1},
          {"protocol", protocol},
          {"problem", problem},
          {"distribution", input ? nlohmann::json(nullptr) : nlohmann::json(to_string(distribution))},
          {"input", input ? smplab::to_json(*input) : nlohmann::json(nullptr)},
          {"trials", trials},
          {"successes", successes},
          {"estimate", estimate()},
          {"stderr", standard_error()},
          {"master_seed", master_seed}};
}

InputTuple sample_input(const Problem& problem, InputDistribution d, int k, std::size_t n,
                        Rng& rng) {
  constexpr int kMaxAttempts = 1'000'000;
  std::optional<bool> wanted;
  if (d == InputDistribution::Balanced) {
    wanted = rng.bit();
    if (problem.sample_label) return problem.sample_label(*wanted, k, n, rng);
  }
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<BitString> fragments;
    for (int i = 0; i < k; ++i) fragments.push_back(rng.bits(n));
    InputTuple x(std::move(fragments));
    const auto value = problem.value(x);
    if (value && (!wanted || *value == *wanted)) return x;
  }
  throw CapacityError("could not draw a valid " + problem.name + " input by rejection sampling");
}

namespace {

template <typename DrawInput>
MonteCarloResult run_trials(const ProtocolSpec& spec, const Problem& problem, std::uint64_t trials,
                            std::uint64_t master_seed, DrawInput draw) {
  spec.validate();
  if (trials < 1) throw ConfigError("monte_carlo needs at least one trial");
  MonteCarloResult out;
  out.protocol = spec.name;
  out.problem = problem.name;
  out.trials = trials;
  out.master_seed = master_seed;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(master_seed, t));
    const InputTuple x = draw(rng);
    const auto truth = problem.value(x);
    if (!truth) throw ConfigError(problem.name + ": input violates the promise");
    const RandomnessAssignment r = spec.randomness.sample(rng);
    const BitString coins = rng.bits(spec.referee_coin_bits);
    const bool output = execute(spec, x, r, coins).second.output;
    out.successes += output == *truth ? 1 : 0;
  }
  return out;
}

}  // namespace

MonteCarloResult monte_carlo(const ProtocolSpec& spec, const Problem& problem,
                             InputDistribution distribution, std::uint64_t trials,
                             std::uint64_t master_seed) {
  auto out = run_trials(spec, problem, trials, master_seed, [&](Rng& rng) {
    return sample_input(problem, distribution, spec.k, spec.n, rng);
  });
  out.distribution = distribution;
  return out;
}

MonteCarloResult monte_carlo(const ProtocolSpec& spec, const Problem& problem,
                             const InputTuple& input, std::uint64_t trials,
                             std::uint64_t master_seed) {
  if (input.k() != spec.k || input.n() != spec.n) {
    throw ConfigError(spec.name + ": input shape does not match the protocol");
  }
  auto out = run_trials(spec, problem, trials, master_seed, [&](Rng&) { return input; });
  out.input = input;
  return out;
}

// ---------------------------------------------------------------------------
// Transcript distributions

std::map<std::vector<BitString>, Rational> transcript_distribution(const ProtocolSpec& spec,
                                                                   const InputTuple& input,
                                                                   std::uint64_t budget) {
  spec.validate();
  const auto rsize = spec.randomness.size();
  if (!rsize || *rsize > budget) {
    throw CapacityError(spec.name + ": randomness space exceeds the enumeration budget");
  }
  std::map<std::vector<BitString>, std::uint64_t> counts;
  for (std::uint64_t r = 0; r < *rsize; ++r) {
    const auto a = spec.randomness.element(r);
    BitString no_coins(spec.referee_coin_bits);
    ++counts[execute(spec, input, a, no_coins).first.messages];
  }
  std::map<std::vector<BitString>, Rational> out;
  for (auto& [messages, c] : counts) out.emplace(messages, Rational(c, *rsize));
  return out;
}

Rational total_variation(const std::map<std::vector<BitString>, Rational>& p,
                         const std::map<std::vector<BitString>, Rational>& q) {
  Rational sum = 0;
  for (const auto& [key, pv] : p) {
    auto it = q.find(key);
    sum += boost::multiprecision::abs(pv - (it == q.end() ? Rational(0) : it->second));
  }
  for (const auto& [key, qv] : q) {
    if (!p.contains(key)) sum += qv;
  }
  return sum / 2;
}

}  // namespace smplab
