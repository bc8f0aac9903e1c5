// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).

#include "smplab/harness.hpp"
#include "smplab/protocols.hpp"
#include "smplab/quantum.hpp"
#include "smplab/readk.hpp"
#include "smplab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace smplab;

namespace {

// Tolerances.
constexpr double kQuantumTol = 1e-9;
constexpr double kFinnerRhsTol = 1e-12;
constexpr double kSigmas = 4.0;
constexpr std::uint64_t kTrials = 100'000;
constexpr std::uint64_t kBigBudget = 2'000'000'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct McConfig {
  std::string label;
  ProtocolSpec spec;
  Problem problem;
  InputDistribution dist;
  Rational exact;
};

// Configurations shared by criteria 1, 3 and 9.
std::vector<McConfig> g_mc_configs;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome criterion1() {
  Outcome o;
  std::size_t configs = 0, inputs_checked = 0, expanded = 0;
  ExactOptions opts;
  opts.budget = kBigBudget;
  for (int k : {3, 4}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (int c = 1; c <= 3; ++c) {
        const auto spec = equality_xor_spec(k, n, c);
        const auto inputs = InputSet::all(k, n);
        const auto eval = exact_eval(spec, equality_problem(), inputs, opts);
        const Rational reject = 1 - Rational(1, BigInt(1) << c);
        for (std::size_t i = 0; i < eval.size(); ++i) {
          const bool equal = eval.truth[i] == 1;
          const Rational a = eval.acceptance(i);
          if (equal ? a != 1 : 1 - a != reject) {
            o.pass = false;
            o.detail = spec.name + " input " + std::to_string(i) + " acceptance " + to_string(a);
            return o;
          }
          ++inputs_checked;
        }
        // Where it fits, also enumerate the full c-instance space.
        const std::uint64_t full_space = std::uint64_t{1} << ((k - 1) * n * c);
        if (c > 1 && inputs.size() * full_space <= 100'000'000) {
          ExactOptions full = opts;
          full.expand_repetitions = true;
          const auto slow = exact_eval(spec, equality_problem(), inputs, full);
          for (std::size_t i = 0; i < eval.size(); ++i) {
            if (slow.acceptance(i) != eval.acceptance(i)) {
              o.pass = false;
              o.detail = spec.name + ": expanded enumeration disagrees at input " + std::to_string(i);
              return o;
            }
          }
          ++expanded;
        }
        g_mc_configs.push_back({spec.name, spec, equality_problem(), InputDistribution::Balanced,
                                eval.average_success(InputDistribution::Balanced)});
        ++configs;
      }
    }
  }
  o.detail = std::to_string(configs) + " configs, " + std::to_string(inputs_checked) +
             " inputs, " + std::to_string(expanded) + " also fully expanded";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const int k = 4;
  const std::size_t n = 8;
  const auto spec = equality_xor_spec(k, n, 1);
  Rng rng(20240202);
  std::size_t failures = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<BitString> f;
    for (int i = 0; i < k; ++i) f.push_back(rng.bits(n));
    // Half the trials use equal inputs.
    if (trial % 2) f.assign(k, f.front());
    const InputTuple x(f);
    const XorTuple r = sample_xor_shared(k, n, rng);
    const auto [transcript, outcome] = execute(spec, x, r);
    bool parity = false;
    for (const auto& m : transcript.messages) parity ^= m.get(0);
    bool expected = false;
    for (int i = 0; i + 1 < k; ++i) expected ^= r.strings[i].dot(x[i] ^ x[k - 1]);
    if (parity != expected || outcome.output == parity) ++failures;
  }
  o.pass = failures == 0;
  o.detail = "10000 pairs, " + std::to_string(failures) + " failures";
  return o;
}

Outcome criterion3() {
  Outcome o;
  ExactOptions opts;
  opts.budget = kBigBudget;
  Problem any{"any", [](const InputTuple&) { return std::optional<bool>(true); }, nullptr};
  Rational worst = 1;
  std::size_t configs = 0;
  std::vector<std::pair<int, std::size_t>> shapes;
  for (int k : {2, 3}) {
    for (std::size_t n = 1; n <= 8; ++n) shapes.emplace_back(k, n);
  }
  for (std::size_t n = 1; n <= 5; ++n) shapes.emplace_back(4, n);
  for (const auto& [k, n] : shapes) {
    const auto spec = gap_parity_spec(k, n);
    const auto inputs = InputSet::all(k, n);
    // P(output = 1) on every input, promise or not.
    const auto raw = exact_eval(spec, any, inputs, opts);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto w = raw.inputs.at(i).combined().popcount();
      if (raw.acceptance(i) != Rational(static_cast<long long>(w), static_cast<long long>(n))) {
        o.pass = false;
        o.detail = spec.name + ": input " + std::to_string(i) + " gives " +
                   to_string(raw.acceptance(i));
        return o;
      }
    }
    const auto eval = exact_eval(spec, gap_parity_problem(), inputs, opts);
    worst = std::min(worst, eval.worst_case_success());
    g_mc_configs.push_back({spec.name, spec, gap_parity_problem(), InputDistribution::Uniform,
                            eval.average_success(InputDistribution::Uniform)});
    ++configs;
  }
  o.pass = worst >= Rational(2, 3);
  o.detail = std::to_string(configs) + " configs (n <= 8), worst valid success " + to_string(worst);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto sweep = sweep_xor_mixture(200, 4);
  o.pass = sweep.configurations == 200 && sweep.max_abs_difference <= kQuantumTol;
  o.detail = "200 configs, max |lhs - rhs| = " + fmt("%.3g", sweep.max_abs_difference);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto sweep = sweep_rac(100, 5);
  const auto grid = check_entropy_grid(2001);
  o.pass = sweep.encodings == 100 && sweep.max_excess <= kQuantumTol &&
           sweep.max_squared_excess <= kQuantumTol && sweep.identity_deviation <= kQuantumTol &&
           grid.points == 2001 && grid.passed;
  o.detail = "max(sum - q) = " + fmt("%.4f", sweep.max_excess) +
             ", identity deviation = " + fmt("%.3g", sweep.identity_deviation) +
             ", grid min slack = " + fmt("%.3g", grid.min_slack);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto sweep = sweep_finner(1000, 6);
  const auto tri = finner_check(triangle_or_family());
  const double rhs = std::pow(0.75, 1.5);
  o.pass = sweep.families == 1000 && sweep.failures == 0 && tri.lhs == Rational(1, 2) &&
           std::abs(tri.rhs - rhs) <= kFinnerRhsTol && tri.holds;
  o.detail = "1000 families, " + std::to_string(sweep.failures) + " failures; triangle lhs " +
             to_string(tri.lhs) + ", rhs " + fmt("%.15f", tri.rhs);
  return o;
}

// Every (k-1)-subset of the k strings must be exactly uniform.
bool marginals_uniform(const std::vector<std::vector<BitString>>& tuples, int k, std::size_t len) {
  const std::uint64_t cells = std::uint64_t{1} << ((k - 1) * len);
  for (int skip = 0; skip < k; ++skip) {
    std::map<std::vector<BitString>, std::uint64_t> counts;
    for (const auto& t : tuples) {
      std::vector<BitString> kept;
      for (int i = 0; i < k; ++i) {
        if (i != skip) kept.push_back(t[i]);
      }
      ++counts[kept];
    }
    if (counts.size() != cells) return false;
    for (const auto& [key, c] : counts) {
      if (c * cells != tuples.size()) return false;
    }
  }
  return true;
}

// Chi-square over 2^(3 len) cells for each triple of the four strings,
// normalized as (X^2 - df) / sqrt(2 df).
double worst_chi_square(const std::vector<std::vector<BitString>>& samples, std::size_t len) {
  double worst = -INFINITY;
  const std::uint64_t cells = std::uint64_t{1} << (3 * len);
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<std::uint64_t> counts(cells, 0);
    for (const auto& s : samples) {
      std::uint64_t key = 0;
      for (int i = 0; i < 4; ++i) {
        if (i != skip) key = (key << len) | s[i].to_uint();
      }
      ++counts[key];
    }
    const double expect = static_cast<double>(samples.size()) / static_cast<double>(cells);
    double chi = 0;
    for (auto c : counts) chi += (c - expect) * (c - expect) / expect;
    const double df = static_cast<double>(cells - 1);
    worst = std::max(worst, (chi - df) / std::sqrt(2 * df));
  }
  return worst;
}

// Pairwise frequency test for one-bit strings: every 2x2 cell within 4 sigma.
double worst_pair_z(const std::vector<std::vector<BitString>>& samples) {
  const std::size_t m = samples.front().size();
  const double total = static_cast<double>(samples.size());
  const double sigma = std::sqrt(total * 0.25 * 0.75);
  double worst = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double cell[4] = {};
      for (const auto& s : samples) cell[s[a].get(0) * 2 + s[b].get(0)] += 1;
      for (double c : cell) worst = std::max(worst, std::abs(c - total / 4) / sigma);
    }
  }
  return worst;
}

std::vector<BitString> table_strings(const TSharedAssignment& a) {
  std::vector<BitString> out;
  for (const auto& [s, str] : a.table) out.push_back(str);
  return out;
}

Outcome criterion7() {
  Outcome o;
  std::ostringstream detail;
  // Exact enumeration: the XOR space and the pair-shared emulation.
  bool exact_ok = true;
  for (int k = 2; k <= 4; ++k) {
    for (std::size_t len = 1; len <= 2; ++len) {
      const auto xspace = RandomnessSpace::uniform_bits(RandomnessMode::xor_shared(), k, len);
      std::vector<std::vector<BitString>> tuples;
      for (std::uint64_t i = 0; i < *xspace.size(); ++i) {
        tuples.push_back(std::get<XorTuple>(xspace.element(i)).strings);
      }
      exact_ok = exact_ok && marginals_uniform(tuples, k, len);
      const auto pspace = RandomnessSpace::uniform_bits(RandomnessMode::t_shared(2), k, len);
      tuples.clear();
      for (std::uint64_t i = 0; i < *pspace.size(); ++i) {
        const auto r = emulate_xor_from_2shared(std::get<TSharedAssignment>(pspace.element(i)));
        if (!r.combined().is_zero()) exact_ok = false;
        tuples.push_back(r.strings);
      }
      exact_ok = exact_ok && marginals_uniform(tuples, k, len);
    }
  }
  detail << "exact marginals " << (exact_ok ? "ok" : "BAD");

  // Chi-square, k = 4, len = 4.
  Rng rng(7007);
  std::vector<std::vector<BitString>> sampled, emulated;
  for (std::uint64_t s = 0; s < kTrials; ++s) {
    sampled.push_back(sample_xor_shared(4, 4, rng).strings);
    emulated.push_back(emulate_xor_from_2shared(sample_t_shared(4, 2, 4, rng)).strings);
  }
  const double chi_sampled = worst_chi_square(sampled, 4);
  const double chi_emulated = worst_chi_square(emulated, 4);
  detail << "; chi-square z sampler " << fmt("%.2f", chi_sampled) << ", emulation "
         << fmt("%.2f", chi_emulated);

  // Pairwise frequencies of 3-shared samples and of emulated lower tables.
  struct Chain {
    int t, target;
  };
  double worst_pairs = 0;
  {
    std::vector<std::vector<BitString>> rows;
    for (std::uint64_t s = 0; s < kTrials; ++s) rows.push_back(table_strings(sample_t_shared(4, 3, 1, rng)));
    worst_pairs = std::max(worst_pairs, worst_pair_z(rows));
  }
  for (const Chain ch : {Chain{3, 2}, Chain{4, 2}, Chain{4, 3}}) {
    const std::size_t src = required_source_len(4, ch.t, ch.target, 1);
    std::vector<std::vector<BitString>> rows;
    for (std::uint64_t s = 0; s < kTrials; ++s) {
      const auto out = emulate_lower_from_higher(sample_t_shared(4, ch.t, src, rng), ch.target, 1);
      if (out.table.size() != binomial(4, ch.target)) exact_ok = false;
      rows.push_back(table_strings(out));
    }
    worst_pairs = std::max(worst_pairs, worst_pair_z(rows));
  }
  detail << "; worst pairwise cell z " << fmt("%.2f", worst_pairs);
  o.pass = exact_ok && chi_sampled <= kSigmas && chi_emulated <= kSigmas && worst_pairs <= kSigmas;
  o.detail = detail.str();
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::ostringstream detail;
  Problem any{"any", [](const InputTuple&) { return std::optional<bool>(true); }, nullptr};
  for (const auto& spec : {sampled_equality_spec(3, 2, 3), send_all_equality_spec(3, 2)}) {
    const auto collapsed = collapse_players(spec);
    const auto inputs = InputSet::all(3, 2);
    const auto before = exact_eval(spec, equality_problem(), inputs);
    std::vector<InputTuple> images;
    for (std::uint64_t i = 0; i < inputs.size(); ++i) images.push_back(collapse_input(inputs.at(i)));
    const auto after = exact_eval(collapsed, any, InputSet::of(images));
    std::size_t mismatches = 0;
    for (std::uint64_t i = 0; i < inputs.size(); ++i) {
      mismatches += before.acceptance(i) != after.acceptance(i);
    }
    const bool cost_ok = collapsed.declared_cost() == spec.declared_cost();
    o.pass = o.pass && mismatches == 0 && cost_ok;
    detail << spec.name << ": " << mismatches << " mismatches, cost " << spec.declared_cost()
           << " -> " << collapsed.declared_cost() << "; ";
  }
  o.detail = detail.str();
  return o;
}

Outcome criterion9() {
  Outcome o;
  if (g_mc_configs.empty()) {
    o.pass = false;
    o.detail = "no configurations (criteria 1 and 3 did not run)";
    return o;
  }
  double worst_z = 0;
  std::string worst_label;
  std::size_t identical = 0;
  for (std::size_t i = 0; i < g_mc_configs.size(); ++i) {
    const auto& cfg = g_mc_configs[i];
    const std::uint64_t seed = derive_seed(9, i);
    const auto mc = monte_carlo(cfg.spec, cfg.problem, cfg.dist, kTrials, seed);
    const double p = to_double(cfg.exact);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(kTrials));
    double z;
    if (sigma == 0) {
      z = mc.estimate() == p ? 0 : INFINITY;
    } else {
      z = std::abs(mc.estimate() - p) / sigma;
    }
    if (z > worst_z || worst_label.empty()) {
      worst_z = std::max(worst_z, z);
      worst_label = cfg.label;
    }
    const auto again = monte_carlo(cfg.spec, cfg.problem, cfg.dist, kTrials, seed);
    identical += again.to_json().dump() == mc.to_json().dump();
  }
  o.pass = worst_z <= kSigmas && identical == g_mc_configs.size();
  o.detail = std::to_string(g_mc_configs.size()) + " configs, worst |z| = " + fmt("%.2f", worst_z) +
             " (" + worst_label + "), " + std::to_string(identical) + " byte-identical reruns";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"equality exact law", criterion1},      {"referee parity identity", criterion2},
      {"gap-parity exact law", criterion3},    {"parity-mixture trace norm", criterion4},
      {"random access code bound", criterion5}, {"Finner inequality", criterion6},
      {"randomness mode distributions", criterion7}, {"player collapse fidelity", criterion8},
      {"Monte Carlo vs exact", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu [%s] %s (%.1fs): %s\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
