#include "smplab/cli.hpp"

#include "smplab/error.hpp"
#include "smplab/protocols.hpp"
#include "smplab/quantum.hpp"
#include "smplab/readk.hpp"
#include "smplab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace smplab {

namespace {

constexpr int kSchemaVersion = 1;

/// Raised when a verified invariant fails; maps to exit code 1.
class InvariantFailure : public Error {
 public:
  using Error::Error;
};

bool is_equality_protocol(const std::string& name) {
  return name == "equality-xor" || name == "send-all-equality" || name == "sampled-equality";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  return out + "\n";
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void emit(const ExperimentConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + config.out + "'");
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentConfig

void ExperimentConfig::validate() const {
  if (k < 2 || k > 16) throw ConfigError("--k must be in [2, 16]");
  if (n < 1 || n > 64) throw ConfigError("--n must be in [1, 64]");
  if (c < 1 || c > 64) throw ConfigError("--c must be in [1, 64]");
  if (format != "json" && format != "csv") throw ConfigError("--format must be csv or json");
  parse_distribution(distribution);
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"protocol", protocol}, {"k", k},         {"n", n},
          {"c", c},               {"mode", mode},   {"trials", trials},
          {"seed", seed},         {"distribution", distribution},
          {"out", out},           {"format", format}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.protocol = j.value("protocol", cfg.protocol);
    cfg.k = j.value("k", cfg.k);
    cfg.n = j.value("n", cfg.n);
    cfg.c = j.value("c", cfg.c);
    cfg.mode = j.value("mode", cfg.mode);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.distribution = j.value("distribution", cfg.distribution);
    cfg.out = j.value("out", cfg.out);
    cfg.format = j.value("format", cfg.format);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config file: ") + e.what());
  }
  return cfg;
}

ProtocolSpec build_protocol(const ExperimentConfig& config) {
  config.validate();
  const int k = config.k;
  if (config.protocol == "equality-xor") {
    ProtocolSpec spec = equality_xor_spec(k, config.n, config.c);
    const RandomnessMode mode =
        config.mode.empty() ? RandomnessMode::xor_shared() : RandomnessMode::parse(config.mode, k);
    mode.validate(k);
    if (mode.kind() == ModeKind::XorShared) return spec;
    if (mode.kind() == ModeKind::TShared) {
      ProtocolSpec pairs = via_xor_emulation(spec);
      return mode.t() == 2 ? pairs : via_lower_emulation(pairs, mode.t());
    }
    throw UnsupportedModeError("equality-xor cannot run without shared randomness");
  }
  if (config.protocol == "gap-parity" || config.protocol == "gap-parity-boosted") {
    if (!config.mode.empty() &&
        RandomnessMode::parse(config.mode, k) != RandomnessMode::t_shared(k)) {
      throw UnsupportedModeError(config.protocol + " needs unrestricted shared randomness");
    }
    return config.protocol == "gap-parity"
               ? gap_parity_spec(k, config.n)
               : boosted_gap_parity_spec(k, config.n, static_cast<std::size_t>(config.c));
  }
  if (config.protocol == "send-all-equality" || config.protocol == "sampled-equality") {
    if (!config.mode.empty() && config.mode != "none") {
      throw UnsupportedModeError(config.protocol + " uses private coins only");
    }
    return config.protocol == "send-all-equality" ? send_all_equality_spec(k, config.n)
                                                  : sampled_equality_spec(k, config.n, config.c);
  }
  throw ConfigError("unknown protocol '" + config.protocol +
                    "' (expected equality-xor, gap-parity, gap-parity-boosted, "
                    "send-all-equality or sampled-equality)");
}

Problem problem_for(const ExperimentConfig& config) {
  return is_equality_protocol(config.protocol) ? equality_problem() : gap_parity_problem();
}

// ---------------------------------------------------------------------------
// Commands

namespace {

std::string run_command(const ExperimentConfig& cfg) {
  const ProtocolSpec spec = build_protocol(cfg);
  const auto result = monte_carlo(spec, problem_for(cfg), parse_distribution(cfg.distribution),
                                  cfg.trials, cfg.seed);
  if (cfg.format == "csv") {
    return csv_line({"schema_version", "protocol", "k", "n", "c", "mode", "distribution", "trials",
                     "seed", "successes", "estimate", "stderr"}) +
           csv_line({std::to_string(kSchemaVersion), spec.name, std::to_string(cfg.k),
                     std::to_string(cfg.n), std::to_string(cfg.c), spec.mode().to_string(),
                     cfg.distribution, std::to_string(cfg.trials), std::to_string(cfg.seed),
                     std::to_string(result.successes), fmt_double(result.estimate()),
                     fmt_double(result.standard_error())});
  }
  return dump({{"schema_version", kSchemaVersion},
               {"command", "run"},
               {"config", cfg.to_json()},
               {"cost", spec.declared_cost()},
               {"result", result.to_json()}});
}

std::string exact_command(const ExperimentConfig& cfg, bool per_input) {
  const ProtocolSpec spec = build_protocol(cfg);
  const auto eval = exact_eval(spec, problem_for(cfg), InputSet::all(cfg.k, cfg.n));
  const auto summary = eval.summary_json();
  if (cfg.format == "csv") {
    return csv_line({"schema_version", "protocol", "k", "n", "c", "mode", "inputs", "valid_inputs",
                     "worst_case_success", "worst_case_success_on_0", "worst_case_success_on_1",
                     "average_success_uniform", "average_success_balanced"}) +
           csv_line({std::to_string(kSchemaVersion), spec.name, std::to_string(cfg.k),
                     std::to_string(cfg.n), std::to_string(cfg.c), spec.mode().to_string(),
                     std::to_string(eval.size()), std::to_string(eval.valid_count()),
                     summary["worst_case_success"].get<std::string>(),
                     summary["worst_case_success_on_0"].is_null()
                         ? ""
                         : summary["worst_case_success_on_0"].get<std::string>(),
                     summary["worst_case_success_on_1"].is_null()
                         ? ""
                         : summary["worst_case_success_on_1"].get<std::string>(),
                     summary["average_success_uniform"].get<std::string>(),
                     summary["average_success_balanced"].get<std::string>()});
  }
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"command", "exact"},
                   {"config", cfg.to_json()},
                   {"cost", spec.declared_cost()},
                   {"exact", summary}};
  if (per_input) j["per_input"] = eval.per_input_json();
  return dump(j);
}

std::string sweep_command(const ExperimentConfig& base, const std::vector<int>& ks,
                          const std::vector<std::size_t>& ns, const std::vector<int>& cs) {
  const std::vector<std::string> header{
      "schema_version", "protocol", "k", "n", "c", "mode", "distribution", "trials", "seed",
      "exact_worst_case_success", "exact_average_success", "mc_estimate", "mc_stderr", "z_score"};
  std::string csv = csv_line(header);
  nlohmann::json rows = nlohmann::json::array();
  for (int k : ks) {
    for (std::size_t n : ns) {
      for (int c : cs) {
        ExperimentConfig cfg = base;
        cfg.k = k;
        cfg.n = n;
        cfg.c = c;
        const ProtocolSpec spec = build_protocol(cfg);
        const Problem problem = problem_for(cfg);
        const auto dist = parse_distribution(cfg.distribution);
        std::string worst, average;
        std::optional<double> exact_avg;
        try {
          const auto eval = exact_eval(spec, problem, InputSet::all(k, n));
          worst = to_string(eval.worst_case_success());
          const Rational avg = eval.average_success(dist);
          average = to_string(avg);
          exact_avg = to_double(avg);
        } catch (const CapacityError&) {
          // Row still carries the Monte Carlo estimate.
        }
        std::string estimate, stderr_text, z;
        if (cfg.trials > 0) {
          const auto mc = monte_carlo(spec, problem, dist, cfg.trials, cfg.seed);
          estimate = fmt_double(mc.estimate());
          stderr_text = fmt_double(mc.standard_error());
          if (exact_avg) {
            const double sigma =
                std::sqrt(*exact_avg * (1 - *exact_avg) / static_cast<double>(cfg.trials));
            z = sigma > 0 ? fmt_double((mc.estimate() - *exact_avg) / sigma)
                          : (mc.estimate() == *exact_avg ? "0" : "inf");
          }
        }
        const std::vector<std::string> row{
            std::to_string(kSchemaVersion), spec.name, std::to_string(k), std::to_string(n),
            std::to_string(c), spec.mode().to_string(), cfg.distribution,
            std::to_string(cfg.trials), std::to_string(cfg.seed), worst, average, estimate,
            stderr_text, z};
        csv += csv_line(row);
        nlohmann::json j;
        for (std::size_t i = 0; i < header.size(); ++i) j[header[i]] = row[i];
        rows.push_back(std::move(j));
      }
    }
  }
  if (base.format == "csv") return csv;
  return dump({{"schema_version", kSchemaVersion},
               {"command", "sweep"},
               {"config", base.to_json()},
               {"rows", rows}});
}

std::string verify_quantum_command(const ExperimentConfig& cfg, std::size_t trials,
                                   std::size_t encodings, const std::string& rac_report,
                                   bool& passed) {
  const auto xor_sweep = sweep_xor_mixture(trials, cfg.seed);
  const auto rac = sweep_rac(encodings, derive_seed(cfg.seed, 1));
  const auto grid = check_entropy_grid(2001);
  passed = xor_sweep.passed && rac.passed && grid.passed;

  if (!rac_report.empty()) {
    quantum::StateEncoding<double> enc;
    enc.n = 3;
    enc.q = 3;
    for (Eigen::Index x = 0; x < 8; ++x) enc.states.push_back(quantum::DensityMatrix<double>::basis(8, x));
    std::ofstream file(rac_report, std::ios::binary);
    if (!file) throw ConfigError("cannot open RAC report file '" + rac_report + "'");
    file << quantum::rac_bound_check(enc).to_csv();
  }

  if (cfg.format == "csv") {
    return csv_line({"schema_version", "check", "cases", "statistic", "value", "passed"}) +
           csv_line({"1", "xor-mixture", std::to_string(xor_sweep.configurations),
                     "max_abs_difference", fmt_double(xor_sweep.max_abs_difference),
                     xor_sweep.passed ? "true" : "false"}) +
           csv_line({"1", "rac-bound", std::to_string(rac.encodings), "max_excess",
                     fmt_double(rac.max_excess), rac.passed ? "true" : "false"}) +
           csv_line({"1", "entropy-grid", std::to_string(grid.points), "min_slack",
                     fmt_double(grid.min_slack), grid.passed ? "true" : "false"});
  }
  return dump({{"schema_version", kSchemaVersion},
               {"command", "verify-quantum"},
               {"seed", cfg.seed},
               {"xor_mixture",
                {{"configurations", xor_sweep.configurations},
                 {"max_abs_difference", xor_sweep.max_abs_difference},
                 {"passed", xor_sweep.passed}}},
               {"rac_bound",
                {{"encodings", rac.encodings},
                 {"max_excess", rac.max_excess},
                 {"max_squared_excess", rac.max_squared_excess},
                 {"identity_deviation", rac.identity_deviation},
                 {"passed", rac.passed}}},
               {"entropy_grid",
                {{"points", grid.points}, {"min_slack", grid.min_slack}, {"passed", grid.passed}}},
               {"passed", passed}});
}

std::string verify_finner_command(const ExperimentConfig& cfg, std::size_t families,
                                  const std::string& family_file, bool& passed) {
  nlohmann::json j{{"schema_version", kSchemaVersion}, {"command", "verify-finner"},
                   {"seed", cfg.seed}};
  std::string csv = csv_line({"schema_version", "check", "families", "failures", "min_slack", "passed"});
  passed = true;
  if (!family_file.empty()) {
    std::ifstream in(family_file);
    if (!in) throw ConfigError("cannot open family file '" + family_file + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("family file is not valid JSON: ") + e.what());
    }
    const auto family = family_from_json(doc);
    const auto r = finner_check(family);
    passed = passed && r.holds;
    j["family"] = {{"read_multiplicity", read_multiplicity(family)},
                   {"k", r.k},
                   {"lhs", to_string(r.lhs)},
                   {"lhs_value", to_double(r.lhs)},
                   {"rhs", r.rhs},
                   {"holds", r.holds}};
    csv += csv_line({"1", "family", "1", r.holds ? "0" : "1",
                     fmt_double(r.rhs - to_double(r.lhs)), r.holds ? "true" : "false"});
  }
  if (families > 0) {
    const auto sweep = sweep_finner(families, cfg.seed);
    passed = passed && sweep.passed;
    j["random_families"] = {{"families", sweep.families},
                            {"failures", sweep.failures},
                            {"min_slack", sweep.min_slack},
                            {"passed", sweep.passed}};
    csv += csv_line({"1", "random-families", std::to_string(sweep.families),
                     std::to_string(sweep.failures), fmt_double(sweep.min_slack),
                     sweep.passed ? "true" : "false"});
  }
  j["passed"] = passed;
  return cfg.format == "csv" ? csv : dump(j);
}

std::string modes_command(const ExperimentConfig& cfg) {
  const int k = cfg.k;
  RandomnessMode::none().validate(k);
  std::vector<RandomnessMode> modes{RandomnessMode::none(), RandomnessMode::xor_shared()};
  for (int t = 2; t <= k; ++t) modes.push_back(RandomnessMode::t_shared(t));

  auto describe = [k](const RandomnessMode& m) -> std::string {
    switch (m.kind()) {
      case ModeKind::None:
        return "private coins only";
      case ModeKind::XorShared:
        return "r_0 ^ ... ^ r_{k-1} = 0, any k-1 strings uniform and independent";
      case ModeKind::TShared:
        if (m.t() == k) return "unrestricted shared randomness";
        if (m.t() == k - 1) return "randomness on the forehead";
        return "one string per " + std::to_string(m.t()) + "-subset of players";
    }
    return "";
  };
  struct Edge {
    std::string from, to, construction;
  };
  std::vector<Edge> edges;
  for (int t = k; t > 2; --t) {
    edges.push_back({"tshared:" + std::to_string(t), "tshared:" + std::to_string(t - 1),
                     "slice each parent string into its children"});
  }
  edges.push_back({"tshared:2", "xor", "r_i = XOR of the strings shared with the cyclic neighbours"});
  edges.push_back({"xor", "none", "private coins are available in every mode"});

  if (cfg.format == "csv") {
    std::string csv = csv_line({"schema_version", "kind", "mode", "to", "description"});
    for (const auto& m : modes) csv += csv_line({"1", "mode", m.to_string(), "", describe(m)});
    for (const auto& e : edges) csv += csv_line({"1", "emulation", e.from, e.to, e.construction});
    return csv;
  }
  nlohmann::json j{{"schema_version", kSchemaVersion}, {"command", "modes"}, {"k", k}};
  j["modes"] = nlohmann::json::array();
  for (const auto& m : modes) {
    j["modes"].push_back({{"mode", m.to_string()}, {"description", describe(m)}});
  }
  j["emulations"] = nlohmann::json::array();
  for (const auto& e : edges) {
    j["emulations"].push_back({{"from", e.from}, {"to", e.to}, {"construction", e.construction}});
  }
  return dump(j);
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry point

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simultaneous-message protocols under shared-randomness modes", "smplab"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_file;
  std::string t_shorthand;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON file mirroring the experiment config");
    sub->add_option("--k", cfg.k, "number of players");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
  };
  auto add_protocol = [&](CLI::App* sub) {
    sub->add_option("--protocol", cfg.protocol,
                    "equality-xor, gap-parity, gap-parity-boosted, send-all-equality, "
                    "sampled-equality");
    sub->add_option("--n", cfg.n, "fragment length in bits");
    sub->add_option("--c", cfg.c, "repetitions / samples per player");
    sub->add_option("--mode", cfg.mode, "none, xor, tshared:<t>, unrestricted");
    sub->add_option("--t", t_shorthand, "shorthand for --mode tshared:<t>");
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials");
    sub->add_option("--distribution", cfg.distribution, "uniform or balanced");
  };

  auto* run = app.add_subcommand("run", "Monte Carlo estimate of the success rate");
  add_common(run);
  add_protocol(run);

  bool per_input = false;
  auto* exact = app.add_subcommand("exact", "exact success probabilities by enumeration");
  add_common(exact);
  add_protocol(exact);
  exact->add_flag("--per-input", per_input, "include the per-input acceptance table");

  std::vector<int> ks, cs;
  std::vector<std::size_t> ns;
  auto* sweep = app.add_subcommand("sweep", "exact and Monte Carlo results over a grid, one row each");
  add_common(sweep);
  add_protocol(sweep);
  sweep->add_option("--ks", ks, "player counts")->delimiter(',');
  sweep->add_option("--ns", ns, "fragment lengths")->delimiter(',');
  sweep->add_option("--cs", cs, "repetition counts")->delimiter(',');

  std::size_t quantum_trials = 200;
  std::size_t encodings = 100;
  std::string rac_report;
  auto* vq = app.add_subcommand("verify-quantum", "trace-norm identities and the RAC bound");
  add_common(vq);
  vq->add_option("--trials", quantum_trials, "random parity-mixture configurations");
  vq->add_option("--encodings", encodings, "random encodings for the RAC bound");
  vq->add_option("--rac-report", rac_report, "write the per-bit CSV report of a basis encoding");

  std::size_t families = 1000;
  std::string family_file;
  auto* vf = app.add_subcommand("verify-finner", "Finner's inequality on read-k families");
  add_common(vf);
  vf->add_option("--random-families", families, "number of random families");
  vf->add_option("--family", family_file, "JSON family to check");

  auto* modes = app.add_subcommand("modes", "list randomness modes and emulation edges");
  add_common(modes);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  try {
    bool format_chosen = app.get_subcommands().front()->count("--format") > 0;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot open config file '" + config_file + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
      }
      // Explicit flags win over the file.
      ExperimentConfig from_file = ExperimentConfig::from_json(doc);
      format_chosen = format_chosen || doc.contains("format");
      CLI::App* sub = app.get_subcommands().front();
      auto given = [&](const char* flag) { return sub->count(flag) > 0; };
      if (!given("--protocol")) cfg.protocol = from_file.protocol;
      if (!given("--k")) cfg.k = from_file.k;
      if (!given("--n")) cfg.n = from_file.n;
      if (!given("--c")) cfg.c = from_file.c;
      if (!given("--mode") && !given("--t")) cfg.mode = from_file.mode;
      if (!given("--trials")) cfg.trials = from_file.trials;
      if (!given("--seed")) cfg.seed = from_file.seed;
      if (!given("--distribution")) cfg.distribution = from_file.distribution;
      if (!given("--out")) cfg.out = from_file.out;
      if (!given("--format")) cfg.format = from_file.format;
    }
    if (!t_shorthand.empty()) cfg.mode = "tshared:" + t_shorthand;
    cfg.validate();

    bool passed = true;
    std::string text;
    if (run->parsed()) {
      text = run_command(cfg);
    } else if (exact->parsed()) {
      text = exact_command(cfg, per_input);
    } else if (sweep->parsed()) {
      if (ks.empty()) ks = {cfg.k};
      if (ns.empty()) ns = {cfg.n};
      if (cs.empty()) cs = {cfg.c};
      if (!format_chosen) cfg.format = "csv";
      text = sweep_command(cfg, ks, ns, cs);
    } else if (vq->parsed()) {
      text = verify_quantum_command(cfg, quantum_trials, encodings, rac_report, passed);
    } else if (vf->parsed()) {
      text = verify_finner_command(cfg, families, family_file, passed);
    } else if (modes->parsed()) {
      text = modes_command(cfg);
    }
    emit(cfg, text, out);
    if (!passed) throw InvariantFailure("a verified invariant does not hold");
    return kExitOk;
  } catch (const InvariantFailure& e) {
    err << "invariant failed: " << e.what() << "\n";
    return kExitInvariantFailed;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << "\n";
    return kExitInvariantFailed;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitCapacityError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace smplab
