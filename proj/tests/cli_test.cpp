#include "smplab/cli.hpp"
#include "smplab/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace smplab {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("smplab_cli_test_" + name);
}

TEST(Cli, ExactEqualityTwoBits) {
  const auto r = cli({"exact", "--protocol", "equality-xor", "--k", "3", "--n", "2", "--c", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["exact"]["worst_case_rejection_on_0"], "3/4");
  EXPECT_EQ(j["exact"]["worst_case_success_on_1"], "1");
  EXPECT_EQ(j["config"]["seed"], 1);
  EXPECT_EQ(j["cost"], 6);
}

TEST(Cli, ExactPerInputAndCsv) {
  const auto r = cli({"exact", "--k", "2", "--n", "1", "--per-input"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["per_input"].size(), 4u);
  const auto csv = cli({"exact", "--k", "2", "--n", "1", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("schema_version,", 0), 0u);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 2);
}

TEST(Cli, VerifyFinner) {
  const auto r = cli({"verify-finner", "--random-families", "1000", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["random_families"]["failures"], 0);
  EXPECT_EQ(j["passed"], true);
}

TEST(Cli, VerifyFinnerOnFamilyFile) {
  const auto r = cli({"verify-finner", "--random-families", "0", "--family",
                      SMPLAB_SOURCE_DIR "/docs/readk_forehead_family.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["family"]["lhs"], "1/4");
  EXPECT_EQ(j["family"]["k"], 2);
  EXPECT_EQ(cli({"verify-finner", "--family", "/nonexistent.json"}).code, kExitConfigError);
}

TEST(Cli, Modes) {
  const auto r = cli({"modes", "--k", "3"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  std::vector<std::string> names;
  for (const auto& m : j["modes"]) names.push_back(m["mode"]);
  EXPECT_EQ(names, (std::vector<std::string>{"none", "xor", "tshared:2", "tshared:3"}));
  bool pair_to_xor = false, three_to_two = false;
  for (const auto& e : j["emulations"]) {
    pair_to_xor |= e["from"] == "tshared:2" && e["to"] == "xor";
    three_to_two |= e["from"] == "tshared:3" && e["to"] == "tshared:2";
  }
  EXPECT_TRUE(pair_to_xor);
  EXPECT_TRUE(three_to_two);
  EXPECT_EQ(cli({"modes", "--k", "1"}).code, kExitConfigError);
}

TEST(Cli, VerifyQuantum) {
  const auto report = temp_path("rac.csv");
  const auto r = cli({"verify-quantum", "--trials", "30", "--encodings", "10", "--rac-report",
                      report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["passed"], true);
  EXPECT_EQ(slurp(report).rfind("j,trace_distance,entropy_term\n", 0), 0u);
  std::filesystem::remove(report);
}

TEST(Cli, RunIsReproducibleThroughFiles) {
  const auto path = temp_path("run.json");
  const std::vector<std::string> args{"run",    "--protocol", "gap-parity", "--k",
                                      "3",      "--n",        "9",          "--trials",
                                      "2000",   "--seed",     "5",          "--out",
                                      path.string()};
  ASSERT_EQ(cli(args).code, 0);
  const auto first = slurp(path);
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(path));
  const auto j = nlohmann::json::parse(first);
  EXPECT_EQ(j["result"]["master_seed"], 5);
  EXPECT_EQ(j["config"]["trials"], 2000);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileAndFlagOverride) {
  const auto cfg = temp_path("config.json");
  {
    std::ofstream out(cfg);
    out << R"({"protocol": "equality-xor", "k": 3, "n": 2, "c": 3, "format": "json"})";
  }
  const auto r = cli({"exact", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["exact"]["worst_case_rejection_on_0"], "7/8");
  const auto o = cli({"exact", "--config", cfg.string(), "--c", "1"});
  EXPECT_EQ(nlohmann::json::parse(o.out)["exact"]["worst_case_rejection_on_0"], "1/2");
  {
    std::ofstream out(cfg);
    out << "{not json";
  }
  EXPECT_EQ(cli({"exact", "--config", cfg.string()}).code, kExitConfigError);
  std::filesystem::remove(cfg);

  ExperimentConfig c;
  c.k = 5;
  c.mode = "tshared:3";
  const auto back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST(Cli, SweepWritesOneCsvRowPerConfig) {
  const auto r = cli({"sweep", "--ks", "3", "--ns", "1,2", "--cs", "1,2", "--trials", "500"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  EXPECT_NE(r.out.find("schema_version"), std::string::npos);
  const auto j = cli({"sweep", "--ks", "3", "--ns", "1", "--trials", "100", "--format", "json"});
  EXPECT_EQ(nlohmann::json::parse(j.out)["rows"].size(), 1u);
}

TEST(Cli, ModesOfProtocols) {
  for (const char* mode : {"xor", "tshared:2", "tshared:3"}) {
    const auto r = cli({"exact", "--k", "3", "--n", "1", "--mode", mode});
    ASSERT_EQ(r.code, 0) << mode << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["exact"]["worst_case_success_on_0"], "1/2") << mode;
  }
  EXPECT_EQ(cli({"exact", "--k", "3", "--n", "1", "--t", "2"}).code, 0);
  EXPECT_EQ(cli({"exact", "--k", "3", "--n", "1", "--mode", "none"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--protocol", "gap-parity", "--mode", "xor"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--protocol", "send-all-equality", "--k", "3", "--n", "1"}).code, 0);
  EXPECT_EQ(cli({"exact", "--protocol", "gap-parity-boosted", "--k", "3", "--n", "3", "--c", "3"}).code,
            0);
}

TEST(Cli, ErrorsMapToExitCodes) {
  const auto unknown = cli({"exact", "--bogus", "1"});
  EXPECT_EQ(unknown.code, kExitConfigError);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitConfigError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--protocol", "nope"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--k", "1"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--format", "xml"}).code, kExitConfigError);
  EXPECT_EQ(cli({"run", "--distribution", "zipf"}).code, kExitConfigError);
  EXPECT_EQ(cli({"exact", "--k", "4", "--n", "10"}).code, kExitCapacityError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace smplab
