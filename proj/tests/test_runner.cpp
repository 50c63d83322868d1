#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cqsrs/sweeps.hpp"

using namespace cqsrs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "cqsrs_runner_tests";
  fs::create_directories(dir);
  return dir;
}

// Cheap scenario: uncontrolled, short grid.
ScenarioSpec tiny_spec() {
  ScenarioSpec s;
  s.evolution_noise = NoiseModel::Kind::Ppd;
  s.gamma = 0.025;
  s.controlled = false;
  s.t_start = 1.0;
  s.t_stop = 3.0;
  s.t_step = 1.0;
  return s;
}

#ifdef CQSRS_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(CQSRS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("scenario config parses the documented keys") {
  const nlohmann::json j = {{"evolution_noise", "gpd"},
                            {"gamma", 0.05},
                            {"theta", 0.7853981633974483},
                            {"phi", 0.0},
                            {"channel", "ideal"},
                            {"seed", 42}};
  const ScenarioSpec s = scenario_from_json(j);
  CHECK(s.evolution_noise == NoiseModel::Kind::Gpd);
  CHECK(s.gamma == 0.05);
  CHECK(s.seed == 42);
  CHECK(s.resolved_algorithm() == "grape");
  CHECK(s.family_tag() == "GPD");

  const nlohmann::json adp = {{"channel", "adp"}, {"gamma_channel", 0.06},
                              {"evolution_noise", "dp"}};
  const ScenarioSpec s2 = scenario_from_json(adp);
  CHECK(s2.make_channel().kind == ChannelModel::Kind::AsymmetricDepolarize);
  CHECK(s2.resolved_source() == Source::Alice);
  CHECK(s2.resolved_algorithm() == "de");
  CHECK(s2.family_tag() == "ADP+DP");
}

TEST_CASE("scenario config rejects bad input") {
  CHECK_THROWS_AS(scenario_from_json({{"unknown_key", 1}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"channel", "adp"}, {"source", "external"}}),
                  ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"channel", "dp"}, {"source", "alice"}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"evolution_noise", "bogus"}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"gamma", -1.0}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"optimizer", {{"population", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json({{"optimizer", {{"speed", 11}}}}), ConfigError);
}

TEST_CASE("defaults are echoed into the resolved config") {
  const ScenarioSpec s = scenario_from_json({{"evolution_noise", "ppd"}});
  const nlohmann::json echoed = scenario_to_json(s);
  CHECK(echoed.at("gamma") == 0.025);  // PPD default rate
  CHECK(echoed.at("omega") == 1.0);
  CHECK(echoed.at("dt") == 0.1);
  CHECK(echoed.at("delta_omega") == 1e-4);
  CHECK(echoed.at("optimizer").at("segments_per_unit_time") == 10);
  CHECK(echoed.at("optimizer").at("population") == 30);
  CHECK(echoed.at("optimizer").at("generations") == 200);
  CHECK(echoed.at("optimizer").at("algorithm") == "grape");
  CHECK(echoed.at("source") == "alice");
}

TEST_CASE("table one holds nine valid combinations") {
  const std::vector<ScenarioSpec> all = table_one_scenarios();
  REQUIRE(all.size() == 9);
  int ideal = 0, dp = 0, adp = 0;
  for (const ScenarioSpec& s : all) {
    CHECK_NOTHROW(s.validate());
    switch (s.channel) {
      case ChannelModel::Kind::Ideal: ++ideal; break;
      case ChannelModel::Kind::SymmetricDepolarize:
        ++dp;
        CHECK(s.resolved_source() == Source::External);
        break;
      case ChannelModel::Kind::AsymmetricDepolarize:
        ++adp;
        CHECK(s.resolved_source() == Source::Alice);
        break;
    }
  }
  CHECK(ideal == 3);
  CHECK(dp == 3);
  CHECK(adp == 3);
}

TEST_CASE("protocol config round trip") {
  const nlohmann::json j = {{"p_check", 10},      {"p_sense", 100},
                            {"t_s", 0.5},         {"omega_true", 1.0},
                            {"channel", "dp"},    {"lambda_channel", 0.06},
                            {"attack", "bias"},   {"attack_beta", 0.2},
                            {"seed", 9}};
  const ProtocolConfig c = protocol_from_json(j);
  CHECK(c.p_check == 10);
  CHECK(c.source == Source::External);  // inferred
  CHECK(c.attack.kind == AttackModel::Kind::BiasInjection);
  const nlohmann::json echoed = protocol_to_json(c);
  CHECK(echoed.at("channel") == "dp");
  CHECK(echoed.at("attack_beta") == 0.2);
  CHECK(echoed.at("evolution_noise") == "none");

  CHECK_THROWS_AS(protocol_from_json({{"p_check", 3}}), ConfigError);
  CHECK_THROWS_AS(protocol_from_json({{"bogus", 3}}), ConfigError);
}

TEST_CASE("resolved sweep stops") {
  ScenarioSpec dp;
  dp.evolution_noise = NoiseModel::Kind::Dp;
  dp.gamma = 0.02;
  CHECK(resolve_t_stop(dp) == 8.0);

  ScenarioSpec fixed = tiny_spec();
  CHECK(resolve_t_stop(fixed) == 3.0);
}

TEST_CASE("csv shape and formatting") {
  SweepOutput out;
  out.columns = {"T", "uc_qfi", "c_qfi", "uc_cfi", "c_cfi"};
  out.rows = {{1.0, 4.0, 4.0, 3.999999999999, 4.0},
              {2.0, 16.0, 16.123456789012345, 15.0, 16.0}};
  const std::string csv = to_csv(out);
  CHECK(csv.starts_with("T,uc_qfi,c_qfi,uc_cfi,c_cfi\n"));
  CHECK(csv.find("16.123456789") != std::string::npos);  // 12 significant digits
  CHECK(csv.find("16.1234567890123") == std::string::npos);
  CHECK(csv.find(",\n") == std::string::npos);  // no trailing comma
  CHECK(csv.back() == '\n');
}

TEST_CASE("negativity sweep output is sorted and sane") {
  ScenarioSpec s = tiny_spec();
  s.t_start = 0.0;
  const SweepOutput out = sweep_negativity(s);
  REQUIRE(out.columns == std::vector<std::string>{"T", "neg_uncontrolled", "neg_controlled"});
  REQUIRE(out.rows.size() == 4);
  CHECK(out.rows.front()[0] == 0.0);
  CHECK(out.rows.front()[1] == doctest::Approx(0.5).epsilon(1e-9));
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    CHECK(out.rows[i][0] > out.rows[i - 1][0]);
    CHECK(out.rows[i][1] <= out.rows[i - 1][1] + 1e-9);
    CHECK(out.rows[i][2] == out.rows[i][1]);  // uncontrolled run duplicates the column
  }
  CHECK(out.metadata.at("config").at("t_stop") == 3.0);
  CHECK(out.metadata.at("artifact_version").is_string());
}

TEST_CASE("fisher sweep respects the measurement bound") {
  ScenarioSpec s = tiny_spec();
  const SweepOutput out = sweep_fisher(s);
  REQUIRE(out.columns ==
          std::vector<std::string>{"T", "uc_qfi", "c_qfi", "uc_cfi", "c_cfi"});
  for (const auto& row : out.rows) {
    CHECK(row[3] <= row[1] + 1e-9);  // uc_cfi <= uc_qfi
    CHECK(row[1] > 0.0);
  }
}

TEST_CASE("emit writes byte-identical files for identical inputs") {
  const fs::path dir = temp_dir();
  const ScenarioSpec s = tiny_spec();
  const fs::path a = dir / "sweep_a.csv";
  const fs::path b = dir / "sweep_b.csv";
  emit(sweep_fisher(s), a.string());
  emit(sweep_fisher(s), b.string());
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a.string() + ".meta.json") == slurp(b.string() + ".meta.json"));
  const nlohmann::json meta = nlohmann::json::parse(slurp(a.string() + ".meta.json"));
  CHECK(meta.at("config").at("gamma") == 0.025);  // defaults echoed
}

TEST_CASE("missing config file names the path") {
  try {
    load_config_file("/nonexistent/q.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/q.json") != std::string::npos);
  }
}

#ifdef CQSRS_CLI_PATH
TEST_CASE("cli exit codes") {
  const fs::path dir = temp_dir();

  CHECK(run_cli("definitely-not-a-subcommand") == 2);
  CHECK(run_cli("sweep-fisher --config /nonexistent/q.json --out /tmp/x.csv") == 2);
  CHECK(run_cli("sweep-fisher --badflag") == 2);

  const fs::path cfg = dir / "tiny.json";
  {
    std::ofstream out(cfg);
    out << R"({"evolution_noise":"ppd","controlled":false,"t_stop":2.0})";
  }
  const fs::path csv = dir / "cli_out.csv";
  CHECK(run_cli("sweep-fisher --config " + cfg.string() + " --out " + csv.string()) == 0);
  CHECK(slurp(csv).starts_with("T,uc_qfi,c_qfi,uc_cfi,c_cfi\n"));
  CHECK(fs::exists(csv.string() + ".meta.json"));

  const fs::path bad = dir / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"evolution_noise":"ppd", although this is not json})";
  }
  CHECK(run_cli("sweep-fisher --config " + bad.string() + " --out " + csv.string()) == 2);

  const fs::path pcfg = dir / "protocol.json";
  {
    std::ofstream out(pcfg);
    out << R"({"p_check":4,"p_sense":20,"seed":3})";
  }
  CHECK(run_cli("protocol --config " + pcfg.string()) == 0);
}
#endif
