#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqsrs/control.hpp"
#include "cqsrs/protocol.hpp"

namespace cqsrs {

struct OptimizerSpec {
  std::string algorithm;  // "grape" or "de"; empty = family default
  int segments_per_unit_time = 10;
  double amplitude_max = 5.0;
  double grape_step = 0.1;
  int grape_iterations = 20;
  double grad_step = 1e-4;
  int population = 30;
  int generations = 200;
  double de_weight = 0.8;
  double de_crossover = 0.9;
};

// One cell of the noise-configuration matrix: which decoherence acts during
// the evolution, which channel the distribution went through, and how the
// controlled curves are produced.
struct ScenarioSpec {
  NoiseModel::Kind evolution_noise = NoiseModel::Kind::Gpd;
  double gamma = 0.05;  // rate of the evolution noise
  double theta = 0.7853981633974483;
  double phi = 0.0;
  std::string gpd_convention = "per_qubit";  // or "tripled"

  ChannelModel::Kind channel = ChannelModel::Kind::Ideal;
  double lambda_channel = 0.06;
  double gamma_channel = 0.06;
  std::optional<Source> source;  // inferred from the channel when absent

  bool controlled = true;
  ObjectiveKind objective = ObjectiveKind::Qfi;

  double t_start = 1.0;
  std::optional<double> t_stop;  // absent = family default
  double t_step = 1.0;

  double omega = 1.0;
  double delta_omega = 1e-4;
  double dt = 0.1;

  OptimizerSpec optimizer;
  std::uint64_t seed = 1;

  void validate() const;
  NoiseModel make_noise() const;
  ChannelModel make_channel() const;
  Source resolved_source() const;
  std::string resolved_algorithm() const;  // "de" for depolarizing, else "grape"
  std::string family_tag() const;          // e.g. "ADP+DP"
  GrapeHyper grape_hyper(double total_time, std::uint64_t seed) const;
  DeHyper de_hyper(double total_time, std::uint64_t seed) const;
};

// The nine channel/evolution combinations at the published rates.
std::vector<ScenarioSpec> table_one_scenarios();

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

ProtocolConfig protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_to_json(const ProtocolConfig& config);

// Reads and parses a JSON document; errors mention the path (and position
// for parse failures).
nlohmann::json load_config_file(const std::string& path);

// Thrown for malformed or invariant-violating configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cqsrs
