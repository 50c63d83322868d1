#include "cqsrs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace cqsrs {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad value for \"" + key + "\": " + e.what());
  }
}

NoiseModel::Kind parse_noise_kind(const std::string& s) {
  if (s == "none") return NoiseModel::Kind::None;
  if (s == "gpd") return NoiseModel::Kind::Gpd;
  if (s == "ppd") return NoiseModel::Kind::Ppd;
  if (s == "dp") return NoiseModel::Kind::Dp;
  throw ConfigError("evolution_noise must be one of none/gpd/ppd/dp, got \"" + s + "\"");
}

std::string noise_kind_name(NoiseModel::Kind k) {
  switch (k) {
    case NoiseModel::Kind::None: return "none";
    case NoiseModel::Kind::Gpd: return "gpd";
    case NoiseModel::Kind::Ppd: return "ppd";
    case NoiseModel::Kind::Dp: return "dp";
  }
  return "?";
}

ChannelModel::Kind parse_channel_kind(const std::string& s) {
  if (s == "ideal") return ChannelModel::Kind::Ideal;
  if (s == "dp") return ChannelModel::Kind::SymmetricDepolarize;
  if (s == "adp") return ChannelModel::Kind::AsymmetricDepolarize;
  throw ConfigError("channel must be one of ideal/dp/adp, got \"" + s + "\"");
}

std::string channel_kind_name(ChannelModel::Kind k) {
  switch (k) {
    case ChannelModel::Kind::Ideal: return "ideal";
    case ChannelModel::Kind::SymmetricDepolarize: return "dp";
    case ChannelModel::Kind::AsymmetricDepolarize: return "adp";
  }
  return "?";
}

Source parse_source(const std::string& s) {
  if (s == "alice") return Source::Alice;
  if (s == "external") return Source::External;
  throw ConfigError("source must be alice or external, got \"" + s + "\"");
}

OptimizerSpec optimizer_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"algorithm", "segments_per_unit_time", "amplitude_max", "grape_step",
                       "grape_iterations", "grad_step", "population", "generations",
                       "de_weight", "de_crossover"},
                      "optimizer");
  OptimizerSpec o;
  o.algorithm = get_or<std::string>(j, "algorithm", "");
  if (!o.algorithm.empty() && o.algorithm != "grape" && o.algorithm != "de")
    throw ConfigError("optimizer.algorithm must be grape or de");
  o.segments_per_unit_time = get_or(j, "segments_per_unit_time", o.segments_per_unit_time);
  o.amplitude_max = get_or(j, "amplitude_max", o.amplitude_max);
  o.grape_step = get_or(j, "grape_step", o.grape_step);
  o.grape_iterations = get_or(j, "grape_iterations", o.grape_iterations);
  o.grad_step = get_or(j, "grad_step", o.grad_step);
  o.population = get_or(j, "population", o.population);
  o.generations = get_or(j, "generations", o.generations);
  o.de_weight = get_or(j, "de_weight", o.de_weight);
  o.de_crossover = get_or(j, "de_crossover", o.de_crossover);
  if (o.segments_per_unit_time < 1) throw ConfigError("segments_per_unit_time must be >= 1");
  if (o.amplitude_max <= 0.0) throw ConfigError("amplitude_max must be positive");
  return o;
}

nlohmann::json optimizer_to_json(const OptimizerSpec& o, const std::string& resolved) {
  return {{"algorithm", resolved},
          {"segments_per_unit_time", o.segments_per_unit_time},
          {"amplitude_max", o.amplitude_max},
          {"grape_step", o.grape_step},
          {"grape_iterations", o.grape_iterations},
          {"grad_step", o.grad_step},
          {"population", o.population},
          {"generations", o.generations},
          {"de_weight", o.de_weight},
          {"de_crossover", o.de_crossover}};
}

}  // namespace

void ScenarioSpec::validate() const {
  if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
  if (gpd_convention != "per_qubit" && gpd_convention != "tripled")
    throw ConfigError("gpd_convention must be per_qubit or tripled");
  if (lambda_channel < 0.0 || lambda_channel > 1.0)
    throw ConfigError("lambda_channel outside [0,1]");
  if (gamma_channel < 0.0 || gamma_channel > 4.0 / 3.0)
    throw ConfigError("gamma_channel outside [0,4/3]");
  if (t_step <= 0.0) throw ConfigError("t_step must be positive");
  if (t_start < 0.0) throw ConfigError("t_start must be nonnegative");
  if (t_stop && *t_stop < t_start) throw ConfigError("t_stop must be >= t_start");
  if (dt <= 0.0) throw ConfigError("dt must be positive");
  if (delta_omega < 1e-7) throw ConfigError("delta_omega must be at least 1e-7");
  if (source) {
    if (channel == ChannelModel::Kind::AsymmetricDepolarize && *source != Source::Alice)
      throw ConfigError("channel adp requires source alice");
    if (channel == ChannelModel::Kind::SymmetricDepolarize && *source != Source::External)
      throw ConfigError("channel dp requires source external");
  }
}

NoiseModel ScenarioSpec::make_noise() const {
  switch (evolution_noise) {
    case NoiseModel::Kind::None: return NoiseModel::none();
    case NoiseModel::Kind::Gpd:
      return NoiseModel::gpd(gamma, theta, phi, gpd_convention == "tripled");
    case NoiseModel::Kind::Ppd: return NoiseModel::ppd(gamma);
    case NoiseModel::Kind::Dp: return NoiseModel::dp(gamma);
  }
  throw std::logic_error("unreachable noise kind");
}

ChannelModel ScenarioSpec::make_channel() const {
  switch (channel) {
    case ChannelModel::Kind::Ideal: return ChannelModel::ideal();
    case ChannelModel::Kind::SymmetricDepolarize: return ChannelModel::symmetric(lambda_channel);
    case ChannelModel::Kind::AsymmetricDepolarize: return ChannelModel::asymmetric(gamma_channel);
  }
  throw std::logic_error("unreachable channel kind");
}

Source ScenarioSpec::resolved_source() const {
  if (source) return *source;
  return channel == ChannelModel::Kind::SymmetricDepolarize ? Source::External : Source::Alice;
}

std::string ScenarioSpec::resolved_algorithm() const {
  if (!optimizer.algorithm.empty()) return optimizer.algorithm;
  return evolution_noise == NoiseModel::Kind::Dp ? "de" : "grape";
}

std::string ScenarioSpec::family_tag() const {
  std::string evo;
  switch (evolution_noise) {
    case NoiseModel::Kind::None: evo = "NONE"; break;
    case NoiseModel::Kind::Gpd: evo = "GPD"; break;
    case NoiseModel::Kind::Ppd: evo = "PPD"; break;
    case NoiseModel::Kind::Dp: evo = "DP"; break;
  }
  switch (channel) {
    case ChannelModel::Kind::Ideal: return evo;
    case ChannelModel::Kind::SymmetricDepolarize: return "DP+" + evo;
    case ChannelModel::Kind::AsymmetricDepolarize: return "ADP+" + evo;
  }
  return evo;
}

GrapeHyper ScenarioSpec::grape_hyper(double total_time, std::uint64_t hyper_seed) const {
  GrapeHyper h;
  h.segments = std::max(1, static_cast<int>(std::lround(optimizer.segments_per_unit_time *
                                                        total_time)));
  h.amplitude_max = optimizer.amplitude_max;
  h.step = optimizer.grape_step;
  h.iterations = optimizer.grape_iterations;
  h.grad_step = optimizer.grad_step;
  h.seed = hyper_seed;
  return h;
}

DeHyper ScenarioSpec::de_hyper(double total_time, std::uint64_t hyper_seed) const {
  DeHyper h;
  h.segments = std::max(1, static_cast<int>(std::lround(optimizer.segments_per_unit_time *
                                                        total_time)));
  h.population = optimizer.population;
  h.generations = optimizer.generations;
  h.weight = optimizer.de_weight;
  h.crossover = optimizer.de_crossover;
  h.amplitude_max = optimizer.amplitude_max;
  h.seed = hyper_seed;
  return h;
}

std::vector<ScenarioSpec> table_one_scenarios() {
  std::vector<ScenarioSpec> out;
  const NoiseModel::Kind evolutions[] = {NoiseModel::Kind::Gpd, NoiseModel::Kind::Ppd,
                                         NoiseModel::Kind::Dp};
  const ChannelModel::Kind channels[] = {ChannelModel::Kind::Ideal,
                                         ChannelModel::Kind::SymmetricDepolarize,
                                         ChannelModel::Kind::AsymmetricDepolarize};
  for (ChannelModel::Kind ch : channels)
    for (NoiseModel::Kind evo : evolutions) {
      ScenarioSpec s;
      s.evolution_noise = evo;
      s.gamma = evo == NoiseModel::Kind::Gpd ? 0.05
                : evo == NoiseModel::Kind::Ppd ? 0.025
                                               : 0.02;
      s.channel = ch;
      out.push_back(std::move(s));
    }
  return out;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  reject_unknown_keys(j,
                      {"evolution_noise", "gamma", "theta", "phi", "gpd_convention", "channel",
                       "lambda_channel", "gamma_channel", "source", "controlled", "objective",
                       "t_start", "t_stop", "t_step", "omega", "delta_omega", "dt", "optimizer",
                       "seed"},
                      "scenario config");
  ScenarioSpec s;
  s.evolution_noise = parse_noise_kind(get_or<std::string>(j, "evolution_noise", "gpd"));
  s.gamma = get_or(j, "gamma", s.evolution_noise == NoiseModel::Kind::Ppd ? 0.025
                               : s.evolution_noise == NoiseModel::Kind::Dp ? 0.02
                                                                           : 0.05);
  s.theta = get_or(j, "theta", s.theta);
  s.phi = get_or(j, "phi", s.phi);
  s.gpd_convention = get_or<std::string>(j, "gpd_convention", s.gpd_convention);
  s.channel = parse_channel_kind(get_or<std::string>(j, "channel", "ideal"));
  s.lambda_channel = get_or(j, "lambda_channel", s.lambda_channel);
  s.gamma_channel = get_or(j, "gamma_channel", s.gamma_channel);
  if (j.contains("source")) s.source = parse_source(j.at("source").get<std::string>());
  s.controlled = get_or(j, "controlled", s.controlled);
  const std::string obj = get_or<std::string>(j, "objective", "qfi");
  if (obj != "qfi" && obj != "cfi") throw ConfigError("objective must be qfi or cfi");
  s.objective = obj == "qfi" ? ObjectiveKind::Qfi : ObjectiveKind::Cfi;
  s.t_start = get_or(j, "t_start", s.t_start);
  if (j.contains("t_stop") && !j.at("t_stop").is_null())
    s.t_stop = j.at("t_stop").get<double>();
  s.t_step = get_or(j, "t_step", s.t_step);
  s.omega = get_or(j, "omega", s.omega);
  s.delta_omega = get_or(j, "delta_omega", s.delta_omega);
  s.dt = get_or(j, "dt", s.dt);
  if (j.contains("optimizer")) s.optimizer = optimizer_from_json(j.at("optimizer"));
  s.seed = get_or(j, "seed", s.seed);
  s.validate();
  return s;
}

nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  nlohmann::json j{{"evolution_noise", noise_kind_name(s.evolution_noise)},
                   {"gamma", s.gamma},
                   {"theta", s.theta},
                   {"phi", s.phi},
                   {"gpd_convention", s.gpd_convention},
                   {"channel", channel_kind_name(s.channel)},
                   {"lambda_channel", s.lambda_channel},
                   {"gamma_channel", s.gamma_channel},
                   {"source", s.resolved_source() == Source::Alice ? "alice" : "external"},
                   {"controlled", s.controlled},
                   {"objective", s.objective == ObjectiveKind::Qfi ? "qfi" : "cfi"},
                   {"t_start", s.t_start},
                   {"t_step", s.t_step},
                   {"omega", s.omega},
                   {"delta_omega", s.delta_omega},
                   {"dt", s.dt},
                   {"optimizer", optimizer_to_json(s.optimizer, s.resolved_algorithm())},
                   {"seed", s.seed},
                   {"family", s.family_tag()}};
  if (s.t_stop) j["t_stop"] = *s.t_stop;
  return j;
}

ProtocolConfig protocol_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("protocol config must be a JSON object");
  reject_unknown_keys(j,
                      {"n_alice", "n_sensing", "p_check", "p_sense", "t_s", "omega_true",
                       "channel", "lambda_channel", "gamma_channel", "source", "attack",
                       "attack_fraction", "attack_beta", "evolution_noise", "gamma", "theta",
                       "phi", "gpd_convention", "controlled", "optimizer", "seed"},
                      "protocol config");
  ProtocolConfig c;
  c.n_alice = get_or(j, "n_alice", c.n_alice);
  c.n_sensing = get_or(j, "n_sensing", c.n_sensing);
  c.p_check = get_or(j, "p_check", c.p_check);
  c.p_sense = get_or(j, "p_sense", c.p_sense);
  c.t_s = get_or(j, "t_s", c.t_s);
  c.omega_true = get_or(j, "omega_true", c.omega_true);

  const std::string ch = get_or<std::string>(j, "channel", "ideal");
  const double lambda = get_or(j, "lambda_channel", 0.06);
  const double gam = get_or(j, "gamma_channel", 0.06);
  switch (parse_channel_kind(ch)) {
    case ChannelModel::Kind::Ideal: c.channel = ChannelModel::ideal(); break;
    case ChannelModel::Kind::SymmetricDepolarize: c.channel = ChannelModel::symmetric(lambda); break;
    case ChannelModel::Kind::AsymmetricDepolarize: c.channel = ChannelModel::asymmetric(gam); break;
  }
  if (j.contains("source"))
    c.source = parse_source(j.at("source").get<std::string>());
  else
    c.source = c.channel.kind == ChannelModel::Kind::SymmetricDepolarize ? Source::External
                                                                         : Source::Alice;

  const std::string attack = get_or<std::string>(j, "attack", "none");
  if (attack == "none") {
    c.attack = AttackModel::none();
  } else if (attack == "intercept_resend_z") {
    c.attack = AttackModel::intercept_resend_z(get_or(j, "attack_fraction", 1.0));
  } else if (attack == "bias") {
    c.attack = AttackModel::bias_injection(get_or(j, "attack_beta", 0.0));
  } else {
    throw ConfigError("attack must be none/intercept_resend_z/bias");
  }

  ScenarioSpec noise_part;
  noise_part.evolution_noise = parse_noise_kind(get_or<std::string>(j, "evolution_noise", "none"));
  noise_part.gamma = get_or(j, "gamma", noise_part.evolution_noise == NoiseModel::Kind::Ppd
                                            ? 0.025
                                        : noise_part.evolution_noise == NoiseModel::Kind::Dp
                                            ? 0.02
                                            : 0.05);
  noise_part.theta = get_or(j, "theta", noise_part.theta);
  noise_part.phi = get_or(j, "phi", noise_part.phi);
  noise_part.gpd_convention = get_or<std::string>(j, "gpd_convention", "per_qubit");
  if (noise_part.gpd_convention != "per_qubit" && noise_part.gpd_convention != "tripled")
    throw ConfigError("gpd_convention must be per_qubit or tripled");
  c.evolution_noise = noise_part.make_noise();

  c.controlled = get_or(j, "controlled", c.controlled);
  if (j.contains("optimizer")) {
    const OptimizerSpec o = optimizer_from_json(j.at("optimizer"));
    c.control_hyper.segments =
        std::max(1, static_cast<int>(std::lround(o.segments_per_unit_time * c.t_s)));
    c.control_hyper.amplitude_max = o.amplitude_max;
    c.control_hyper.step = o.grape_step;
    c.control_hyper.iterations = o.grape_iterations;
    c.control_hyper.grad_step = o.grad_step;
  } else {
    c.control_hyper.segments = std::max(1, static_cast<int>(std::lround(10 * c.t_s)));
  }
  c.seed = get_or(j, "seed", c.seed);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

nlohmann::json protocol_to_json(const ProtocolConfig& c) {
  nlohmann::json j{{"n_alice", c.n_alice},
                   {"n_sensing", c.n_sensing},
                   {"p_check", c.p_check},
                   {"p_sense", c.p_sense},
                   {"t_s", c.t_s},
                   {"omega_true", c.omega_true},
                   {"channel", channel_kind_name(c.channel.kind)},
                   {"source", c.source == Source::Alice ? "alice" : "external"},
                   {"controlled", c.controlled},
                   {"seed", c.seed}};
  if (c.channel.kind == ChannelModel::Kind::SymmetricDepolarize)
    j["lambda_channel"] = c.channel.strength;
  if (c.channel.kind == ChannelModel::Kind::AsymmetricDepolarize)
    j["gamma_channel"] = c.channel.strength;
  switch (c.attack.kind) {
    case AttackModel::Kind::None: j["attack"] = "none"; break;
    case AttackModel::Kind::InterceptResendZ:
      j["attack"] = "intercept_resend_z";
      j["attack_fraction"] = c.attack.fraction;
      break;
    case AttackModel::Kind::BiasInjection:
      j["attack"] = "bias";
      j["attack_beta"] = c.attack.beta;
      break;
  }
  j["evolution_noise"] = noise_kind_name(c.evolution_noise.kind);
  if (c.evolution_noise.kind != NoiseModel::Kind::None) j["gamma"] = c.evolution_noise.rate;
  if (c.evolution_noise.kind == NoiseModel::Kind::Gpd) {
    j["theta"] = c.evolution_noise.theta;
    j["phi"] = c.evolution_noise.phi;
    j["gpd_convention"] = c.evolution_noise.gpd_tripled ? "tripled" : "per_qubit";
  }
  return j;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
}

}  // namespace cqsrs
