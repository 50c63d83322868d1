#include "cqsrs/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cqsrs/parallel.hpp"
#include "cqsrs/version.hpp"

namespace cqsrs {

namespace {

std::vector<double> time_grid(double start, double stop, double step) {
  std::vector<double> out;
  const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

DensityMatrix initial_state(const ScenarioSpec& spec) {
  return apply_channel(ghz(3), spec.make_channel());
}

EvolutionScenario evolution_at(const ScenarioSpec& spec, const DensityMatrix& initial,
                               double total_time) {
  return EvolutionScenario{initial, spec.make_noise(), spec.omega, spec.delta_omega,
                           total_time, spec.dt};
}

// Deterministic per-point optimizer seed.
std::uint64_t point_seed(const ScenarioSpec& spec, std::size_t index, int objective) {
  return mix_seed(spec.seed, (static_cast<std::uint64_t>(index) << 2) | objective);
}

ControlPulse optimized_pulse(const ScenarioSpec& spec, const EvolutionScenario& scenario,
                             ObjectiveKind kind, std::uint64_t seed) {
  if (spec.resolved_algorithm() == "de")
    return de_optimize(kind, scenario, spec.de_hyper(scenario.total_time, seed)).best;
  return grape_optimize(kind, scenario, spec.grape_hyper(scenario.total_time, seed)).best;
}

nlohmann::json base_metadata(const ScenarioSpec& spec, double resolved_t_stop,
                             const std::vector<std::string>& columns) {
  nlohmann::json meta = {{"config", scenario_to_json(spec)},
                         {"artifact_version", kVersion},
                         {"columns", columns}};
  meta["config"]["t_stop"] = resolved_t_stop;
  return meta;
}

}  // namespace

double resolve_t_stop(const ScenarioSpec& spec) {
  if (spec.t_stop) return *spec.t_stop;
  switch (spec.evolution_noise) {
    case NoiseModel::Kind::None:
      return 5.0;
    case NoiseModel::Kind::Dp:
      return 8.0;
    default: {
      const NegativityTrajectory traj =
          uncontrolled_negativity_trajectory(spec, 0.0, 12.0, 0.5);
      const auto death = death_time(traj);
      if (!death) return 10.0;
      const double stop = std::floor(*death);
      return std::min(10.0, std::max(1.0, stop));
    }
  }
}

NegativityTrajectory uncontrolled_negativity_trajectory(const ScenarioSpec& spec,
                                                        double t_start, double t_stop,
                                                        double t_step) {
  const DensityMatrix initial = initial_state(spec);
  const std::vector<double> grid = time_grid(t_start, t_stop, t_step);
  NegativityTrajectory traj;
  traj.model_tag = spec.family_tag();
  traj.times = grid;
  traj.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    if (grid[i] <= 0.0) {
      traj.values[i] = tripartite_negativity(initial);
      return;
    }
    const EvolutionScenario scenario = evolution_at(spec, initial, grid[i]);
    traj.values[i] = tripartite_negativity(evolve_state(nullptr, scenario));
  });
  return traj;
}

SweepOutput sweep_negativity(const ScenarioSpec& spec) {
  const double t_stop = resolve_t_stop(spec);
  const DensityMatrix initial = initial_state(spec);
  const std::vector<double> grid = time_grid(spec.t_start, t_stop, spec.t_step);

  SweepOutput out;
  out.columns = {"T", "neg_uncontrolled", "neg_controlled"};
  out.rows.assign(grid.size(), {});
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    if (t <= 0.0) {
      const double n0 = tripartite_negativity(initial);
      out.rows[i] = {t, n0, n0};
      return;
    }
    const EvolutionScenario scenario = evolution_at(spec, initial, t);
    const double uncontrolled = tripartite_negativity(evolve_state(nullptr, scenario));
    double controlled = uncontrolled;
    if (spec.controlled) {
      const ControlPulse pulse =
          optimized_pulse(spec, scenario, spec.objective, point_seed(spec, i, 0));
      controlled = tripartite_negativity(evolve_state(&pulse, scenario));
    }
    out.rows[i] = {t, uncontrolled, controlled};
  });
  out.metadata = base_metadata(spec, t_stop, out.columns);
  return out;
}

SweepOutput sweep_fisher(const ScenarioSpec& spec) {
  const double t_stop = resolve_t_stop(spec);
  const DensityMatrix initial = initial_state(spec);
  const std::vector<double> grid = time_grid(spec.t_start, t_stop, spec.t_step);

  SweepOutput out;
  out.columns = {"T", "uc_qfi", "c_qfi", "uc_cfi", "c_cfi"};
  out.rows.assign(grid.size(), {});
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    if (t <= 0.0) {
      out.rows[i] = {t, 0.0, 0.0, 0.0, 0.0};
      return;
    }
    const EvolutionScenario scenario = evolution_at(spec, initial, t);
    const EvolvedPair pair = controlled_evolution(nullptr, scenario);
    const Povm povm = sigma_x_product_povm(3);
    const double uc_qfi = qfi(pair.rho, pair.drho);
    const double uc_cfi = cfi(pair.rho, pair.drho, povm);
    double c_qfi = uc_qfi, c_cfi = uc_cfi;
    if (spec.controlled) {
      const ControlPulse qfi_pulse = optimized_pulse(spec, scenario, ObjectiveKind::Qfi,
                                                     point_seed(spec, i, 0));
      c_qfi = objective_qfi(qfi_pulse, scenario);
      const ControlPulse cfi_pulse = optimized_pulse(spec, scenario, ObjectiveKind::Cfi,
                                                     point_seed(spec, i, 1));
      c_cfi = objective_cfi(cfi_pulse, scenario);
    }
    out.rows[i] = {t, uc_qfi, c_qfi, uc_cfi, c_cfi};
  });
  out.metadata = base_metadata(spec, t_stop, out.columns);
  return out;
}

nlohmann::json optimize_report(const ScenarioSpec& spec) {
  const double t_stop = resolve_t_stop(spec);
  const DensityMatrix initial = initial_state(spec);
  const EvolutionScenario scenario = evolution_at(spec, initial, t_stop);

  OptimizerReport report;
  if (spec.resolved_algorithm() == "de")
    report = de_optimize(spec.objective, scenario, spec.de_hyper(t_stop, spec.seed));
  else
    report = grape_optimize(spec.objective, scenario, spec.grape_hyper(t_stop, spec.seed));

  const EvolvedPair baseline = controlled_evolution(nullptr, scenario);
  const double uncontrolled = spec.objective == ObjectiveKind::Qfi
                                  ? qfi(baseline.rho, baseline.drho)
                                  : cfi(baseline.rho, baseline.drho, sigma_x_product_povm(3));

  std::vector<std::vector<double>> amplitudes;
  for (int c = 0; c < 6; ++c) {
    std::vector<double> row(report.best.segments);
    for (int k = 0; k < report.best.segments; ++k) row[k] = report.best.amplitudes(c, k);
    amplitudes.push_back(std::move(row));
  }
  nlohmann::json j = {{"T", t_stop},
                      {"objective", spec.objective == ObjectiveKind::Qfi ? "qfi" : "cfi"},
                      {"algorithm", spec.resolved_algorithm()},
                      {"uncontrolled", uncontrolled},
                      {"best_objective", report.best_objective},
                      {"objective_history", report.objective_history},
                      {"evaluations", report.evaluations},
                      {"segments", report.best.segments},
                      {"amplitudes", amplitudes},
                      {"seed", report.seed},
                      {"config", scenario_to_json(spec)},
                      {"artifact_version", kVersion}};
  j["config"]["t_stop"] = t_stop;
  return j;
}

nlohmann::json protocol_report(const ProtocolConfig& config) {
  const ProtocolResult result = run_protocol(config);
  nlohmann::json security = {{"x_pass", result.security.x_pass},
                             {"x_fail", result.security.x_fail},
                             {"z_pass", result.security.z_pass},
                             {"z_fail", result.security.z_fail},
                             {"accepted", result.security.accepted},
                             {"vacuous", result.security.vacuous}};
  nlohmann::json j = {{"security", security},
                      {"config", protocol_to_json(config)},
                      {"artifact_version", kVersion}};
  if (result.estimation) {
    const EstimationResult& est = *result.estimation;
    j["estimation"] = {{"omega_hat", est.omega_hat},   {"std_error", est.std_error},
                       {"qcrb", est.qcrb},             {"plus_count", est.plus_count},
                       {"minus_count", est.minus_count}, {"boundary", est.boundary}};
  } else {
    j["estimation"] = nullptr;
  }
  return j;
}

std::string to_csv(const SweepOutput& output) {
  std::string csv;
  for (std::size_t c = 0; c < output.columns.size(); ++c) {
    if (c) csv += ',';
    csv += output.columns[c];
  }
  csv += '\n';
  char buf[64];
  for (const auto& row : output.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) csv += ',';
      std::snprintf(buf, sizeof(buf), "%.12g", row[c]);
      csv += buf;
    }
    csv += '\n';
  }
  return csv;
}

void emit(const SweepOutput& output, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << to_csv(output);
  }
  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write metadata sidecar for: " + path);
  meta << output.metadata.dump(2) << '\n';
}

}  // namespace cqsrs
