#pragma once

#include <string>
#include <vector>

#include "cqsrs/entanglement.hpp"
#include "cqsrs/scenario.hpp"

namespace cqsrs {

struct SweepOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // sorted by T (first column)
  nlohmann::json metadata;                // resolved config + artifact version
};

// T, neg_uncontrolled, neg_controlled over the resolved grid.
SweepOutput sweep_negativity(const ScenarioSpec& spec);

// T, uc_qfi, c_qfi, uc_cfi, c_cfi over the resolved grid.
SweepOutput sweep_fisher(const ScenarioSpec& spec);

// Uncontrolled tripartite-negativity trajectory, exposed for death-time
// analysis.
NegativityTrajectory uncontrolled_negativity_trajectory(const ScenarioSpec& spec,
                                                        double t_start, double t_stop,
                                                        double t_step);

// Family default for the final sweep time: depolarizing evolution is capped
// at 8.0; dephasing families use the entanglement death time (capped at 10).
double resolve_t_stop(const ScenarioSpec& spec);

// Single-point pulse optimization at T = t_stop.
nlohmann::json optimize_report(const ScenarioSpec& spec);

// Full protocol transcript.
nlohmann::json protocol_report(const ProtocolConfig& config);

// CSV with 12-significant-digit formatting; fixed column order, no trailing
// comma.
std::string to_csv(const SweepOutput& output);

// Writes the CSV plus a `<path>.meta.json` sidecar with the resolved config.
void emit(const SweepOutput& output, const std::string& path);

}  // namespace cqsrs
