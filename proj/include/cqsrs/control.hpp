#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cqsrs/dynamics.hpp"
#include "cqsrs/metrology.hpp"
#include "cqsrs/states.hpp"

namespace cqsrs {

// Piecewise-constant local control on Bob's two qubits. Row layout:
// rows 0..2 = (x, y, z) amplitudes on the first Bob qubit, rows 3..5 the
// same on the second. Column k is segment k of length duration/segments.
struct ControlPulse {
  int segments = 1;
  double duration = 0.0;
  Eigen::MatrixXd amplitudes;  // 6 x segments

  static ControlPulse zero(int segments, double duration);
  double dt() const { return duration / segments; }
  void clamp(double amplitude_max);
};

// Everything an objective evaluation needs: the post-channel probe state,
// evolution noise, the true parameter and the finite-difference step, and
// the total sensing time.
struct EvolutionScenario {
  DensityMatrix initial;
  NoiseModel noise;
  double omega = 1.0;
  double delta_omega = 1e-4;
  double total_time = 1.0;
  double dt = 0.1;  // time-grid hint; segments are integrated exactly
};

enum class ObjectiveKind { Qfi, Cfi };

// Final-time state and omega-derivative under the pulse (zero pulse when
// nullptr); the workhorse behind both objectives.
EvolvedPair controlled_evolution(const ControlPulse* pulse, const EvolutionScenario& scenario);

// Final-time state only (single branch, no derivative).
DensityMatrix evolve_state(const ControlPulse* pulse, const EvolutionScenario& scenario);

double objective_qfi(const ControlPulse& pulse, const EvolutionScenario& scenario);
double objective_cfi(const ControlPulse& pulse, const EvolutionScenario& scenario);
double objective_value(ObjectiveKind kind, const ControlPulse& pulse,
                       const EvolutionScenario& scenario);

// Central-difference gradient of the objective with respect to every
// amplitude, as a 6 x segments array.
Eigen::MatrixXd objective_gradient(ObjectiveKind kind, const EvolutionScenario& scenario,
                                   const ControlPulse& pulse, double grad_step);

struct GrapeHyper {
  int segments = 10;
  double amplitude_max = 5.0;
  double step = 0.1;
  int iterations = 20;
  double grad_step = 1e-4;
  std::uint64_t seed = 0;
};

struct DeHyper {
  int population = 30;
  int generations = 200;
  double weight = 0.8;     // F
  double crossover = 0.9;  // CR
  double amplitude_max = 5.0;
  int segments = 10;
  std::uint64_t seed = 0;
};

struct OptimizerReport {
  ControlPulse best;
  double best_objective = 0.0;
  std::vector<double> objective_history;  // accepted iterates, non-decreasing
  long evaluations = 0;
  std::uint64_t seed = 0;
};

// Projected gradient ascent from the zero pulse; non-improving steps halve
// the step size down to 1e-6, then stop.
OptimizerReport grape_optimize(ObjectiveKind kind, const EvolutionScenario& scenario,
                               const GrapeHyper& hyper);

// rand/1/bin differential evolution over the flattened amplitude box. The
// population is seeded with the zero pulse plus uniform random candidates;
// per-candidate RNG substreams make the result independent of scheduling.
OptimizerReport de_optimize(ObjectiveKind kind, const EvolutionScenario& scenario,
                            const DeHyper& hyper);
OptimizerReport de_optimize(const std::function<double(const ControlPulse&)>& objective,
                            double duration, const DeHyper& hyper);

}  // namespace cqsrs
