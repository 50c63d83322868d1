#include "cqsrs/control.hpp"

#include <cmath>

#include "cqsrs/linalg.hpp"
#include "cqsrs/parallel.hpp"
#include "cqsrs/rng.hpp"

namespace cqsrs {

ControlPulse ControlPulse::zero(int segments, double duration) {
  if (segments < 1) throw std::invalid_argument("pulse needs at least one segment");
  if (duration <= 0.0) throw std::invalid_argument("pulse duration must be positive");
  return ControlPulse{segments, duration, Eigen::MatrixXd::Zero(6, segments)};
}

void ControlPulse::clamp(double amplitude_max) {
  amplitudes = amplitudes.cwiseMax(-amplitude_max).cwiseMin(amplitude_max);
}

namespace {

Eigen::Map<const Vector> vec_view(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

// Control Hamiltonians for the six channels on Bob's two qubits.
std::vector<Matrix> control_channels(const QubitRegister& reg) {
  const std::vector<int> bob = reg.bob_qubits();
  if (bob.size() != 2)
    throw std::invalid_argument("local control expects exactly two Bob qubits");
  std::vector<Matrix> out;
  for (int q : bob) {
    out.push_back(embed(pauli::x(), q, reg.size()));
    out.push_back(embed(pauli::y(), q, reg.size()));
    out.push_back(embed(pauli::z(), q, reg.size()));
  }
  return out;
}

Matrix control_hamiltonian(const std::vector<Matrix>& channels, const Eigen::MatrixXd& amps,
                           int segment) {
  Matrix h = Matrix::Zero(channels.front().rows(), channels.front().cols());
  for (int c = 0; c < 6; ++c)
    if (amps(c, segment) != 0.0) h += amps(c, segment) * channels[c];
  return h;
}

// Propagation workspace for one pulse shape: drift generators for the three
// omega branches, the Hamiltonian superoperator of every control channel,
// and (once prepared) per-segment step matrices with prefix states and
// suffix products, so a single-segment perturbation costs one exp-action
// instead of a full re-propagation.
class PulseWorkspace {
 public:
  PulseWorkspace(const EvolutionScenario& scenario, int segments)
      : scenario_(scenario),
        d_(scenario.initial.dim()),
        segments_(segments),
        seg_dt_(scenario.total_time / segments),
        channels_(control_channels(scenario.initial.reg())) {
    const std::vector<int> sensing = scenario.initial.reg().bob_qubits();
    const double omegas[3] = {scenario.omega, scenario.omega + scenario.delta_omega,
                              scenario.omega - scenario.delta_omega};
    for (int b = 0; b < 3; ++b) {
      const Hamiltonian h =
          encoding_hamiltonian(omegas[b], scenario.initial.reg(), sensing);
      drift_[b] = build_lindbladian(h, scenario.noise).sup;
    }
    const Matrix id = Matrix::Identity(d_, d_);
    for (const Matrix& hc : channels_)
      control_sups_.push_back(-kI * (kron(id, hc) - kron(hc.transpose(), id)));
    v0_ = vec_view(scenario.initial.mat());
  }

  int segments() const { return segments_; }

  Matrix segment_generator(int branch, const Eigen::MatrixXd& amps, int k) const {
    Matrix gen = drift_[branch];
    for (int c = 0; c < 6; ++c)
      if (amps(c, k) != 0.0) gen += amps(c, k) * control_sups_[c];
    return gen;
  }

  EvolvedPair evaluate(const Eigen::MatrixXd& amps) const {
    Vector finals[3];
    for (int b = 0; b < 3; ++b) {
      Vector v = v0_;
      for (int k = 0; k < segments_; ++k)
        v = expm_multiply(segment_generator(b, amps, k), v, seg_dt_);
      finals[b] = std::move(v);
    }
    return assemble(finals);
  }

  // Caches step matrices E_k, prefix states f_k = E_k...E_1 v0 and suffix
  // products S_k = E_m...E_k for every branch.
  void prepare(const Eigen::MatrixXd& amps) {
    base_amps_ = amps;
    for (int b = 0; b < 3; ++b) {
      auto& br = branch_[b];
      br.steps.resize(segments_);
      br.prefix.resize(segments_ + 1);
      br.suffix.resize(segments_ + 2);
      br.prefix[0] = v0_;
      for (int k = 0; k < segments_; ++k) {
        br.steps[k] = expm(seg_dt_ * segment_generator(b, amps, k));
        br.prefix[k + 1] = br.steps[k] * br.prefix[k];
      }
      br.suffix[segments_ + 1] = Matrix::Identity(d_ * d_, d_ * d_);
      for (int k = segments_; k >= 1; --k)
        br.suffix[k] = br.suffix[k + 1] * br.steps[k - 1];
    }
    prepared_ = true;
  }

  // Re-evaluates with amplitude (channel, segment) shifted by delta, reusing
  // every cached factor except the perturbed segment.
  EvolvedPair evaluate_perturbed(int channel, int segment, double delta) const {
    require_prepared();
    Eigen::MatrixXd amps = base_amps_;
    amps(channel, segment) += delta;
    Vector finals[3];
    for (int b = 0; b < 3; ++b) {
      const auto& br = branch_[b];
      const Vector w =
          expm_multiply(segment_generator(b, amps, segment), br.prefix[segment], seg_dt_);
      finals[b] = br.suffix[segment + 2] * w;
    }
    return assemble(finals);
  }

 private:
  struct Branch {
    std::vector<Matrix> steps;
    std::vector<Vector> prefix;
    std::vector<Matrix> suffix;
  };

  void require_prepared() const {
    if (!prepared_) throw std::logic_error("PulseWorkspace: prepare() not called");
  }

  EvolvedPair assemble(const Vector finals[3]) const {
    Matrix rho = unvec(finals[0], d_);
    Matrix drho = (unvec(finals[1], d_) - unvec(finals[2], d_)) / (2.0 * scenario_.delta_omega);
    drho = 0.5 * (drho + drho.adjoint().eval());
    drho -= (drho.trace() / static_cast<double>(d_)) * Matrix::Identity(d_, d_);
    return EvolvedPair{DensityMatrix(std::move(rho), scenario_.initial.reg(),
                                     kPropagatedTolerance),
                       std::move(drho)};
  }

  const EvolutionScenario& scenario_;
  Eigen::Index d_;
  int segments_;
  double seg_dt_;
  std::vector<Matrix> channels_;
  std::vector<Matrix> control_sups_;
  Matrix drift_[3];
  Vector v0_;

  bool prepared_ = false;
  Eigen::MatrixXd base_amps_;
  Branch branch_[3];
};

// Joint product-sigma_x measurement over all parties, cached per thread.
const Povm& product_x_povm(int n_qubits) {
  static thread_local int cached_n = -1;
  static thread_local Povm cached;
  if (cached_n != n_qubits) {
    cached = sigma_x_product_povm(n_qubits);
    cached_n = n_qubits;
  }
  return cached;
}

double score(ObjectiveKind kind, const EvolvedPair& pair) {
  if (kind == ObjectiveKind::Qfi) return qfi(pair.rho, pair.drho);
  return cfi(pair.rho, pair.drho, product_x_povm(pair.rho.qubits()));
}

std::vector<Matrix> pulse_terms(const ControlPulse& pulse, const QubitRegister& reg) {
  const std::vector<Matrix> channels = control_channels(reg);
  std::vector<Matrix> terms;
  terms.reserve(pulse.segments);
  for (int k = 0; k < pulse.segments; ++k)
    terms.push_back(control_hamiltonian(channels, pulse.amplitudes, k));
  return terms;
}

}  // namespace

EvolvedPair controlled_evolution(const ControlPulse* pulse, const EvolutionScenario& scenario) {
  if (pulse == nullptr) {
    return propagate_with_derivative(scenario.initial, scenario.omega, scenario.noise, {},
                                     scenario.total_time, scenario.dt, scenario.delta_omega);
  }
  if (std::abs(pulse->duration - scenario.total_time) > 1e-12)
    throw std::invalid_argument("pulse duration does not match scenario time");
  PulseWorkspace ws(scenario, pulse->segments);
  return ws.evaluate(pulse->amplitudes);
}

DensityMatrix evolve_state(const ControlPulse* pulse, const EvolutionScenario& scenario) {
  const std::vector<int> sensing = scenario.initial.reg().bob_qubits();
  const Hamiltonian h = encoding_hamiltonian(scenario.omega, scenario.initial.reg(), sensing);
  std::vector<Segment> segs;
  if (pulse == nullptr) {
    segs.push_back({build_lindbladian(h, scenario.noise), scenario.total_time});
  } else {
    const std::vector<Matrix> terms = pulse_terms(*pulse, scenario.initial.reg());
    for (const Matrix& hc : terms)
      segs.push_back({build_lindbladian(h, scenario.noise, &hc), pulse->dt()});
  }
  return propagate(scenario.initial, segs);
}

double objective_qfi(const ControlPulse& pulse, const EvolutionScenario& scenario) {
  return score(ObjectiveKind::Qfi, controlled_evolution(&pulse, scenario));
}

double objective_cfi(const ControlPulse& pulse, const EvolutionScenario& scenario) {
  return score(ObjectiveKind::Cfi, controlled_evolution(&pulse, scenario));
}

double objective_value(ObjectiveKind kind, const ControlPulse& pulse,
                       const EvolutionScenario& scenario) {
  return score(kind, controlled_evolution(&pulse, scenario));
}

Eigen::MatrixXd objective_gradient(ObjectiveKind kind, const EvolutionScenario& scenario,
                                   const ControlPulse& pulse, double grad_step) {
  PulseWorkspace ws(scenario, pulse.segments);
  ws.prepare(pulse.amplitudes);
  Eigen::MatrixXd grad(6, pulse.segments);
  for (int k = 0; k < pulse.segments; ++k)
    for (int c = 0; c < 6; ++c) {
      const double up = score(kind, ws.evaluate_perturbed(c, k, grad_step));
      const double down = score(kind, ws.evaluate_perturbed(c, k, -grad_step));
      grad(c, k) = (up - down) / (2.0 * grad_step);
    }
  return grad;
}

OptimizerReport grape_optimize(ObjectiveKind kind, const EvolutionScenario& scenario,
                               const GrapeHyper& hyper) {
  if (hyper.iterations < 1) throw std::invalid_argument("grape needs at least one iteration");
  ControlPulse current = ControlPulse::zero(hyper.segments, scenario.total_time);
  PulseWorkspace ws(scenario, hyper.segments);

  OptimizerReport report;
  report.seed = hyper.seed;
  double best = objective_value(kind, current, scenario);
  report.evaluations = 1;
  report.objective_history.push_back(best);

  double step = hyper.step;
  for (int iter = 0; iter < hyper.iterations; ++iter) {
    ws.prepare(current.amplitudes);
    Eigen::MatrixXd grad(6, hyper.segments);
    for (int k = 0; k < hyper.segments; ++k)
      for (int c = 0; c < 6; ++c) {
        const double up = score(kind, ws.evaluate_perturbed(c, k, hyper.grad_step));
        const double down = score(kind, ws.evaluate_perturbed(c, k, -hyper.grad_step));
        grad(c, k) = (up - down) / (2.0 * hyper.grad_step);
        report.evaluations += 2;
      }

    bool improved = false;
    while (step >= 1e-6) {
      ControlPulse trial = current;
      trial.amplitudes += step * grad;
      trial.clamp(hyper.amplitude_max);
      const double value = objective_value(kind, trial, scenario);
      ++report.evaluations;
      if (value > best) {
        current = std::move(trial);
        best = value;
        report.objective_history.push_back(best);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }

  report.best = std::move(current);
  report.best_objective = best;
  return report;
}

OptimizerReport de_optimize(ObjectiveKind kind, const EvolutionScenario& scenario,
                            const DeHyper& hyper) {
  PulseWorkspace ws(scenario, hyper.segments);
  auto objective = [&](const ControlPulse& p) { return score(kind, ws.evaluate(p.amplitudes)); };
  return de_optimize(objective, scenario.total_time, hyper);
}

OptimizerReport de_optimize(const std::function<double(const ControlPulse&)>& objective,
                            double duration, const DeHyper& hyper) {
  if (hyper.population < 4) throw std::invalid_argument("DE needs a population of at least 4");
  const int m = hyper.segments;
  const int dim = 6 * m;
  const int np = hyper.population;

  std::vector<ControlPulse> population(np, ControlPulse::zero(m, duration));
  std::vector<double> fitness(np);
  for (int i = 1; i < np; ++i) {
    RngStream rng(hyper.seed, static_cast<std::uint64_t>(i));
    for (int c = 0; c < 6; ++c)
      for (int k = 0; k < m; ++k)
        population[i].amplitudes(c, k) = rng.uniform(-hyper.amplitude_max, hyper.amplitude_max);
  }

  OptimizerReport report;
  report.seed = hyper.seed;
  parallel_for(np, [&](std::size_t i) { fitness[i] = objective(population[i]); });
  report.evaluations = np;

  int best_index = 0;
  for (int i = 1; i < np; ++i)
    if (fitness[i] > fitness[best_index]) best_index = i;
  report.objective_history.push_back(fitness[best_index]);

  std::vector<ControlPulse> trials(np, ControlPulse::zero(m, duration));
  for (int gen = 0; gen < hyper.generations; ++gen) {
    // Mutation and crossover decisions are drawn up front from per-candidate
    // streams; evaluation order then cannot affect the outcome.
    for (int i = 0; i < np; ++i) {
      RngStream rng(hyper.seed, (static_cast<std::uint64_t>(gen + 1) << 24) ^
                                    static_cast<std::uint64_t>(i));
      int r1, r2, r3;
      do { r1 = static_cast<int>(rng.integer(np)); } while (r1 == i);
      do { r2 = static_cast<int>(rng.integer(np)); } while (r2 == i || r2 == r1);
      do { r3 = static_cast<int>(rng.integer(np)); } while (r3 == i || r3 == r1 || r3 == r2);
      const int j_rand = static_cast<int>(rng.integer(dim));
      ControlPulse& trial = trials[i];
      for (int j = 0; j < dim; ++j) {
        const int c = j % 6, k = j / 6;
        const bool cross = rng.uniform() < hyper.crossover || j == j_rand;
        trial.amplitudes(c, k) =
            cross ? population[r1].amplitudes(c, k) +
                        hyper.weight * (population[r2].amplitudes(c, k) -
                                        population[r3].amplitudes(c, k))
                  : population[i].amplitudes(c, k);
      }
      trial.clamp(hyper.amplitude_max);
    }
    std::vector<double> trial_fitness(np);
    parallel_for(np, [&](std::size_t i) { trial_fitness[i] = objective(trials[i]); });
    report.evaluations += np;
    for (int i = 0; i < np; ++i) {
      if (trial_fitness[i] >= fitness[i]) {
        population[i] = trials[i];
        fitness[i] = trial_fitness[i];
        if (fitness[i] > fitness[best_index]) best_index = i;
      }
    }
    report.objective_history.push_back(fitness[best_index]);
  }

  report.best = population[best_index];
  report.best_objective = fitness[best_index];
  return report;
}

}  // namespace cqsrs
