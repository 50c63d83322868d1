#include "cqsrs/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqsrs/linalg.hpp"
#include "cqsrs/metrology.hpp"

namespace cqsrs {

namespace {

constexpr double kPi = std::numbers::pi;

// Z-basis projective dephasing of the transmitted qubits: what the shared
// state looks like after Eve measures them in the computational basis and
// resends her outcome.
DensityMatrix z_intercept(const DensityMatrix& rho, const std::vector<int>& transmitted) {
  const int n = rho.qubits();
  const Eigen::Index d = rho.dim();
  Eigen::Index mask = 0;
  for (int q : transmitted) mask |= Eigen::Index{1} << (n - 1 - q);
  Matrix out = rho.mat();
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      if ((r & mask) != (c & mask)) out(r, c) = 0.0;
  return DensityMatrix(std::move(out), rho.reg());
}

// Extra Z-phase rotation exp(-i (beta t_s / 2) sigma_z) on each transmitted
// qubit, i.e. an undetected shift of the encoding rate by beta.
DensityMatrix bias_rotation(const DensityMatrix& rho, const std::vector<int>& transmitted,
                            double beta, double t_s) {
  const int n = rho.qubits();
  const Eigen::Index d = rho.dim();
  Vector phases(d);
  for (Eigen::Index b = 0; b < d; ++b) {
    double angle = 0.0;
    for (int q : transmitted) angle += qubit_bit(b, q, n) ? -0.5 : 0.5;
    phases(b) = std::exp(-kI * beta * t_s * angle);
  }
  Matrix out = phases.asDiagonal() * rho.mat() * phases.conjugate().asDiagonal();
  return DensityMatrix(std::move(out), rho.reg());
}

// Hadamard change of basis for an n-qubit register, cached per thread.
const Matrix& hadamard_all(int n) {
  static thread_local int cached_n = -1;
  static thread_local Matrix cached;
  if (cached_n != n) {
    Matrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    Matrix acc = h;
    for (int q = 1; q < n; ++q) acc = kron(acc, h).eval();
    cached = std::move(acc);
    cached_n = n;
  }
  return cached;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (n_alice < 1 || n_sensing < 1)
    throw std::invalid_argument("protocol needs at least one ancilla and one sensing qubit");
  if (p_check < 0 || p_check % 2 != 0)
    throw std::invalid_argument("p_check must be even and nonnegative");
  if (p_sense < 1) throw std::invalid_argument("p_sense must be at least 1");
  if (t_s <= 0.0) throw std::invalid_argument("t_s must be positive");
  const double window = n_sensing * omega_true * t_s;
  if (window <= 0.0 || window >= kPi)
    throw std::invalid_argument("N_S * omega * t_s must lie in (0, pi)");
  if (source == Source::Alice && channel.kind == ChannelModel::Kind::SymmetricDepolarize)
    throw std::invalid_argument("symmetric channel pairs with an external source");
  if (source == Source::External && channel.kind == ChannelModel::Kind::AsymmetricDepolarize)
    throw std::invalid_argument("asymmetric channel pairs with Alice as the source");
}

std::vector<DensityMatrix> distribute(const ProtocolConfig& config, RngStream& rng) {
  config.validate();
  const QubitRegister reg = config.make_register();
  const DensityMatrix probe = ghz(reg);
  const DensityMatrix sent = apply_channel(probe, config.channel);
  const std::vector<int> transmitted = reg.bob_qubits();

  std::vector<DensityMatrix> copies;
  copies.reserve(config.p_total());
  for (long i = 0; i < config.p_total(); ++i) {
    switch (config.attack.kind) {
      case AttackModel::Kind::None:
        copies.push_back(sent);
        break;
      case AttackModel::Kind::InterceptResendZ:
        copies.push_back(rng.uniform() < config.attack.fraction
                             ? z_intercept(sent, transmitted)
                             : sent);
        break;
      case AttackModel::Kind::BiasInjection:
        copies.push_back(bias_rotation(sent, transmitted, config.attack.beta, config.t_s));
        break;
    }
  }
  return copies;
}

SecurityOutcome security_check(const std::vector<DensityMatrix>& states,
                               const ProtocolConfig& config, RngStream& rng) {
  if (static_cast<long>(states.size()) != config.p_total())
    throw std::invalid_argument("security_check: copy count does not match config");

  // Uniform random selection of p_check copies (partial Fisher-Yates).
  std::vector<std::size_t> order(states.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (long i = 0; i < config.p_check; ++i) {
    const std::size_t j = i + rng.integer(order.size() - i);
    std::swap(order[i], order[j]);
  }

  SecurityOutcome out;
  out.checked.assign(order.begin(), order.begin() + config.p_check);
  if (config.p_check == 0) {
    out.report.accepted = true;
    out.report.vacuous = true;
    return out;
  }

  const long half = config.p_check / 2;
  for (long i = 0; i < config.p_check; ++i) {
    const DensityMatrix& state = states[out.checked[i]];
    if (i < half) {
      // Product-sigma_x parity test: S_N = prod_k m_k must be +1.
      const RoundOutcome outcome = measure_round(state, rng);
      if (outcome.parity() == 1)
        ++out.report.x_pass;
      else
        ++out.report.x_fail;
    } else {
      // Computational-basis test: all outcomes must agree.
      const Eigen::Index d = state.dim();
      std::vector<double> probs(d);
      for (Eigen::Index b = 0; b < d; ++b) probs[b] = state.mat()(b, b).real();
      const Eigen::Index b = static_cast<Eigen::Index>(rng.categorical(probs));
      if (b == 0 || b == d - 1)
        ++out.report.z_pass;
      else
        ++out.report.z_fail;
    }
  }
  out.report.accepted = out.report.x_fail == 0 && out.report.z_fail == 0;
  return out;
}

DensityMatrix encode(const DensityMatrix& state, double omega, double t_s,
                     const NoiseModel& noise, const ControlPulse* pulse) {
  const std::vector<int> sensing = state.reg().bob_qubits();
  if (sensing.empty()) throw std::invalid_argument("encode: no sensing qubits in register");
  if (noise.kind == NoiseModel::Kind::None && pulse == nullptr) {
    // exp(-i H t) with diagonal H: pure phases on the coherences.
    const Hamiltonian h = encoding_hamiltonian(omega, state.reg(), sensing);
    const Eigen::Index d = state.dim();
    Vector phases(d);
    for (Eigen::Index b = 0; b < d; ++b) phases(b) = std::exp(-kI * h.op.mat(b, b) * t_s);
    Matrix out = phases.asDiagonal() * state.mat() * phases.conjugate().asDiagonal();
    return DensityMatrix(std::move(out), state.reg());
  }
  EvolutionScenario scenario{state, noise, omega, 1e-4, t_s, 0.1};
  return evolve_state(pulse, scenario);
}

int RoundOutcome::parity() const {
  int p = 1;
  for (int m : bob) p *= m;
  for (int m : alice) p *= m;
  return p;
}

RoundOutcome measure_round(const DensityMatrix& encoded, RngStream& rng) {
  const int n = encoded.qubits();
  const Matrix& w = hadamard_all(n);
  // p_x = <x| W rho W |x>; outcome bit 0 of x is the +1 eigenvalue of sigma_x.
  const Matrix rotated = w * encoded.mat() * w;
  const Eigen::Index d = encoded.dim();
  std::vector<double> probs(d);
  for (Eigen::Index x = 0; x < d; ++x) probs[x] = rotated(x, x).real();
  const Eigen::Index x = static_cast<Eigen::Index>(rng.categorical(probs));

  RoundOutcome out;
  for (int q = 0; q < n; ++q) {
    const int m = qubit_bit(x, q, n) ? -1 : 1;
    if (encoded.reg().owners[q] == Owner::Bob)
      out.bob.push_back(m);
    else
      out.alice.push_back(m);
  }
  return out;
}

EstimationResult estimate(long plus_count, long minus_count, int n_sensing, double t_s) {
  const long p_s = plus_count + minus_count;
  if (p_s < 1) throw std::invalid_argument("estimate: no sensing rounds");
  if (n_sensing < 1 || t_s <= 0.0) throw std::invalid_argument("estimate: bad N_S or t_s");

  EstimationResult result;
  result.plus_count = plus_count;
  result.minus_count = minus_count;
  result.qcrb = 1.0 / (n_sensing * t_s * std::sqrt(static_cast<double>(p_s)));

  const double mean_parity =
      2.0 * static_cast<double>(plus_count) / static_cast<double>(p_s) - 1.0;
  if (mean_parity >= 1.0 || mean_parity <= -1.0) {
    result.boundary = true;
    result.omega_hat = mean_parity >= 1.0 ? 0.0 : kPi / (n_sensing * t_s);
    result.std_error = result.qcrb;
    return result;
  }
  result.omega_hat = std::acos(mean_parity) / (n_sensing * t_s);
  // Delta method: the arccos slope cancels the binomial variance of the mean
  // parity, leaving the Heisenberg-limited value.
  result.std_error = result.qcrb;
  return result;
}

ProtocolResult run_protocol(const ProtocolConfig& config) {
  config.validate();
  RngStream rng(config.seed);

  const std::vector<DensityMatrix> copies = distribute(config, rng);
  SecurityOutcome security = security_check(copies, config, rng);

  ProtocolResult result;
  result.security = security.report;
  if (!security.report.accepted) return result;

  std::optional<ControlPulse> pulse;
  if (config.controlled && config.evolution_noise.kind != NoiseModel::Kind::None) {
    // Optimize against the post-channel probe; Alice's estimator reads the
    // sigma_x statistics, so the CFI is the figure of merit here.
    EvolutionScenario scenario{apply_channel(ghz(config.make_register()), config.channel),
                               config.evolution_noise, config.omega_true, 1e-4, config.t_s,
                               0.1};
    pulse = grape_optimize(ObjectiveKind::Cfi, scenario, config.control_hyper).best;
  }

  std::vector<bool> used(copies.size(), false);
  for (std::size_t idx : security.checked) used[idx] = true;

  long plus = 0, minus = 0;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    if (used[i]) continue;
    const DensityMatrix encoded =
        encode(copies[i], config.omega_true, config.t_s, config.evolution_noise,
               pulse ? &*pulse : nullptr);
    const RoundOutcome outcome = measure_round(encoded, rng);
    if (outcome.parity() == 1)
      ++plus;
    else
      ++minus;
  }
  result.estimation = estimate(plus, minus, config.n_sensing, config.t_s);
  return result;
}

}  // namespace cqsrs
