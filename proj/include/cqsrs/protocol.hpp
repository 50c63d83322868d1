#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqsrs/control.hpp"
#include "cqsrs/rng.hpp"
#include "cqsrs/states.hpp"

namespace cqsrs {

struct AttackModel {
  enum class Kind { None, InterceptResendZ, BiasInjection };

  Kind kind = Kind::None;
  double fraction = 0.0;  // share of copies Eve intercepts
  double beta = 0.0;      // injected phase-rate bias

  static AttackModel none() { return {}; }
  static AttackModel intercept_resend_z(double fraction) {
    if (fraction < 0.0 || fraction > 1.0)
      throw std::invalid_argument("attack fraction outside [0,1]");
    return {Kind::InterceptResendZ, fraction, 0.0};
  }
  static AttackModel bias_injection(double beta) { return {Kind::BiasInjection, 0.0, beta}; }
};

enum class Source { Alice, External };

struct ProtocolConfig {
  int n_alice = 1;
  int n_sensing = 2;
  long p_check = 20;   // even; split between the two test families
  long p_sense = 10000;
  double t_s = 1.0;
  double omega_true = 0.7853981633974483;  // mid identifiable window for defaults
  ChannelModel channel = ChannelModel::ideal();
  Source source = Source::Alice;
  AttackModel attack = AttackModel::none();
  NoiseModel evolution_noise = NoiseModel::none();  // encode-stage decoherence
  bool controlled = false;                          // optimize a pulse for the encode stage
  GrapeHyper control_hyper{};
  std::uint64_t seed = 1;

  int n_total() const { return n_alice + n_sensing; }
  long p_total() const { return p_check + p_sense; }
  QubitRegister make_register() const { return QubitRegister::split(n_alice, n_sensing); }
  void validate() const;
};

struct SecurityReport {
  long x_pass = 0, x_fail = 0;  // sigma_x parity tests
  long z_pass = 0, z_fail = 0;  // sigma_z equality tests
  bool accepted = false;
  bool vacuous = false;  // p_check = 0: nothing was tested
};

struct EstimationResult {
  double omega_hat = 0.0;
  double std_error = 0.0;
  double qcrb = 0.0;  // 1/sqrt(p_s N_S^2 t_s^2)
  long plus_count = 0;
  long minus_count = 0;
  bool boundary = false;  // empirical mean parity hit +/-1; estimate clipped
};

struct ProtocolResult {
  SecurityReport security;
  std::optional<EstimationResult> estimation;  // empty when aborted
};

// p copies of GHZ_N through the channel (asymmetric map for source=Alice,
// symmetric for External), with the attack applied to the transmitted qubits.
std::vector<DensityMatrix> distribute(const ProtocolConfig& config, RngStream& rng);

struct SecurityOutcome {
  SecurityReport report;
  std::vector<std::size_t> checked;  // indices consumed by the tests
};

// Randomly selects p_check copies; half get the product-sigma_x parity test
// (pass iff the outcome product is +1), half the computational-basis equality
// test (pass iff all outcomes agree). Accept iff every test passes.
SecurityOutcome security_check(const std::vector<DensityMatrix>& states,
                               const ProtocolConfig& config, RngStream& rng);

// Phase encoding under H_omega for time t_s; exact diagonal phases in the
// ideal case, Lindblad propagation (with optional pulse) otherwise.
DensityMatrix encode(const DensityMatrix& state, double omega, double t_s,
                     const NoiseModel& noise = NoiseModel::none(),
                     const ControlPulse* pulse = nullptr);

struct RoundOutcome {
  std::vector<int> bob;    // +/-1 per sensing qubit
  std::vector<int> alice;  // +/-1 per ancilla qubit
  int parity() const;
};

// Samples one joint product-sigma_x outcome; Bob's qubits are reported
// separately from Alice's.
RoundOutcome measure_round(const DensityMatrix& encoded, RngStream& rng);

// arccos inversion of the mean parity; identifiable for N_S omega t_s in
// (0, pi).
EstimationResult estimate(long plus_count, long minus_count, int n_sensing, double t_s);

ProtocolResult run_protocol(const ProtocolConfig& config);

}  // namespace cqsrs
