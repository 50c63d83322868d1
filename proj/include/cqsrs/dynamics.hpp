#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cqsrs/types.hpp"

namespace cqsrs {

struct Hamiltonian {
  OperatorMatrix op;
  double omega = 0.0;
};

// Decoherence during the sensing evolution, acting independently on each of
// Bob's sensing qubits.
struct NoiseModel {
  enum class Kind { None, Gpd, Ppd, Dp };

  Kind kind = Kind::None;
  double rate = 0.0;
  double theta = 0.0;  // GPD axis polar angle
  double phi = 0.0;    // GPD axis azimuth
  // Reading of the GPD k-sum: false = one collapse operator per sensing
  // qubit, true = three identical operators per qubit (triples the rate).
  bool gpd_tripled = false;

  static NoiseModel none() { return {}; }
  static NoiseModel gpd(double rate, double theta, double phi, bool tripled = false) {
    check_rate(rate);
    return {Kind::Gpd, rate, theta, phi, tripled};
  }
  static NoiseModel ppd(double rate) {
    check_rate(rate);
    return {Kind::Ppd, rate, 0.0, 0.0, false};
  }
  static NoiseModel dp(double rate) {
    check_rate(rate);
    return {Kind::Dp, rate, 0.0, 0.0, false};
  }

 private:
  static void check_rate(double rate) {
    if (rate < 0.0) throw std::invalid_argument("noise rate must be nonnegative");
  }
};

// Vectorized generator acting on column-stacked rho.
struct Lindbladian {
  Matrix sup;  // d^2 x d^2
  QubitRegister reg;
};

struct Segment {
  Lindbladian generator;
  double dt;
};

// H = (omega/2) sum_{j in sensing} sigma_z^(j); diagonal in the
// computational basis.
Hamiltonian encoding_hamiltonian(double omega, const QubitRegister& reg,
                                 const std::vector<int>& sensing);

// (operator, rate) pairs for `noise` embedded on each target qubit.
std::vector<std::pair<Matrix, double>> collapse_operators(const NoiseModel& noise,
                                                          const QubitRegister& reg,
                                                          const std::vector<int>& targets);

// -i[H, .] + sum_k rate_k (L . L^dag - (1/2){L^dag L, .}) in column-stacking
// vectorization.
Matrix liouvillian(const Matrix& hamiltonian,
                   const std::vector<std::pair<Matrix, double>>& collapse);

// Full generator for H(+control) with `noise` on Bob's qubits of the register.
Lindbladian build_lindbladian(const Hamiltonian& h, const NoiseModel& noise,
                              const Matrix* control = nullptr);
Lindbladian build_lindbladian(const Hamiltonian& h, const NoiseModel& noise,
                              const std::vector<int>& noise_targets,
                              const Matrix* control = nullptr);

// max_x |(vec I)^dag L e_x|; zero for trace-preserving generators.
double trace_preservation_defect(const Lindbladian& gen);

// Minimum eigenvalue of the Choi matrix of exp(dt L); nonnegative (to
// tolerance) iff the step is completely positive.
double choi_min_eigenvalue(const Lindbladian& gen, double dt);

// rho(T) = exp(dt_m L_m) ... exp(dt_1 L_1) rho(0), each factor exact.
DensityMatrix propagate(const DensityMatrix& rho0, std::span<const Segment> segments);

struct EvolvedPair {
  DensityMatrix rho;
  Matrix drho;  // Hermitian, traceless
};

// Propagates rho0 under H_omega (+ optional piecewise controls) with noise on
// Bob's qubits for `total_time`, and returns the state together with its
// omega-derivative by symmetric finite difference.
//
// `control_terms` holds one control Hamiltonian per segment (segments of
// total_time / control_terms.size() each); empty means no control.
EvolvedPair propagate_with_derivative(const DensityMatrix& rho0, double omega,
                                      const NoiseModel& noise,
                                      const std::vector<Matrix>& control_terms,
                                      double total_time, double dt, double delta_omega);

}  // namespace cqsrs
