#pragma once

#include "cqsrs/types.hpp"

namespace cqsrs {

// Communication-channel noise between the source and the receiving parties.
struct ChannelModel {
  enum class Kind { Ideal, SymmetricDepolarize, AsymmetricDepolarize };

  Kind kind = Kind::Ideal;
  double strength = 0.0;  // lambda in [0,1] or Gamma in [0,4/3]

  static ChannelModel ideal() { return {Kind::Ideal, 0.0}; }

  static ChannelModel symmetric(double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
      throw std::invalid_argument("symmetric depolarization needs lambda in [0,1]");
    return {Kind::SymmetricDepolarize, lambda};
  }

  static ChannelModel asymmetric(double gamma) {
    if (gamma < 0.0 || gamma > 4.0 / 3.0)
      throw std::invalid_argument("asymmetric depolarization needs Gamma in [0,4/3]");
    return {Kind::AsymmetricDepolarize, gamma};
  }
};

// (|0...0> + |1...1>)/sqrt(2) over `reg`.
DensityMatrix ghz(const QubitRegister& reg);

// Convenience layout: one Alice ancilla, n-1 sensing qubits for Bob.
DensityMatrix ghz(int n_qubits);

// rho -> (1-lambda) rho + lambda I/d over the full register.
DensityMatrix depolarize_symmetric(const DensityMatrix& rho, double lambda);

// Two-qubit Kraus map sum_{ij} (I (x) K_i (x) K_j) rho (...)^dag acting on the
// transmitted pair (Bob's qubits 1 and 2); Alice's retained qubit is left
// untouched. K_0 = sqrt(1 - 3G/4) I, K_{1,2,3} = sqrt(G/4) {X,Y,Z}.
DensityMatrix depolarize_asymmetric(const DensityMatrix& rho, double gamma);

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelModel& channel);

}  // namespace cqsrs
