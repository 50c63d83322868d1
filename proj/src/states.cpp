#include "cqsrs/states.hpp"

#include <cmath>

#include "cqsrs/linalg.hpp"

namespace cqsrs {

DensityMatrix ghz(const QubitRegister& reg) {
  const Eigen::Index d = reg.dim();
  Matrix m = Matrix::Zero(d, d);
  m(0, 0) = m(d - 1, d - 1) = 0.5;
  m(0, d - 1) = m(d - 1, 0) = 0.5;
  return DensityMatrix(std::move(m), reg);
}

DensityMatrix ghz(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("ghz needs at least one qubit");
  return ghz(n_qubits == 1 ? QubitRegister::split(1, 0) : QubitRegister::split(1, n_qubits - 1));
}

DensityMatrix depolarize_symmetric(const DensityMatrix& rho, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("depolarize_symmetric: lambda outside [0,1]");
  const Eigen::Index d = rho.dim();
  Matrix m = (1.0 - lambda) * rho.mat();
  m += (lambda / static_cast<double>(d)) * Matrix::Identity(d, d);
  return DensityMatrix(std::move(m), rho.reg());
}

DensityMatrix depolarize_asymmetric(const DensityMatrix& rho, double gamma) {
  if (rho.qubits() != 3)
    throw std::invalid_argument("depolarize_asymmetric expects a 3-qubit state");
  if (gamma < 0.0 || gamma > 4.0 / 3.0)
    throw std::invalid_argument("depolarize_asymmetric: Gamma outside [0,4/3]");

  const Matrix id2 = pauli::identity();
  std::vector<Matrix> kraus = {std::sqrt(1.0 - 0.75 * gamma) * id2,
                               std::sqrt(0.25 * gamma) * pauli::x(),
                               std::sqrt(0.25 * gamma) * pauli::y(),
                               std::sqrt(0.25 * gamma) * pauli::z()};
  Matrix out = Matrix::Zero(8, 8);
  for (const Matrix& ki : kraus)
    for (const Matrix& kj : kraus) {
      const Matrix op = kron(id2, kron(ki, kj));
      out += op * rho.mat() * op.adjoint();
    }
  return DensityMatrix(std::move(out), rho.reg());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const ChannelModel& channel) {
  switch (channel.kind) {
    case ChannelModel::Kind::Ideal:
      return rho;
    case ChannelModel::Kind::SymmetricDepolarize:
      return depolarize_symmetric(rho, channel.strength);
    case ChannelModel::Kind::AsymmetricDepolarize:
      return depolarize_asymmetric(rho, channel.strength);
  }
  throw std::logic_error("unreachable channel kind");
}

}  // namespace cqsrs
