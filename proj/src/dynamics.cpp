#include "cqsrs/dynamics.hpp"

#include <cmath>

#include "cqsrs/linalg.hpp"

namespace cqsrs {

namespace {

Eigen::Map<const Vector> vec_view(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

}  // namespace

Hamiltonian encoding_hamiltonian(double omega, const QubitRegister& reg,
                                 const std::vector<int>& sensing) {
  if (sensing.empty()) throw std::invalid_argument("encoding needs a nonempty sensing set");
  const int n = reg.size();
  const Eigen::Index d = reg.dim();
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    double e = 0.0;
    for (int q : sensing) {
      if (q < 0 || q >= n) throw std::out_of_range("sensing qubit out of range");
      e += qubit_bit(b, q, n) ? -1.0 : 1.0;
    }
    h(b, b) = 0.5 * omega * e;
  }
  return Hamiltonian{OperatorMatrix::hermitian_op(std::move(h), reg), omega};
}

std::vector<std::pair<Matrix, double>> collapse_operators(const NoiseModel& noise,
                                                          const QubitRegister& reg,
                                                          const std::vector<int>& targets) {
  std::vector<std::pair<Matrix, double>> out;
  if (noise.kind == NoiseModel::Kind::None) return out;
  for (int q : targets) {
    switch (noise.kind) {
      case NoiseModel::Kind::Gpd: {
        const Matrix axis = std::sin(noise.theta) * std::cos(noise.phi) * pauli::x() +
                            std::sin(noise.theta) * std::sin(noise.phi) * pauli::y() +
                            std::cos(noise.theta) * pauli::z();
        const double rate = noise.gpd_tripled ? 3.0 * noise.rate : noise.rate;
        out.emplace_back(embed(axis, q, reg.size()), rate);
        break;
      }
      case NoiseModel::Kind::Ppd:
        out.emplace_back(embed(pauli::z(), q, reg.size()), noise.rate);
        break;
      case NoiseModel::Kind::Dp:
        out.emplace_back(embed(pauli::x(), q, reg.size()), noise.rate);
        out.emplace_back(embed(pauli::y(), q, reg.size()), noise.rate);
        out.emplace_back(embed(pauli::z(), q, reg.size()), noise.rate);
        break;
      case NoiseModel::Kind::None:
        break;
    }
  }
  return out;
}

Matrix liouvillian(const Matrix& hamiltonian,
                   const std::vector<std::pair<Matrix, double>>& collapse) {
  const Eigen::Index d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  // Column stacking: vec(A rho B) = (B^T kron A) vec(rho).
  Matrix sup = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& [op, rate] : collapse) {
    const Matrix opdag_op = op.adjoint() * op;
    sup += rate * (kron(op.conjugate(), op) - 0.5 * kron(id, opdag_op) -
                   0.5 * kron(opdag_op.transpose(), id));
  }
  return sup;
}

Lindbladian build_lindbladian(const Hamiltonian& h, const NoiseModel& noise,
                              const Matrix* control) {
  return build_lindbladian(h, noise, h.op.reg.bob_qubits(), control);
}

Lindbladian build_lindbladian(const Hamiltonian& h, const NoiseModel& noise,
                              const std::vector<int>& noise_targets, const Matrix* control) {
  Matrix h_total = h.op.mat;
  if (control != nullptr) {
    if (control->rows() != h_total.rows() || control->cols() != h_total.cols())
      throw std::invalid_argument("control term dimension mismatch");
    h_total += *control;
  }
  return Lindbladian{liouvillian(h_total, collapse_operators(noise, h.op.reg, noise_targets)),
                     h.op.reg};
}

double trace_preservation_defect(const Lindbladian& gen) {
  const Eigen::Index d = gen.reg.dim();
  const Matrix id = Matrix::Identity(d, d);
  return (vec_view(id).adjoint() * gen.sup).cwiseAbs().maxCoeff();
}

double choi_min_eigenvalue(const Lindbladian& gen, double dt) {
  const Eigen::Index d = gen.reg.dim();
  const Matrix step = expm(dt * gen.sup);
  // Choi C[(k,i),(l,j)] = <i| E(|k><l|) |j> = S[j*d+i, l*d+k].
  Matrix choi(d * d, d * d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index l = 0; l < d; ++l)
        for (Eigen::Index j = 0; j < d; ++j)
          choi(k * d + i, l * d + j) = step(j * d + i, l * d + k);
  choi = 0.5 * (choi + choi.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix propagate(const DensityMatrix& rho0, std::span<const Segment> segments) {
  const Eigen::Index d = rho0.dim();
  Vector v = vec_view(rho0.mat());
  for (const Segment& seg : segments) {
    if (seg.dt <= 0.0) throw std::invalid_argument("propagate: segment duration must be positive");
    if (seg.generator.sup.rows() != d * d)
      throw std::invalid_argument("propagate: generator dimension mismatch");
    v = expm_multiply(seg.generator.sup, v, seg.dt);
  }
  return DensityMatrix(unvec(v, d), rho0.reg(), kPropagatedTolerance);
}

EvolvedPair propagate_with_derivative(const DensityMatrix& rho0, double omega,
                                      const NoiseModel& noise,
                                      const std::vector<Matrix>& control_terms,
                                      double total_time, double dt, double delta_omega) {
  if (delta_omega < 1e-7)
    throw std::invalid_argument("delta_omega below 1e-7 risks subtractive cancellation");
  const std::vector<int> sensing = rho0.reg().bob_qubits();

  auto evolve = [&](double w) {
    const Hamiltonian h = encoding_hamiltonian(w, rho0.reg(), sensing);
    std::vector<Segment> segs;
    if (control_terms.empty()) {
      segs.push_back({build_lindbladian(h, noise), total_time});
    } else {
      const double seg_dt = total_time / static_cast<double>(control_terms.size());
      for (const Matrix& hc : control_terms)
        segs.push_back({build_lindbladian(h, noise, &hc), seg_dt});
    }
    (void)dt;  // segments are integrated exactly; dt is the grid the segments came from
    return propagate(rho0, segs);
  };

  DensityMatrix center = evolve(omega);
  const DensityMatrix plus = evolve(omega + delta_omega);
  const DensityMatrix minus = evolve(omega - delta_omega);
  Matrix drho = (plus.mat() - minus.mat()) / (2.0 * delta_omega);
  drho = 0.5 * (drho + drho.adjoint().eval());
  drho -= (drho.trace() / static_cast<double>(drho.rows())) * Matrix::Identity(drho.rows(), drho.cols());
  return EvolvedPair{std::move(center), std::move(drho)};
}

}  // namespace cqsrs
