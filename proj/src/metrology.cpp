#include "cqsrs/metrology.hpp"

#include <cmath>

#include "cqsrs/linalg.hpp"

namespace cqsrs {

Povm Povm::validated(std::vector<Matrix> elements, std::vector<std::vector<int>> labels,
                     double psd_floor, double completeness_tol) {
  if (elements.empty()) throw std::invalid_argument("POVM needs at least one element");
  if (!labels.empty() && labels.size() != elements.size())
    throw std::invalid_argument("POVM label count mismatch");
  const Eigen::Index d = elements.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& m : elements) {
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("POVM element dimension mismatch");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("POVM element not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < psd_floor)
      throw std::invalid_argument("POVM element not positive semidefinite");
    sum += m;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > completeness_tol)
    throw std::invalid_argument("POVM elements do not sum to identity");
  return Povm{std::move(elements), std::move(labels)};
}

Povm sigma_x_product_povm(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("POVM needs at least one qubit");
  Vector plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const Eigen::Index count = Eigen::Index{1} << n_qubits;
  std::vector<Matrix> elements;
  std::vector<std::vector<int>> labels;
  for (Eigen::Index x = 0; x < count; ++x) {
    Vector ket = Vector::Ones(1);
    std::vector<int> label(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
      const bool is_minus = qubit_bit(x, q, n_qubits) != 0;
      label[q] = is_minus ? -1 : 1;
      Vector next(ket.size() * 2);
      const Vector& factor = is_minus ? minus : plus;
      for (Eigen::Index i = 0; i < ket.size(); ++i) {
        next(2 * i) = ket(i) * factor(0);
        next(2 * i + 1) = ket(i) * factor(1);
      }
      ket = std::move(next);
    }
    elements.push_back(ket * ket.adjoint());
    labels.push_back(std::move(label));
  }
  return Povm::validated(std::move(elements), std::move(labels));
}

Matrix sld(const DensityMatrix& rho, const Matrix& drho, double eig_cutoff) {
  if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("sld: drho must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat());
  const auto& lambda = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  const Matrix d_eig = v.adjoint() * drho * v;
  const Eigen::Index d = rho.dim();
  Matrix l_eig = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double denom = lambda(i) + lambda(j);
      if (denom > eig_cutoff) l_eig(i, j) = 2.0 * d_eig(i, j) / denom;
    }
  Matrix l = v * l_eig * v.adjoint();
  return 0.5 * (l + l.adjoint().eval());
}

double qfi(const DensityMatrix& rho, const Matrix& drho) {
  const Matrix l = sld(rho, drho);
  const double value = (rho.mat() * l * l).trace().real();
  return value < 0.0 ? 0.0 : value;
}

double cfi(const DensityMatrix& rho, const Matrix& drho, const Povm& povm) {
  double acc = 0.0;
  for (const Matrix& m : povm.elements) {
    const double p = (m * rho.mat()).trace().real();
    if (p < 1e-12) continue;
    const double dp = (m * drho).trace().real();
    acc += dp * dp / p;
  }
  return acc;
}

std::optional<double> qcrb(double fisher, double repetitions) {
  if (fisher < 0.0) throw std::invalid_argument("qcrb: Fisher information must be nonnegative");
  if (repetitions < 1.0) throw std::invalid_argument("qcrb: need at least one repetition");
  if (fisher == 0.0) return std::nullopt;
  return 1.0 / std::sqrt(repetitions * fisher);
}

}  // namespace cqsrs
