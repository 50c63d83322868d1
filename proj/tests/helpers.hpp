#pragma once

#include <random>

#include "cqsrs/linalg.hpp"
#include "cqsrs/types.hpp"

namespace cqsrs::test {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  const Matrix m = random_matrix(rng, d, scale);
  return 0.5 * (m + m.adjoint().eval());
}

inline Matrix random_traceless_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  Matrix m = random_hermitian(rng, d);
  m -= (m.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
  return m;
}

// Full-rank random state via Wishart construction.
inline DensityMatrix random_density(std::mt19937_64& rng, const QubitRegister& reg) {
  const Matrix g = random_matrix(rng, reg.dim());
  Matrix m = g * g.adjoint();
  m += 1e-6 * Matrix::Identity(reg.dim(), reg.dim());
  m /= m.trace();
  return DensityMatrix(std::move(m), reg);
}

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index d) {
  const Matrix g = random_matrix(rng, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase convention so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

// Plain 40-term Taylor series, valid for ||a|| <~ 1.
inline Matrix taylor_expm(const Matrix& a, int terms = 40) {
  Matrix acc = Matrix::Identity(a.rows(), a.cols());
  Matrix term = acc;
  for (int k = 1; k <= terms; ++k) {
    term = (term * a).eval() / static_cast<double>(k);
    acc += term;
  }
  return acc;
}

}  // namespace cqsrs::test
