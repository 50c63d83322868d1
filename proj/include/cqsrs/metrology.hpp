#pragma once

#include <optional>
#include <vector>

#include "cqsrs/types.hpp"

namespace cqsrs {

// Positive operator-valued measure; elements must be PSD and sum to identity.
struct Povm {
  std::vector<Matrix> elements;
  // Optional per-outcome labels, e.g. the +/-1 eigenvalue tuple of a product
  // measurement. Empty or one entry per element.
  std::vector<std::vector<int>> labels;

  static Povm validated(std::vector<Matrix> elements, std::vector<std::vector<int>> labels = {},
                        double psd_floor = -1e-10, double completeness_tol = 1e-10);
};

// 2^n rank-1 projectors onto tensor products of |+> and |->; labels carry the
// corresponding +/-1 tuples.
Povm sigma_x_product_povm(int n_qubits);

// Symmetric logarithmic derivative in the eigenbasis of rho; eigenpairs with
// lambda_i + lambda_j below `eig_cutoff` are skipped.
Matrix sld(const DensityMatrix& rho, const Matrix& drho, double eig_cutoff = 1e-10);

// Tr[rho L^2].
double qfi(const DensityMatrix& rho, const Matrix& drho);

// sum_x (Tr[M_x drho])^2 / Tr[M_x rho]; outcomes with probability < 1e-12
// are skipped.
double cfi(const DensityMatrix& rho, const Matrix& drho, const Povm& povm);

// 1/sqrt(nu * fisher); nullopt when fisher = 0 (unbounded).
std::optional<double> qcrb(double fisher, double repetitions);

// One row of a Fisher-information sweep.
struct FisherRecord {
  double time = 0.0;
  double uc_qfi = 0.0;
  double c_qfi = 0.0;
  double uc_cfi = 0.0;
  double c_cfi = 0.0;
};

}  // namespace cqsrs
