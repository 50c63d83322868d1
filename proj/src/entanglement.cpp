#include "cqsrs/entanglement.hpp"

#include <cmath>

#include "cqsrs/linalg.hpp"

namespace cqsrs {

double negativity(const DensityMatrix& rho, const std::vector<int>& part) {
  const Matrix pt = partial_transpose(rho.mat(), part, rho.qubits());
  const double n = 0.5 * (trace_norm(pt) - 1.0);
  return n < 0.0 ? 0.0 : n;
}

double tripartite_negativity(const DensityMatrix& rho) {
  if (rho.qubits() != 3)
    throw std::invalid_argument("tripartite negativity expects a 3-qubit state");
  const double n_a = negativity(rho, {0});
  const double n_b2 = negativity(rho, {2});  // AB1 | B2
  const double n_b1 = negativity(rho, {1});  // AB2 | B1
  return std::cbrt(n_a * n_b2 * n_b1);
}

std::optional<double> death_time(const NegativityTrajectory& traj, double threshold) {
  if (traj.times.empty() || traj.times.size() != traj.values.size())
    throw std::invalid_argument("death_time: empty or inconsistent trajectory");
  for (std::size_t i = 0; i < traj.values.size(); ++i) {
    if (traj.values[i] < threshold) {
      if (i == 0) return traj.times[0];
      const double t0 = traj.times[i - 1], t1 = traj.times[i];
      const double v0 = traj.values[i - 1], v1 = traj.values[i];
      if (v0 <= v1) return t1;
      return t0 + (t1 - t0) * (v0 - threshold) / (v0 - v1);
    }
  }
  return std::nullopt;
}

}  // namespace cqsrs
