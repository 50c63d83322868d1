#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqsrs/types.hpp"

namespace cqsrs {

// N_{X|Y} = (||rho^{T_X}||_1 - 1)/2 for the bipartition `part` vs the rest;
// zero for PPT states.
double negativity(const DensityMatrix& rho, const std::vector<int>& part);

// Geometric mean (cube root of the product) of the negativities across the
// three bipartitions A|B1B2, AB1|B2, AB2|B1 of a 3-qubit state.
double tripartite_negativity(const DensityMatrix& rho);

struct NegativityTrajectory {
  std::vector<double> times;
  std::vector<double> values;
  std::string model_tag;
};

// First time the trajectory drops below `threshold`, linearly interpolated
// between grid points; nullopt if it never does.
std::optional<double> death_time(const NegativityTrajectory& traj, double threshold = 1e-6);

}  // namespace cqsrs
