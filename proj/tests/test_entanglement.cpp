#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqsrs/dynamics.hpp"
#include "cqsrs/entanglement.hpp"
#include "cqsrs/linalg.hpp"
#include "cqsrs/states.hpp"
#include "helpers.hpp"

using namespace cqsrs;

TEST_CASE("GHZ3 negativity anchors") {
  const DensityMatrix g3 = ghz(3);
  CHECK(negativity(g3, {0}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(negativity(g3, {1}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(negativity(g3, {2}) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(tripartite_negativity(g3) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("separable states have zero negativity") {
  const QubitRegister reg = QubitRegister::split(1, 2);
  const DensityMatrix mixed(Matrix::Identity(8, 8) / 8.0, reg);
  CHECK(negativity(mixed, {0}) == 0.0);
  CHECK(tripartite_negativity(mixed) == 0.0);

  std::mt19937_64 rng(41);
  const DensityMatrix a = test::random_density(rng, QubitRegister::split(1, 0));
  const DensityMatrix bc = test::random_density(rng, QubitRegister::split(0, 2));
  const DensityMatrix prod(kron(a.mat(), bc.mat()), reg);
  CHECK(negativity(prod, {0}) <= 1e-9);
  CHECK(!std::isnan(tripartite_negativity(prod)));

  // Fully depolarized channel output.
  CHECK(tripartite_negativity(depolarize_symmetric(ghz(3), 1.0)) == 0.0);
}

TEST_CASE("negativity is invariant under local unitaries") {
  std::mt19937_64 rng(42);
  const DensityMatrix g3 = depolarize_symmetric(ghz(3), 0.2);
  const double base = negativity(g3, {0});
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix u = kron(test::random_unitary(rng, 2), test::random_unitary(rng, 4));
    const DensityMatrix rotated(u * g3.mat() * u.adjoint(), g3.reg());
    CHECK(negativity(rotated, {0}) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("negativity argument validation") {
  const DensityMatrix g3 = ghz(3);
  CHECK_THROWS_AS(negativity(g3, {}), std::invalid_argument);
  CHECK_THROWS_AS(negativity(g3, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tripartite_negativity(ghz(2)), std::invalid_argument);
}

TEST_CASE("death_time detection and interpolation") {
  NegativityTrajectory flat{{0, 1, 2, 3}, {0.5, 0.5, 0.5, 0.5}, "flat"};
  CHECK(!death_time(flat).has_value());

  // Linear descent 0.5 -> 0 between t=2 and t=3 crosses 0.25 at t=2.5.
  NegativityTrajectory decay{{0, 1, 2, 3}, {0.5, 0.5, 0.5, 0.0}, "decay"};
  CHECK(death_time(decay, 0.25).value() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(death_time(decay).value() == doctest::Approx(3.0).epsilon(1e-6));

  NegativityTrajectory dead_start{{0, 1}, {0.0, 0.0}, "dead"};
  CHECK(death_time(dead_start).value() == 0.0);

  CHECK_THROWS_AS(death_time(NegativityTrajectory{}), std::invalid_argument);
}

TEST_CASE("uncontrolled noise trajectories never increase negativity") {
  const DensityMatrix g3 = ghz(3);
  for (const NoiseModel& noise :
       {NoiseModel::gpd(0.05, 0.7853981633974483, 0.0), NoiseModel::ppd(0.025),
        NoiseModel::dp(0.02)}) {
    double previous = tripartite_negativity(g3);
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
      const Hamiltonian h = encoding_hamiltonian(1.0, g3.reg(), {1, 2});
      const std::vector<Segment> segs = {{build_lindbladian(h, noise), t}};
      const double value = tripartite_negativity(propagate(g3, segs));
      CHECK(value <= previous + 1e-9);
      previous = value;
    }
  }
}

TEST_CASE("depolarizing evolution kills GHZ entanglement at ln5/(8 gamma)") {
  // The B1 (or B2) cut loses its negative eigenvalue when the per-qubit
  // shrink factor reaches 1/sqrt(5).
  const double gamma = 0.02;
  const double death = std::log(5.0) / (8.0 * gamma);
  const DensityMatrix g3 = ghz(3);
  const Hamiltonian h = encoding_hamiltonian(1.0, g3.reg(), {1, 2});
  const Lindbladian gen = build_lindbladian(h, NoiseModel::dp(gamma));
  const std::vector<Segment> before = {{gen, death - 0.2}};
  const std::vector<Segment> after = {{gen, death + 0.2}};
  CHECK(tripartite_negativity(propagate(g3, before)) > 1e-4);
  CHECK(tripartite_negativity(propagate(g3, after)) == 0.0);
}
