#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cqsrs/linalg.hpp"
#include "cqsrs/states.hpp"
#include "helpers.hpp"

using namespace cqsrs;

namespace {

// Independent oracle: the sixteen-term Kraus summation spelled out with
// embedded Paulis, noising the two transmitted qubits.
Matrix kraus_oracle(const Matrix& rho, double gamma) {
  const Matrix paulis[4] = {pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  const double weights[4] = {1.0 - 0.75 * gamma, 0.25 * gamma, 0.25 * gamma, 0.25 * gamma};
  Matrix out = Matrix::Zero(8, 8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Matrix op = std::sqrt(weights[i]) * std::sqrt(weights[j]) *
                        (embed(paulis[i], 1, 3) * embed(paulis[j], 2, 3));
      out += op * rho * op.adjoint();
    }
  return out;
}

// Closed-form elements of the asymmetrically depolarized GHZ state, written
// against the internal ordering (Alice first). The four diagonal families
// and the corner pin every nonzero entry.
Matrix closed_form_adp_ghz(double gamma) {
  const double g = gamma;
  const double abs_term = std::abs((4.0 - 3.0 * g) * g);
  const double v_corner_diag = (abs_term + (5.0 * g - 12.0) * g + 8.0) / 16.0;
  const double v_inner = g * g / 8.0;
  const double v_mixed = (abs_term + g * g) / 16.0;
  const double corner =
      (-std::abs(4.0 - 3.0 * g) * std::abs(g) + g * (5.0 * g - 12.0) + 8.0) / 16.0;
  Matrix m = Matrix::Zero(8, 8);
  m(0, 0) = m(7, 7) = v_corner_diag;
  m(3, 3) = m(4, 4) = v_inner;
  m(1, 1) = m(2, 2) = m(5, 5) = m(6, 6) = v_mixed;
  m(0, 7) = m(7, 0) = corner;
  return m;
}

}  // namespace

TEST_CASE("ghz states") {
  const DensityMatrix g3 = ghz(3);
  Matrix expected = Matrix::Zero(8, 8);
  expected(0, 0) = expected(7, 7) = expected(0, 7) = expected(7, 0) = 0.5;
  CHECK((g3.mat() - expected).cwiseAbs().maxCoeff() == 0.0);

  const DensityMatrix g1 = ghz(1);
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((g1.mat() - plus).cwiseAbs().maxCoeff() == 0.0);

  for (int n = 1; n <= 5; ++n) CHECK(ghz(n).purity() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(ghz(0), std::invalid_argument);
}

TEST_CASE("symmetric depolarization") {
  const DensityMatrix g3 = ghz(3);
  CHECK((depolarize_symmetric(g3, 0.0).mat() - g3.mat()).cwiseAbs().maxCoeff() == 0.0);

  const DensityMatrix mixed = depolarize_symmetric(g3, 1.0);
  CHECK((mixed.mat() - Matrix::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix half = depolarize_symmetric(g3, 0.5);
  CHECK(half.mat()(0, 7).real() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(half.mat()(0, 0).real() == doctest::Approx(0.25 + 1.0 / 16.0).epsilon(1e-14));

  CHECK_THROWS_AS(depolarize_symmetric(g3, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(depolarize_symmetric(g3, 1.1), std::invalid_argument);
}

TEST_CASE("symmetric depolarization composes like a semigroup") {
  std::mt19937_64 rng(21);
  const DensityMatrix rho = test::random_density(rng, QubitRegister::split(1, 2));
  for (auto [l1, l2] : {std::pair{0.1, 0.3}, std::pair{0.5, 0.5}, std::pair{0.0, 0.7}}) {
    const DensityMatrix twice = depolarize_symmetric(depolarize_symmetric(rho, l1), l2);
    const DensityMatrix once = depolarize_symmetric(rho, 1.0 - (1.0 - l1) * (1.0 - l2));
    CHECK((twice.mat() - once.mat()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("asymmetric depolarization matches the closed forms") {
  const DensityMatrix g3 = ghz(3);

  CHECK((depolarize_asymmetric(g3, 0.0).mat() - g3.mat()).cwiseAbs().maxCoeff() < 1e-15);

  const DensityMatrix noisy = depolarize_asymmetric(g3, 0.06);
  CHECK(noisy.mat()(0, 0).real() == doctest::Approx(0.47045).epsilon(1e-9));
  CHECK(noisy.mat()(0, 7).real() == doctest::Approx(0.44180).epsilon(1e-9));
  CHECK(noisy.mat()(3, 3).real() == doctest::Approx(0.06 * 0.06 / 8.0).epsilon(1e-12));
  CHECK(noisy.mat()(4, 4).real() == doctest::Approx(0.06 * 0.06 / 8.0).epsilon(1e-12));

  for (double gamma : {0.0, 0.06, 0.5, 1.0}) {
    const DensityMatrix out = depolarize_asymmetric(g3, gamma);
    CHECK((out.mat() - closed_form_adp_ghz(gamma)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((out.mat() - kraus_oracle(g3.mat(), gamma)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK_THROWS_AS(depolarize_asymmetric(g3, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(depolarize_asymmetric(g3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(depolarize_asymmetric(ghz(2), 0.1), std::invalid_argument);
}

TEST_CASE("asymmetric depolarization agrees with the Kraus oracle on random states") {
  std::mt19937_64 rng(22);
  for (double gamma : {0.06, 0.5, 1.0, 4.0 / 3.0}) {
    const DensityMatrix rho = test::random_density(rng, QubitRegister::split(1, 2));
    const DensityMatrix out = depolarize_asymmetric(rho, gamma);
    CHECK((out.mat() - kraus_oracle(rho.mat(), gamma)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("channels preserve trace and positivity") {
  const DensityMatrix g3 = ghz(3);
  for (double x : {0.0, 0.06, 0.3, 0.9}) {
    for (const DensityMatrix& out :
         {depolarize_symmetric(g3, x), depolarize_asymmetric(g3, x)}) {
      CHECK(std::abs(out.mat().trace().real() - 1.0) <= 1e-12);
      CHECK(out.diagnostics().min_eigenvalue >= -1e-9);
    }
  }
}

TEST_CASE("apply_channel dispatch") {
  const DensityMatrix g3 = ghz(3);
  CHECK((apply_channel(g3, ChannelModel::ideal()).mat() - g3.mat()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((apply_channel(g3, ChannelModel::symmetric(0.2)).mat() -
         depolarize_symmetric(g3, 0.2).mat())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((apply_channel(g3, ChannelModel::asymmetric(0.06)).mat() -
         depolarize_asymmetric(g3, 0.06).mat())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK_THROWS_AS(ChannelModel::symmetric(2.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel::asymmetric(-1.0), std::invalid_argument);
}
