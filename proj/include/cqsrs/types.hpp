#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqsrs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Which party holds a qubit. Qubit 0 is the most significant bit of a
// basis index, i.e. basis state b labels |q0 q1 ... q_{n-1}> with
// q0 = bit (n-1) of b.
enum class Owner { Alice, Bob };

struct QubitRegister {
  std::vector<Owner> owners;

  QubitRegister() = default;
  explicit QubitRegister(std::vector<Owner> o) : owners(std::move(o)) {
    if (owners.empty()) throw std::invalid_argument("register needs at least one qubit");
  }

  // Alice's ancilla block first, then Bob's sensing block.
  static QubitRegister split(int n_alice, int n_sensing) {
    if (n_alice < 0 || n_sensing < 0 || n_alice + n_sensing < 1)
      throw std::invalid_argument("invalid register split");
    std::vector<Owner> o;
    o.insert(o.end(), n_alice, Owner::Alice);
    o.insert(o.end(), n_sensing, Owner::Bob);
    return QubitRegister(std::move(o));
  }

  int size() const { return static_cast<int>(owners.size()); }
  Eigen::Index dim() const { return Eigen::Index{1} << size(); }

  std::vector<int> alice_qubits() const { return qubits_of(Owner::Alice); }
  std::vector<int> bob_qubits() const { return qubits_of(Owner::Bob); }

  bool operator==(const QubitRegister&) const = default;

 private:
  std::vector<int> qubits_of(Owner who) const {
    std::vector<int> out;
    for (int q = 0; q < size(); ++q)
      if (owners[q] == who) out.push_back(q);
    return out;
  }
};

// Bit of qubit `q` in basis index `b` for an n-qubit register.
inline int qubit_bit(Eigen::Index b, int q, int n) {
  return static_cast<int>((b >> (n - 1 - q)) & 1);
}

struct StateTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double eigen_floor = -1e-9;
};

// Looser floors for states coming out of long piecewise products.
inline constexpr StateTolerance kPropagatedTolerance{1e-12, 1e-9, -1e-8};

struct StateDiagnostics {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
};

// Hermitian, unit-trace, (numerically) positive state over a labeled
// register. Construction re-hermitizes as (m + m^dag)/2 after checking the
// defect against tolerance; trace or positivity violations throw.
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, QubitRegister reg, const StateTolerance& tol = {})
      : reg_(std::move(reg)) {
    if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
    if (m.rows() != reg_.dim())
      throw std::invalid_argument("density matrix dimension does not match register");
    diag_.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (diag_.hermiticity_defect > tol.hermiticity)
      throw std::invalid_argument("hermiticity defect " +
                                  std::to_string(diag_.hermiticity_defect) + " above tolerance");
    mat_ = 0.5 * (m + m.adjoint().eval());
    diag_.trace_defect = std::abs(mat_.trace().real() - 1.0) + std::abs(mat_.trace().imag());
    if (diag_.trace_defect > tol.trace)
      throw std::invalid_argument("trace defect " + std::to_string(diag_.trace_defect) +
                                  " above tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    diag_.min_eigenvalue = es.eigenvalues().minCoeff();
    if (diag_.min_eigenvalue < tol.eigen_floor)
      throw std::invalid_argument("minimum eigenvalue " + std::to_string(diag_.min_eigenvalue) +
                                  " below floor");
  }

  const Matrix& mat() const { return mat_; }
  const QubitRegister& reg() const { return reg_; }
  int qubits() const { return reg_.size(); }
  Eigen::Index dim() const { return reg_.dim(); }
  const StateDiagnostics& diagnostics() const { return diag_; }

  double purity() const { return (mat_ * mat_).trace().real(); }

 private:
  Matrix mat_;
  QubitRegister reg_;
  StateDiagnostics diag_;
};

// A square operator over a register; Hermiticity is validated only when
// claimed through the hermitian() factory.
struct OperatorMatrix {
  Matrix mat;
  QubitRegister reg;
  bool hermitian = false;

  static OperatorMatrix general(Matrix m, QubitRegister r) {
    check_dims(m, r);
    return OperatorMatrix{std::move(m), std::move(r), false};
  }

  static OperatorMatrix hermitian_op(Matrix m, QubitRegister r, double tol = 1e-12) {
    check_dims(m, r);
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol)
      throw std::invalid_argument("operator claimed Hermitian but defect is " +
                                  std::to_string(defect));
    return OperatorMatrix{std::move(m), std::move(r), true};
  }

 private:
  static void check_dims(const Matrix& m, const QubitRegister& r) {
    if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
    if (m.rows() != r.dim()) throw std::invalid_argument("operator dimension mismatch");
  }
};

namespace pauli {

inline Matrix identity() { return Matrix::Identity(2, 2); }

inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

}  // namespace cqsrs
