#include "cqsrs/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cqsrs {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  std::vector<Owner> owners = a.reg.owners;
  owners.insert(owners.end(), b.reg.owners.begin(), b.reg.owners.end());
  return OperatorMatrix{kron(a.mat, b.mat), QubitRegister(std::move(owners)),
                        a.hermitian && b.hermitian};
}

Matrix embed(const Matrix& op, int target, int n_qubits) {
  if (op.rows() != 2 || op.cols() != 2)
    throw std::invalid_argument("embed expects a single-qubit operator");
  if (target < 0 || target >= n_qubits) throw std::out_of_range("embed target out of range");
  const Eigen::Index left = Eigen::Index{1} << target;
  const Eigen::Index right = Eigen::Index{1} << (n_qubits - target - 1);
  return kron(kron(Matrix::Identity(left, left), op), Matrix::Identity(right, right));
}

OperatorMatrix embed(const OperatorMatrix& op, int target, const QubitRegister& reg) {
  return OperatorMatrix{embed(op.mat, target, reg.size()), reg, op.hermitian};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::out_of_range("partial_trace: qubit index out of range");
    kept[q] = true;
  }
  std::vector<int> keep_sorted, traced;
  std::vector<Owner> owners;
  for (int q = 0; q < n; ++q) {
    if (kept[q]) {
      keep_sorted.push_back(q);
      owners.push_back(rho.reg().owners[q]);
    } else {
      traced.push_back(q);
    }
  }
  const int nk = static_cast<int>(keep_sorted.size());
  const int nt = n - nk;
  const Eigen::Index dk = Eigen::Index{1} << nk;
  const Eigen::Index dt = Eigen::Index{1} << nt;

  // Full basis index from a kept-subsystem index and a traced-subsystem index.
  auto full_index = [&](Eigen::Index k, Eigen::Index e) {
    Eigen::Index b = 0;
    for (int i = 0; i < nk; ++i)
      b |= static_cast<Eigen::Index>(qubit_bit(k, i, nk)) << (n - 1 - keep_sorted[i]);
    for (int i = 0; i < nt; ++i)
      b |= static_cast<Eigen::Index>(qubit_bit(e, i, nt)) << (n - 1 - traced[i]);
    return b;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc = 0;
      for (Eigen::Index e = 0; e < dt; ++e) acc += rho.mat()(full_index(r, e), full_index(c, e));
      out(r, c) = acc;
    }
  return DensityMatrix(std::move(out), QubitRegister(std::move(owners)));
}

Matrix partial_transpose(const Matrix& m, const std::vector<int>& part, int n_qubits) {
  if (part.empty() || static_cast<int>(part.size()) >= n_qubits)
    throw std::invalid_argument("partial_transpose: part must be a proper nonempty subset");
  Eigen::Index mask = 0;
  for (int q : part) {
    if (q < 0 || q >= n_qubits) throw std::out_of_range("partial_transpose: qubit out of range");
    mask |= Eigen::Index{1} << (n_qubits - 1 - q);
  }
  const Eigen::Index d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const Eigen::Index rr = (r & ~mask) | (c & mask);
      const Eigen::Index cc = (c & ~mask) | (r & mask);
      out(rr, cc) = m(r, c);
    }
  return out;
}

OperatorMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& part) {
  return OperatorMatrix::hermitian_op(partial_transpose(rho.mat(), part, rho.qubits()),
                                      rho.reg());
}

double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("trace_norm expects a square matrix");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return 0.5 * trace_norm(a.mat() - b.mat());
}

namespace {

// (13,13) Pade approximant after scaling by 2^-s; see Higham's expm.
void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  Matrix tmp = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u.noalias() = a * tmp;
  v.noalias() = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm expects a square matrix");
  if (!a.allFinite()) throw std::invalid_argument("expm: non-finite entries");
  const double l1 = a.cwiseAbs().colwise().sum().maxCoeff();
  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  Matrix scaled = a;
  if (l1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(l1 / theta13)));
    scaled *= std::ldexp(1.0, -squarings);
  }
  Matrix u(a.rows(), a.cols()), v(a.rows(), a.cols());
  pade13(scaled, u, v);
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Vector expm_multiply(const Matrix& a, const Vector& v, double t, double max_step) {
  if (a.rows() != a.cols() || a.cols() != v.size())
    throw std::invalid_argument("expm_multiply dimension mismatch");
  if (t == 0.0) return v;
  const double l1 = a.cwiseAbs().colwise().sum().maxCoeff() * std::abs(t);
  int steps = std::max<int>(1, static_cast<int>(std::ceil(l1)));
  if (max_step > 0.0)
    steps = std::max<int>(steps, static_cast<int>(std::ceil(std::abs(t) / max_step)));
  const double h = t / steps;
  Vector acc = v;
  constexpr int kMaxTerms = 40;
  for (int s = 0; s < steps; ++s) {
    Vector term = acc;
    Vector next = acc;
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = (h / k) * (a * term).eval();
      next += term;
      if (term.norm() <= 1e-16 * next.norm()) break;
    }
    acc = next;
  }
  return acc;
}

}  // namespace cqsrs
