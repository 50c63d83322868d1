#pragma once

#include <vector>

#include "cqsrs/types.hpp"

namespace cqsrs {

// Kronecker product; (a kron b)(c kron d) = (ac) kron (bd).
Matrix kron(const Matrix& a, const Matrix& b);

// a owns the leading (most significant) qubits of the combined register.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

// Single-qubit operator on `target`, identity on all other qubits.
Matrix embed(const Matrix& op, int target, int n_qubits);
OperatorMatrix embed(const OperatorMatrix& op, int target, const QubitRegister& reg);

// Trace out everything not in `keep`; kept qubits preserve their relative
// order and owner labels.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose the indices of the qubits in `part`. The result is Hermitian for
// Hermitian input but need not be positive.
Matrix partial_transpose(const Matrix& m, const std::vector<int>& part, int n_qubits);
OperatorMatrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& part);

// Sum of singular values.
double trace_norm(const Matrix& m);

// (1/2) || a - b ||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Matrix exponential, Pade scaling-and-squaring.
Matrix expm(const Matrix& a);

// exp(t*A) v without forming the exponential: scaled Taylor applied to the
// vector. `max_step` caps the substep length in units of t (<= 0 disables).
Vector expm_multiply(const Matrix& a, const Vector& v, double t = 1.0, double max_step = 0.0);

}  // namespace cqsrs
