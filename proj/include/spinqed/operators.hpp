// Copyright 2026 The spinqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINQED_OPERATORS_HPP
#define SPINQED_OPERATORS_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinqed {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.141592653589793238462643383279;

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense operator on a tensor-product space.
///
/// `dims` records the subsystem dimensions in kron order (the first entry is
/// the most significant index). The matrix is always square with side equal
/// to the product of `dims`.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(std::vector<int> dims, Mat entries);
  /// Single-subsystem operator; dims = {rows}.
  explicit OperatorMatrix(Mat entries);

  static OperatorMatrix identity(std::vector<int> dims);
  static OperatorMatrix zero(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Mat& matrix() const { return entries_; }

  OperatorMatrix adjoint() const;

  /// ‖A − A†‖_F ≤ tol·max(1, ‖A‖_F).
  bool is_hermitian(double tol = 1e-12) const;
  /// ‖U†U − I‖_F ≤ tol.
  bool is_unitary(double tol = 1e-10) const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(cplx s);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(OperatorMatrix a, cplx s) { return a *= s; }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(double s, OperatorMatrix a) { return a *= cplx(s, 0.0); }
  /// Matrix product; both factors must share dims.
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  std::vector<int> dims_;
  Mat entries_;
};

/// Tensor product; dims are concatenated.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// Truncated bosonic lowering operator with √k on the superdiagonal.
OperatorMatrix annihilation(int n_fock);

/// exp(−i·2π·h·t) for Hermitian h in GHz and t in ns.
///
/// The input is symmetrized before the eigendecomposition. Throws
/// InvalidArgument if h is not Hermitian within 1e-12 relative tolerance.
OperatorMatrix expm_hermitian(const OperatorMatrix& h, double t_ns);

/// Same as expm_hermitian for a raw matrix.
Mat expm_hermitian(const Mat& h, double t_ns);

/// Trace over every subsystem not listed in `keep` (indices into dims).
OperatorMatrix partial_trace(const OperatorMatrix& rho, std::span<const int> keep);

// Pauli matrices and two-qubit helpers. Index order for products is
// 0 = I, 1 = X, 2 = Y, 3 = Z.
Mat2 pauli(int k);
/// σ₁^j ⊗ σ₂^k as a 4×4 matrix.
Mat4 pauli2(int j, int k);
/// exp(−i·angle/2·σ^axis) on one qubit of two (qubit ∈ {1, 2}).
Mat4 local_rotation(int axis, int qubit, double angle);
/// Kronecker product of two single-qubit matrices.
Mat4 kron2(const Mat2& a, const Mat2& b);
/// exp(−i·2π·h·t) for a 4×4 Hermitian matrix.
Mat4 expm_hermitian4(const Mat4& h, double t_ns);

}  // namespace spinqed

#endif  // SPINQED_OPERATORS_HPP
