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

#include "spinqed/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace spinqed {

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void require_same_dims(const OperatorMatrix& a, const OperatorMatrix& b, const char* op) {
  if (a.dims() != b.dims()) {
    throw InvalidArgument(fmt::format("{}: dims mismatch [{}] vs [{}]", op,
                                      fmt::join(a.dims(), ","), fmt::join(b.dims(), ",")));
  }
}

}  // namespace

OperatorMatrix::OperatorMatrix(std::vector<int> dims, Mat entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
  for (int d : dims_) {
    if (d < 1) throw InvalidArgument("OperatorMatrix: subsystem dimension must be positive");
  }
  const int n = product(dims_);
  if (entries_.rows() != n || entries_.cols() != n) {
    throw InvalidArgument(fmt::format("OperatorMatrix: matrix is {}x{} but dims [{}] give {}",
                                      entries_.rows(), entries_.cols(), fmt::join(dims_, ","), n));
  }
}

OperatorMatrix::OperatorMatrix(Mat entries) {
  dims_ = {static_cast<int>(entries.rows())};
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw InvalidArgument(fmt::format("OperatorMatrix: matrix is {}x{}, need square", entries.rows(), entries.cols()));
  }
  entries_ = std::move(entries);
}

OperatorMatrix OperatorMatrix::identity(std::vector<int> dims) {
  const int n = product(dims);
  return OperatorMatrix(std::move(dims), Mat::Identity(n, n));
}

OperatorMatrix OperatorMatrix::zero(std::vector<int> dims) {
  const int n = product(dims);
  return OperatorMatrix(std::move(dims), Mat::Zero(n, n));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(dims_, entries_.adjoint()); }

bool OperatorMatrix::is_hermitian(double tol) const {
  const double norm = entries_.norm();
  return (entries_ - entries_.adjoint()).norm() <= tol * std::max(1.0, norm);
}

bool OperatorMatrix::is_unitary(double tol) const {
  return (entries_.adjoint() * entries_ - Mat::Identity(dim(), dim())).norm() <= tol;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_dims(*this, rhs, "operator+");
  entries_ += rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_dims(*this, rhs, "operator-");
  entries_ -= rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_dims(a, b, "operator*");
  return OperatorMatrix(a.dims(), a.matrix() * b.matrix());
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  const Mat& x = a.matrix();
  const Mat& y = b.matrix();
  Mat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return OperatorMatrix(std::move(dims), std::move(out));
}

OperatorMatrix annihilation(int n_fock) {
  if (n_fock < 2) {
    throw InvalidArgument(fmt::format("annihilation: n_fock must be >= 2 (got {})", n_fock));
  }
  Mat a = Mat::Zero(n_fock, n_fock);
  for (int k = 1; k < n_fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return OperatorMatrix(std::move(a));
}

Mat expm_hermitian(const Mat& h, double t_ns) {
  const double norm = h.norm();
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, norm)) {
    throw InvalidArgument("expm_hermitian: generator is not Hermitian");
  }
  const Mat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("expm_hermitian: eigendecomposition failed");
  const Eigen::VectorXd& w = eig.eigenvalues();
  Vec phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::polar(1.0, -kTwoPi * w(k) * t_ns);
  const Mat& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

OperatorMatrix expm_hermitian(const OperatorMatrix& h, double t_ns) {
  return OperatorMatrix(h.dims(), expm_hermitian(h.matrix(), t_ns));
}

OperatorMatrix partial_trace(const OperatorMatrix& rho, std::span<const int> keep) {
  const auto& dims = rho.dims();
  const int m = static_cast<int>(dims.size());
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  std::vector<bool> kept(m, false);
  for (int k : keep) {
    if (k < 0 || k >= m) throw InvalidArgument(fmt::format("partial_trace: invalid subsystem index {}", k));
    if (kept[k]) throw InvalidArgument(fmt::format("partial_trace: subsystem {} listed twice", k));
    kept[k] = true;
  }

  std::vector<int> out_dims;
  for (int s = 0; s < m; ++s) {
    if (kept[s]) out_dims.push_back(dims[s]);
  }

  // Split every full index into (kept, traced) linear indices.
  const int n = rho.dim();
  std::vector<int> kept_index(n), traced_index(n);
  for (int i = 0; i < n; ++i) {
    int rem = i;
    int k_lin = 0, k_stride = 1, t_lin = 0, t_stride = 1;
    for (int s = m - 1; s >= 0; --s) {
      const int digit = rem % dims[s];
      rem /= dims[s];
      if (kept[s]) {
        k_lin += digit * k_stride;
        k_stride *= dims[s];
      } else {
        t_lin += digit * t_stride;
        t_stride *= dims[s];
      }
    }
    kept_index[i] = k_lin;
    traced_index[i] = t_lin;
  }

  const int n_out = product(out_dims);
  Mat out = Mat::Zero(n_out, n_out);
  const Mat& r = rho.matrix();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += r(i, j);
    }
  }
  return OperatorMatrix(std::move(out_dims), std::move(out));
}

Mat2 pauli(int k) {
  Mat2 p;
  switch (k) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw InvalidArgument(fmt::format("pauli: index {} out of range", k));
  }
  return p;
}

Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

Mat4 pauli2(int j, int k) { return kron2(pauli(j), pauli(k)); }

Mat4 local_rotation(int axis, int qubit, double angle) {
  if (axis < 1 || axis > 3) throw InvalidArgument("local_rotation: axis must be 1, 2 or 3");
  const Mat2 r = std::cos(angle / 2) * Mat2::Identity() - cplx(0, 1) * std::sin(angle / 2) * pauli(axis);
  if (qubit == 1) return kron2(r, Mat2::Identity());
  if (qubit == 2) return kron2(Mat2::Identity(), r);
  throw InvalidArgument("local_rotation: qubit must be 1 or 2");
}

Mat4 expm_hermitian4(const Mat4& h, double t_ns) {
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm())) {
    throw InvalidArgument("expm_hermitian: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Mat4> eig(0.5 * (h + h.adjoint()));
  Eigen::Vector4cd phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -kTwoPi * eig.eigenvalues()(k) * t_ns);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace spinqed
