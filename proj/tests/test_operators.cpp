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

#include <doctest.h>

#include <vector>

#include "spinqed/operators.hpp"
#include "test_util.hpp"

using namespace spinqed;
using spinqed::testing::random_density;
using spinqed::testing::random_hermitian;
using spinqed::testing::random_unitary;

TEST_CASE("kron follows the tensor product definition") {
  const OperatorMatrix sx(pauli(1)), id(Mat(Mat2::Identity())), sz(pauli(3));
  const Mat a = kron(sx, id).matrix();
  CHECK(a.block(0, 0, 2, 2).norm() == 0.0);
  CHECK((a.block(0, 2, 2, 2) - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((a.block(2, 0, 2, 2) - Mat::Identity(2, 2)).norm() == 0.0);

  Eigen::Vector4cd diag(1, -1, 1, -1);
  CHECK((kron(id, sz).matrix() - Mat(diag.asDiagonal())).norm() == 0.0);

  const OperatorMatrix big = kron(sx, annihilation(10));
  CHECK(big.dims() == std::vector<int>{2, 10});
  CHECK(big.dim() == 20);
}

TEST_CASE("ladder operator") {
  const Mat a = annihilation(3).matrix();
  CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(a.sum() - (1.0 + std::sqrt(2.0))) < 1e-15);
  const Mat n = a.adjoint() * a;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(n(k, k) - double(k)) < 1e-14);
  CHECK((n - Mat(n.diagonal().asDiagonal())).norm() < 1e-14);

  const Mat b = annihilation(6).matrix();
  const Mat comm = b * b.adjoint() - b.adjoint() * b;
  CHECK((comm.topLeftCorner(5, 5) - Mat::Identity(5, 5)).norm() < 1e-13);
  CHECK_THROWS_AS(annihilation(1), InvalidArgument);
}

TEST_CASE("expm_hermitian closed forms") {
  const double w = 0.37, t = 1.9;
  const Mat u = expm_hermitian(Mat(0.5 * w * pauli(3)), t);
  CHECK(std::abs(u(0, 0) - std::exp(cplx(0, -kPi * w * t))) < 1e-13);
  CHECK(std::abs(u(1, 1) - std::exp(cplx(0, kPi * w * t))) < 1e-13);
  CHECK(std::abs(u(0, 1)) < 1e-14);

  CHECK((expm_hermitian(Mat(Mat::Zero(3, 3)), 5.0) - Mat::Identity(3, 3)).norm() < 1e-15);

  // (1/2)σx for 2πt = π is a π rotation: −iσx.
  const Mat r = expm_hermitian(Mat(0.5 * pauli(1)), 0.5);
  CHECK((r - cplx(0, -1) * Mat(pauli(1))).norm() < 1e-13);

  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(expm_hermitian(bad, 1.0), InvalidArgument);
}

TEST_CASE("expm_hermitian is unitary and a group in t") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat h = random_hermitian(6, rng);
    const OperatorMatrix u(expm_hermitian(h, 0.3));
    CHECK(u.is_unitary());
    const Mat two = expm_hermitian(h, 0.15) * expm_hermitian(h, 0.15);
    CHECK((two - u.matrix()).norm() < 1e-12);
  }
}

TEST_CASE("partial trace") {
  Eigen::Vector4cd bell(1, 0, 0, 1);
  bell /= std::sqrt(2.0);
  const OperatorMatrix rho({2, 2}, Mat(bell * bell.adjoint()));
  const std::vector<int> keep0{0};
  CHECK((partial_trace(rho, keep0).matrix() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-15);

  std::mt19937_64 rng(3);
  const Mat ra = random_density(2, rng), rb = random_density(5, rng);
  const OperatorMatrix prod = kron(OperatorMatrix(ra), OperatorMatrix(rb));
  CHECK((partial_trace(prod, keep0).matrix() - ra).norm() < 1e-14);
  const std::vector<int> keep1{1};
  CHECK((partial_trace(prod, keep1).matrix() - rb).norm() < 1e-14);

  const std::vector<int> bad{2}, dup{0, 0};
  CHECK_THROWS_AS(partial_trace(rho, bad), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(rho, dup), InvalidArgument);
}

TEST_CASE("partial trace preserves trace and positivity on random states") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const OperatorMatrix rho({2, 3, 2}, random_density(12, rng));
    for (const std::vector<int>& keep : {std::vector<int>{0}, {1}, {0, 2}, {2, 1}}) {
      const Mat r = partial_trace(rho, keep).matrix();
      CHECK(std::abs(r.trace() - 1.0) < 1e-12);
      Eigen::SelfAdjointEigenSolver<Mat> eig(r);
      CHECK(eig.eigenvalues().minCoeff() > -1e-12);
    }
  }
}

TEST_CASE("operator invariants") {
  CHECK_THROWS_AS(OperatorMatrix({2, 2}, Mat(Mat::Identity(3, 3))), InvalidArgument);
  CHECK_THROWS_AS(OperatorMatrix({0}, Mat()), InvalidArgument);
  std::mt19937_64 rng(9);
  CHECK(OperatorMatrix(random_hermitian(4, rng)).is_hermitian());
  CHECK(OperatorMatrix(random_unitary(5, rng)).is_unitary());
  CHECK_FALSE(OperatorMatrix(Mat(2.0 * Mat::Identity(2, 2))).is_unitary());
}

TEST_CASE("local rotations") {
  const double a = 0.83;
  const Mat4 expect = kron2(Mat2::Identity(), std::cos(a / 2) * Mat2::Identity() - cplx(0, std::sin(a / 2)) * pauli(2));
  CHECK((local_rotation(2, 2, a) - expect).norm() < 1e-14);
  CHECK((local_rotation(1, 1, kPi) - cplx(0, -1) * pauli2(1, 0)).norm() < 1e-14);
}
