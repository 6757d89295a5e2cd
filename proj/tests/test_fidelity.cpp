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

#include "spinqed/analytics.hpp"
#include "spinqed/fidelity.hpp"
#include "test_util.hpp"

using namespace spinqed;
using spinqed::testing::random_unitary;
using spinqed::testing::to4;

namespace {

// Nielsen's relation F̄ = (d·F_pro + 1)/(d + 1) with the process fidelity of
// a Kraus channel against V.
double nielsen(const std::vector<Mat4>& kraus, const Mat4& v) {
  double fpro = 0.0;
  for (const Mat4& k : kraus) fpro += std::norm((v.adjoint() * k).trace()) / 16.0;
  return (4 * fpro + 1) / 5;
}

Mat2 random_su2(std::mt19937_64& rng) {
  Mat2 u = random_unitary(2, rng);
  return u / std::sqrt(u.determinant());
}

}  // namespace

TEST_CASE("fidelity of perfect and fully depolarizing channels") {
  std::mt19937_64 rng(1);
  CHECK(average_gate_fidelity(ProcessMap::from_unitary(Mat4::Identity()), Mat4::Identity()) ==
        doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k < 5; ++k) {
    const Mat4 u = to4(random_unitary(4, rng));
    CHECK(average_gate_fidelity(ProcessMap::from_unitary(u), u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(average_gate_fidelity(ProcessMap::depolarizing(), u) == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("fidelity agrees with the process-fidelity relation") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Mat4 u = to4(random_unitary(4, rng)), v = to4(random_unitary(4, rng));
    CHECK(average_gate_fidelity(ProcessMap::from_unitary(u), v) == doctest::Approx(nielsen({u}, v)).epsilon(1e-12));
    CHECK(unitary_fidelity(u, v) == doctest::Approx(nielsen({u}, v)).epsilon(1e-12));

    // Two-element Kraus channel: mixture of unitaries.
    const double p = 0.3;
    const std::vector<Mat4> kraus{std::sqrt(p) * u, std::sqrt(1 - p) * v};
    CHECK(average_gate_fidelity(ProcessMap::from_kraus(kraus), v) == doctest::Approx(nielsen(kraus, v)).epsilon(1e-12));
  }
}

TEST_CASE("small ZX over-rotation matches the quadratic expansion") {
  // exp(−iθ σ₁ᶻσ₂ˣ) against identity: 1 − F̄ = (4/5)sin²θ exactly, and with
  // θ = (π/4)·δJ̃/J̃ this is the π²/20 term of the uncorrected CR expansion.
  const double x = 0.02, theta = kPi / 4 * x;
  const Mat4 u = std::cos(theta) * Mat4::Identity() - cplx(0, std::sin(theta)) * pauli2(3, 1);
  const double f = average_gate_fidelity(ProcessMap::from_unitary(u), Mat4::Identity());
  CHECK(1 - f == doctest::Approx(0.8 * std::sin(theta) * std::sin(theta)).epsilon(1e-10));
  ErrorVector ev;
  ev.delta_Jtilde = x;
  const double series = predicted_infidelity({Correction::Uncorrected, GateFamily::CR}, ev, {1.0, 0.0, 0.0}).infidelity;
  CHECK(1 - f == doctest::Approx(series).epsilon(1e-3));
}

TEST_CASE("PTM of channels is trace preserving and unital where expected") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    // Random channel from a Stiefel isometry split into four Kraus blocks.
    const Mat w = random_unitary(16, rng).leftCols(4);
    std::vector<Mat4> kraus;
    for (int b = 0; b < 4; ++b) kraus.push_back(w.block(4 * b, 0, 4, 4));
    const ProcessMap e = ProcessMap::from_kraus(kraus);
    const Ptm r = e.ptm();
    CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 1; j < 16; ++j) CHECK(std::abs(r(0, j)) < 1e-12);
    CHECK(std::abs(e.trace_loss()) < 1e-12);

    const Mat4 rho = to4(spinqed::testing::random_density(4, rng));
    const Mat4 out = e.apply(rho);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat4> eig(out);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
  }
  const ProcessMap half = ProcessMap::mix(ProcessMap::from_unitary(Mat4::Identity()), ProcessMap::depolarizing(), 0.5);
  CHECK(average_gate_fidelity(half, Mat4::Identity()) == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("SU(2) and SO(3) round trip") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Mat2 u = random_su2(rng);
    const Eigen::Matrix3d r = rotation_from_su2(u);
    CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    const Mat2 back = su2_from_rotation(r);
    CHECK(std::abs(std::abs((back.adjoint() * u).trace()) - 2.0) < 1e-10);
  }
}

TEST_CASE("local maximization") {
  const Mat4 cnot = cnot_gate();
  const FidelityReport plain = maximize_over_local(ProcessMap::from_unitary(cnot), cnot);
  CHECK(plain.fidelity_local_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plain.converged);

  const FidelityReport zz = maximize_over_local(ProcessMap::from_unitary(pauli2(3, 3) * cnot), cnot);
  CHECK(zz.fidelity_raw < 0.9);
  CHECK(zz.fidelity_local_max == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Mat4 a = kron2(random_su2(rng), random_su2(rng)), b = kron2(random_su2(rng), random_su2(rng));
    const Mat4 target = k % 2 ? cnot : iswap_gate();
    const FidelityReport rep = maximize_over_local(ProcessMap::from_unitary(a * target * b), target);
    CHECK(rep.fidelity_local_max >= 1.0 - 1e-9);
    CHECK(rep.fidelity_local_max >= rep.fidelity_raw - 1e-12);
    // The returned locals reproduce the reported value.
    const Mat4 dressed = kron2(rep.locals[0], rep.locals[1]) * target * kron2(rep.locals[2], rep.locals[3]);
    CHECK(unitary_fidelity(a * target * b, dressed) == doctest::Approx(rep.fidelity_local_max).epsilon(1e-9));
  }

  // Different local classes: the overlap of the canonical parameters
  // (π/4, 0, 0) and (π/4, π/4, 0) bounds |tr| by 4cos(π/4), so F̄ ≤ 0.6.
  const FidelityReport cross = maximize_over_local(ProcessMap::from_unitary(iswap_gate()), cnot);
  CHECK(cross.fidelity_local_max == doctest::Approx(0.6).epsilon(1e-8));

  LocalSearchOptions opt;
  opt.threads = 3;
  opt.seed = 9;
  const FidelityReport t3 = maximize_over_local(ProcessMap::from_unitary(iswap_gate()), cnot, opt);
  opt.threads = 1;
  const FidelityReport t1 = maximize_over_local(ProcessMap::from_unitary(iswap_gate()), cnot, opt);
  CHECK(t1.fidelity_local_max == t3.fidelity_local_max);
}

TEST_CASE("process reconstruction from a full propagator") {
  // Qubits on subsystems 0 and 2 of a [2,3,2] space; the middle level is a
  // spectator that should be traced out or projected away.
  const std::vector<int> dims{2, 3, 2};
  Mat iso = Mat::Zero(12, 4);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) iso((s1 * 3 + 0) * 2 + s2, 2 * s1 + s2) = 1.0;
  const Embedding emb{dims, iso, {0, 2}};
  CHECK_NOTHROW(emb.validate());

  const OperatorMatrix id = OperatorMatrix::identity(dims);
  for (Reduction mode : {Reduction::Project, Reduction::PartialTrace}) {
    const ProcessMap e = reconstruct_process(id, emb, mode);
    CHECK(average_gate_fidelity(e, Mat4::Identity()) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(leakage(iso, emb) < 1e-15);

  const OperatorMatrix x1 = kron(kron(OperatorMatrix(Mat(pauli(1))), OperatorMatrix::identity({3})),
                                 OperatorMatrix::identity({2}));
  const ProcessMap ex = reconstruct_process(x1, emb);
  CHECK(average_gate_fidelity(ex, pauli2(1, 0)) == doctest::Approx(1.0).epsilon(1e-13));

  // Moving the spectator to level 1 on qubit-1 = |1> leaks half the inputs.
  Mat u = Mat::Identity(12, 12);
  for (int s2 = 0; s2 < 2; ++s2) {
    const int a = (1 * 3 + 0) * 2 + s2, b = (1 * 3 + 1) * 2 + s2;
    u.row(a).swap(u.row(b));
  }
  const Mat out = u * iso;
  CHECK(leakage(out, emb) == doctest::Approx(0.5).epsilon(1e-12));
  const ProcessMap projected = reconstruct_process(out, emb, Reduction::Project);
  CHECK(projected.trace_loss() == doctest::Approx(0.5).epsilon(1e-12));
  const ProcessMap traced = reconstruct_process(out, emb, Reduction::PartialTrace);
  CHECK(std::abs(traced.trace_loss()) < 1e-12);
  // The spectator now records qubit 1, so tracing it out fully dephases
  // that qubit: F_pro = 1/2 and F̄ = (4·F_pro + 1)/5 = 0.6.
  CHECK(average_gate_fidelity(traced, Mat4::Identity()) == doctest::Approx(0.6).epsilon(1e-12));

  Mat bad = iso;
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS((Embedding{dims, bad, {0, 2}}.validate()), InvalidArgument);
}
