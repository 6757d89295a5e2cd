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

#include <algorithm>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinqed/device.hpp"
#include "test_util.hpp"

using namespace spinqed;
using spinqed::testing::fig1_device;
using spinqed::testing::resonant_device;

namespace {

// Exact eigenpairs of the full dressed-basis Hamiltonian.
struct Exact {
  Eigen::VectorXd energies;
  Mat vectors;
};

Exact exact_spectrum(const DeviceParams& p) {
  const DressedHamiltonian dh = dressed_hamiltonian(p, p.n_fock);
  Eigen::SelfAdjointEigenSolver<Mat> eig(dh.h0.matrix() + dh.hi.matrix());
  return {eig.eigenvalues(), eig.eigenvectors()};
}

// Exact eigenvalue of the state with the largest weight on basis index k.
double dominant_energy(const Exact& ex, int k) {
  Eigen::Index best = 0;
  ex.vectors.row(k).cwiseAbs2().maxCoeff(&best);
  return ex.energies(best);
}

DrivePulse control_drive(const DeviceParams& p, double omega_x) {
  DrivePulse d;
  d.dot = 1;
  d.frequency = dressed_qubit_frequency(p, 2);
  d.amplitude = drive_amplitude_for(p, 1, omega_x);
  d.t_off = 590;
  return d;
}

}  // namespace

TEST_CASE("decoupled DQD spectrum") {
  DotParams d{0.0, 3.5, 5.94, 0.04, 0.0};
  Eigen::SelfAdjointEigenSolver<Mat4> eig(dqd_hamiltonian(d));
  std::vector<double> expect{-3.5 - 2.97, -3.5 + 2.97, 3.5 - 2.97, 3.5 + 2.97};
  for (int k = 0; k < 4; ++k) CHECK(eig.eigenvalues()(k) == doctest::Approx(expect[k]).epsilon(1e-13));

  DeviceParams p = fig1_device();
  p.dots[1].g_x = 0.0;
  const DressedDqd dq = diagonalize_dqd(p, 2);
  CHECK(dq.omega_tau == doctest::Approx(7.0).epsilon(1e-13));
  CHECK(dq.omega_sigma == doctest::Approx(5.94).epsilon(1e-13));
  // Bare kets are site states, so the orbit still rotates into bonding and
  // antibonding; spin must not mix.
  const Mat sz = kron(OperatorMatrix(Mat(pauli(3))), OperatorMatrix(Mat(Mat::Identity(2, 2)))).matrix();
  const Mat4 t = dq.basis_transform;
  CHECK((t * sz.block<4, 4>(0, 0) - sz.block<4, 4>(0, 0) * t).norm() < 1e-12);
  CHECK((t.adjoint() * t - Mat4::Identity()).norm() < 1e-12);
}

TEST_CASE("hybridization lowers the qubit frequency") {
  const DeviceParams p = fig1_device();
  // The fig1 drive frequency, 5.9059 GHz, is the dressed second qubit
  // including its dispersive shift; the bare DQD value sits ~0.7 MHz higher.
  CHECK(dressed_qubit_frequency(p, 2) == doctest::Approx(5.9059).epsilon(2e-5));
  CHECK(diagonalize_dqd(p, 2).omega_sigma == doctest::Approx(5.9059).epsilon(2e-4));
  for (double gx : {0.01, 0.1, 0.3}) {
    DeviceParams q = p;
    q.dots[0].g_x = gx;
    CHECK(diagonalize_dqd(q, 1).omega_sigma < q.dots[0].omega_z);
  }
}

TEST_CASE("full Hamiltonian pieces") {
  const DeviceParams p = fig1_device();
  CHECK(assemble_h0(p).is_hermitian());
  CHECK(assemble_hi(p).is_hermitian());

  DeviceParams off = p;
  off.dots[0].g_ac = off.dots[1].g_ac = 0.0;
  CHECK(assemble_hi(off).matrix().norm() == 0.0);

  // hi only connects photon numbers differing by one.
  const Mat hi = assemble_hi(p).matrix();
  const int nf = p.n_fock;
  for (int r = 0; r < hi.rows(); ++r)
    for (int c = 0; c < hi.cols(); ++c)
      if (std::abs(hi(r, c)) > 0) CHECK(std::abs(r % nf - c % nf) == 1);

  // Drive vanishes at a carrier node.
  DrivePulse d{1, 0.05, 2.0, 0.0, 0.0, 100.0};
  const std::vector<DrivePulse> drives{d};
  CHECK(assemble_hdr(p, drives, 0.125).matrix().norm() < 1e-14);
  CHECK(assemble_hdr(p, drives, 0.0).matrix().norm() > 0.0);
  CHECK(assemble_hdr(p, drives, 100.0).matrix().norm() == 0.0);
}

TEST_CASE("ground state is the dressed vacuum to second order") {
  const DeviceParams p = fig1_device();
  Eigen::SelfAdjointEigenSolver<Mat> eig(assemble_h0(p).matrix() + assemble_hi(p).matrix());
  const double e0 = diagonalize_dqd(p, 1).energies.minCoeff() + diagonalize_dqd(p, 2).energies.minCoeff();
  // Exact ground energy sits below the uncoupled sum by the (small) Lamb-type shift.
  CHECK(eig.eigenvalues()(0) <= e0 + 1e-12);
  CHECK(eig.eigenvalues()(0) == doctest::Approx(e0).epsilon(1e-4));
}

TEST_CASE("Schrieffer-Wolff on a dispersive Jaynes-Cummings block") {
  const int nf = 6;
  const double wq = 5.0, wc = 6.0;
  auto build = [&](double g) {
    const Mat a = annihilation(nf).matrix();
    const Mat h0 = kron(OperatorMatrix(Mat(0.5 * wq * pauli(3))), OperatorMatrix(Mat(Mat::Identity(nf, nf)))).matrix() +
                   kron(OperatorMatrix(Mat(Mat::Identity(2, 2))), OperatorMatrix(Mat(wc * a.adjoint() * a))).matrix();
    const Mat v = g * kron(OperatorMatrix(Mat(pauli(1))), OperatorMatrix(Mat(a + a.adjoint()))).matrix();
    return std::pair{h0, v};
  };
  const std::vector<int> block{0, nf};  // |e,0>, |g,0>

  const double g = 0.02;
  auto [h0, v] = build(g);
  const SchriefferWolff sw = schrieffer_wolff(OperatorMatrix({2, nf}, h0), OperatorMatrix({2, nf}, v), block);
  const double eff = (sw.h_eff.matrix()(0, 0) - sw.h_eff.matrix()(1, 1)).real();

  Eigen::SelfAdjointEigenSolver<Mat> eig(h0 + v);
  Exact ex{eig.eigenvalues(), eig.eigenvectors()};
  const double exact = dominant_energy(ex, 0) - dominant_energy(ex, nf);
  CHECK(eff == doctest::Approx(exact).epsilon(1e-6));
  // Leading-order shift g²/Δ plus the counter-rotating g²/(ω_q + ω_c).
  const double shift = g * g / (wq - wc) + g * g / (wq + wc);
  CHECK((eff - wq) == doctest::Approx(shift).epsilon(0.02));

  // v = 0: generator vanishes, block of h0 returned.
  const SchriefferWolff zero = schrieffer_wolff(OperatorMatrix({2, nf}, h0), OperatorMatrix({2, nf}, Mat(Mat::Zero(2 * nf, 2 * nf))), block);
  CHECK(zero.generator.matrix().norm() == 0.0);
  CHECK(zero.h_eff.matrix()(0, 0).real() == doctest::Approx(0.5 * wq));
  CHECK(zero.residual == 0.0);

  // Off-block residual after the rotation scales as g².
  std::vector<double> gs{0.001, 0.002, 0.004, 0.008}, res;
  for (double gg : gs) {
    auto [a0, av] = build(gg);
    res.push_back(schrieffer_wolff(OperatorMatrix({2, nf}, a0), OperatorMatrix({2, nf}, av), block).residual);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < gs.size(); ++i) {
    const double x = std::log(gs[i]), y = std::log(res[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

  CHECK_THROWS_AS(schrieffer_wolff(OperatorMatrix({2, nf}, v), OperatorMatrix({2, nf}, v), block), InvalidArgument);
}

TEST_CASE("effective model of the fig1 device") {
  const DeviceParams p = fig1_device();
  const std::vector<DrivePulse> none;
  const EffectiveModel m = extract_effective_model(p, none);
  CHECK(m.warnings.empty());
  CHECK(m.sw_residual < 0.05);
  CHECK(m.J > 0);

  // Oracle: exact eigenvalues of the full space (Fock 10) for the four
  // dressed computational states, compared with h_eff's spectrum.
  const DressedHamiltonian dh = dressed_hamiltonian(p, p.n_fock);
  const Exact ex = exact_spectrum(p);
  std::vector<double> exact, model;
  for (int k = 0; k < 4; ++k) exact.push_back(dominant_energy(ex, dh.computational[k]));
  Eigen::SelfAdjointEigenSolver<Mat4> he(m.h_eff);
  for (int k = 0; k < 4; ++k) model.push_back(he.eigenvalues()(k));
  std::sort(exact.begin(), exact.end());
  for (int k = 1; k < 4; ++k) CHECK((model[k] - model[0]) == doctest::Approx(exact[k] - exact[0]).epsilon(1e-5));

  // Qubit frequencies follow the dressed splittings plus small dispersive pulls.
  CHECK(m.omega_1 == doctest::Approx(diagonalize_dqd(p, 1).omega_sigma).epsilon(1e-3));
  CHECK(m.omega_2 == doctest::Approx(diagonalize_dqd(p, 2).omega_sigma).epsilon(1e-3));

  // Only II, ZI, IZ and XX survive for the undriven pair.
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double c = std::abs((pauli2(a, b) * m.h_eff).trace()) / 4;
      const bool allowed = (a == 0 && b == 0) || (a == 3 && b == 0) || (a == 0 && b == 3) || (a == 1 && b == 1);
      if (!allowed) CHECK(c < 1e-3 * m.J);
    }
}

TEST_CASE("J from the resonant anticrossing") {
  // At ω₁ = ω₂ the flip-flop pair splits by 2J; exact diagonalization is an
  // independent measurement.
  const DeviceParams p = resonant_device();
  const std::vector<DrivePulse> none;
  const EffectiveModel m = extract_effective_model(p, none);
  const DressedHamiltonian dh = dressed_hamiltonian(p, p.n_fock);
  const Exact ex = exact_spectrum(p);
  const int i01 = dh.computational[1], i10 = dh.computational[2];
  std::vector<std::pair<double, double>> w;
  for (int k = 0; k < ex.energies.size(); ++k)
    w.push_back({std::norm(ex.vectors(i01, k)) + std::norm(ex.vectors(i10, k)), ex.energies(k)});
  std::sort(w.begin(), w.end(), [](auto a, auto b) { return a.first > b.first; });
  const double split = std::abs(w[0].second - w[1].second);
  CHECK(split == doctest::Approx(2 * std::abs(m.J)).epsilon(0.02));
}

TEST_CASE("uncoupled dots and relabeling") {
  DeviceParams p = fig1_device();
  const std::vector<DrivePulse> none;
  DeviceParams off = p;
  off.dots[0].g_ac = off.dots[1].g_ac = 0.0;
  const EffectiveModel m0 = extract_effective_model(off, none);
  CHECK(std::abs(m0.J) < 1e-15);
  CHECK(m0.omega_1 == doctest::Approx(diagonalize_dqd(off, 1).omega_sigma).epsilon(1e-12));
  CHECK(m0.omega_2 == doctest::Approx(diagonalize_dqd(off, 2).omega_sigma).epsilon(1e-12));

  DeviceParams swapped = p;
  std::swap(swapped.dots[0], swapped.dots[1]);
  const EffectiveModel a = extract_effective_model(p, none), b = extract_effective_model(swapped, none);
  CHECK(a.omega_1 == doctest::Approx(b.omega_2).epsilon(1e-12));
  CHECK(a.omega_2 == doctest::Approx(b.omega_1).epsilon(1e-12));
  CHECK(a.J == doctest::Approx(b.J).epsilon(1e-9));
  CHECK(std::abs(a.tau_x[0]) == doctest::Approx(std::abs(b.tau_x[1])).epsilon(1e-12));
}

TEST_CASE("Fock truncation 2 is exact for the second-order model") {
  DeviceParams p = fig1_device();
  const std::vector<DrivePulse> none;
  const EffectiveModel a = extract_effective_model(p, none);
  p.n_fock = 4;
  const EffectiveModel b = extract_effective_model(p, none);
  CHECK(a.J == doctest::Approx(b.J).epsilon(1e-12));
  CHECK(a.omega_1 == doctest::Approx(b.omega_1).epsilon(1e-12));
}

TEST_CASE("driven model closed forms") {
  const DeviceParams p = fig1_device();
  const std::vector<DrivePulse> drives{control_drive(p, 0.015)};
  const EffectiveModel m = extract_effective_model(p, drives);
  CHECK(m.has_control_drive);
  CHECK(m.Omega_x[0] == doctest::Approx(0.015).epsilon(1e-9));
  CHECK(m.delta_1 == doctest::Approx(m.omega_1 - m.drive_frequency).epsilon(1e-12));
  CHECK(m.eta == doctest::Approx(std::hypot(m.delta_1, m.Omega_x[0])).epsilon(1e-12));
  CHECK(m.J_tilde == doctest::Approx(m.J * m.Omega_x[0] / m.eta).epsilon(1e-12));
  CHECK(std::tan(m.chi) == doctest::Approx(m.Omega_x[0] / m.delta_1).epsilon(1e-12));
  CHECK(m.J_tilde * 1e3 == doctest::Approx(0.46).epsilon(0.1));
}

TEST_CASE("noise shifts") {
  const DeviceParams p = fig1_device();
  const std::vector<DrivePulse> drives{control_drive(p, 0.015)};
  const EffectiveModel nom = extract_effective_model(p, drives);
  const ErrorVector zero = model_errors(nom, shifted_model(p, drives, NoiseSample{}));
  CHECK(zero.delta_eta == 0.0);
  CHECK(zero.delta_Jtilde == 0.0);
  CHECK(zero.delta_omega1 == 0.0);

  // Lowering t_c pulls the orbit closer to the spin: more hybridization.
  NoiseSample s;
  s.delta_t_c = {-0.01, 0.0};
  const EffectiveModel sh = shifted_model(p, drives, s);
  const ErrorVector e = model_errors(nom, sh);
  CHECK(e.delta_omega1 < 0);
  CHECK(nom.Omega_x[0] * (sh.Omega_x[0] - nom.Omega_x[0]) > 0);
}

TEST_CASE("device validation") {
  DeviceParams p = fig1_device();
  CHECK_NOTHROW(p.validate());
  DeviceParams q = p;
  q.dots[0].t_c = 2.9;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
  q = p;
  q.n_fock = 1;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
  q = p;
  q.dots[1].g_ac = -0.1;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
  q = p;
  q.omega_r = std::nan("");
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
  q = p;
  q.dots[0].epsilon = -0.3;  // any real detuning is allowed
  CHECK_NOTHROW(q.validate());

  CHECK(p.warnings().empty());
  q = p;
  q.omega_r = 5.92;  // resonator on top of the qubits
  CHECK_FALSE(q.warnings().empty());

  DrivePulse d{3, 0.1, 5.9, 0.0, 0.0, 10.0};
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  d = {1, 0.1, 5.9, 0.0, 10.0, 5.0};
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
}
