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

#include "spinqed/device.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace spinqed {

namespace {

constexpr double kDegeneracyTol = 1e-9;
constexpr double kGapTol = 1e-6;

bool finite(double x) { return std::isfinite(x); }

void check_dot_index(int dot) {
  if (dot != 1 && dot != 2) throw InvalidArgument(fmt::format("dot index must be 1 or 2 (got {})", dot));
}

// Bare reference states of the decoupled (g_x = 0) DQD, in the dressed
// index order 2σ + τ. Column k is the reference for dressed state k.
Mat4 reference_states(const DotParams& dot) {
  const double theta = std::atan2(dot.t_c, dot.epsilon / 2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Eigen::Vector2d orbit[2] = {{c, s}, {-s, c}};  // upper, lower
  const Eigen::Vector2d spin[2] = {{1, 0}, {0, 1}};     // up, down
  Mat4 ref;
  for (int sg = 0; sg < 2; ++sg) {
    for (int tau = 0; tau < 2; ++tau) {
      Eigen::Vector4d v;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) v(2 * i + j) = spin[sg](i) * orbit[tau](j);
      }
      ref.col(2 * sg + tau) = v.cast<cplx>();
    }
  }
  return ref;
}

// Pauli coefficient tr(σ_j ⊗ σ_k · M)/4 of a 4×4 matrix.
cplx pauli_coefficient(const Mat4& m, int j, int k) { return (pauli2(j, k).adjoint() * m).trace() / 4.0; }

Mat4 block_of(const Mat& m, const std::array<int, 4>& idx) {
  Mat4 out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

}  // namespace

void DeviceParams::validate() const {
  if (!finite(omega_r) || omega_r <= 0) throw InvalidArgument("omega_r must be finite and positive");
  if (n_fock < 2) throw InvalidArgument(fmt::format("n_fock must be >= 2 (got {})", n_fock));
  for (int i = 0; i < 2; ++i) {
    const DotParams& d = dots[i];
    if (!finite(d.epsilon) || !finite(d.t_c) || !finite(d.omega_z) || !finite(d.g_ac) || !finite(d.g_x)) {
      throw InvalidArgument(fmt::format("dot {}: parameters must be finite", i + 1));
    }
    if (d.t_c <= 0) throw InvalidArgument(fmt::format("dot {}: t_c must be positive", i + 1));
    if (d.omega_z <= 0) throw InvalidArgument(fmt::format("dot {}: omega_z must be positive", i + 1));
    if (d.g_ac < 0 || d.g_x < 0) throw InvalidArgument(fmt::format("dot {}: couplings must be non-negative", i + 1));
    if (2 * d.t_c <= d.omega_z) {
      throw InvalidArgument(fmt::format("dot {}: requires 2 t_c > omega_z (2 t_c = {}, omega_z = {})", i + 1,
                                        2 * d.t_c, d.omega_z));
    }
  }
}

std::vector<std::string> DeviceParams::warnings() const {
  // The qubit-photon coupling is g_ac times the dressed τᶻ matrix element
  // between the two qubit levels; that is what has to be small against the
  // resonator detuning.
  std::vector<std::string> out;
  for (int i = 0; i < 2; ++i) {
    const DressedDqd dq = diagonalize_dqd(*this, i + 1);
    Mat4 tz = kron2(Mat2::Identity(), pauli(3));
    const Mat4 t = dq.basis_transform.adjoint() * tz * dq.basis_transform;
    const double g_eff = dots[i].g_ac * std::abs(t(1, 3));
    const double ratio = g_eff / std::abs(omega_r - dq.omega_sigma);
    if (ratio >= 0.2) {
      out.push_back(fmt::format("dot {}: dispersive ratio g_eff/|omega_r - omega_sigma| = {:.3g} (>= 0.2)", i + 1,
                                ratio));
    }
  }
  return out;
}

void DrivePulse::validate() const {
  check_dot_index(dot);
  if (!finite(amplitude) || amplitude < 0) throw InvalidArgument("drive amplitude must be finite and >= 0");
  if (!finite(frequency) || !finite(phase) || !finite(t_on) || !finite(t_off)) {
    throw InvalidArgument("drive parameters must be finite");
  }
  if (!(t_off > t_on)) throw InvalidArgument("drive window requires t_off > t_on");
}

bool ErrorVector::is_finite() const {
  return finite(delta_eta) && finite(delta_omega2) && finite(delta_Jtilde) && finite(delta_chi) &&
         finite(delta_Omega2x) && finite(delta_omega1) && finite(delta_J);
}

Mat4 dqd_hamiltonian(const DotParams& d) {
  const Mat2 id = Mat2::Identity();
  return 0.5 * d.epsilon * kron2(id, pauli(3)) + d.t_c * kron2(id, pauli(1)) +
         0.5 * d.omega_z * kron2(pauli(3), id) + d.g_x * kron2(pauli(1), pauli(3));
}

namespace {

std::vector<int> full_dims(int n_fock) { return {2, 2, 2, 2, n_fock}; }

// Embed a 4×4 single-DQD operator for `dot` into the full space.
Mat embed_dqd(const Mat4& op, int dot, int n_fock) {
  const Mat id4 = Mat::Identity(4, 4);
  const Mat idf = Mat::Identity(n_fock, n_fock);
  const Mat m = Mat(op);
  const OperatorMatrix a = dot == 1 ? kron(OperatorMatrix(m), OperatorMatrix(id4)) : kron(OperatorMatrix(id4), OperatorMatrix(m));
  return kron(a, OperatorMatrix(idf)).matrix();
}

Mat embed_fock(const Mat& op) {
  return kron(OperatorMatrix(Mat::Identity(16, 16)), OperatorMatrix(op)).matrix();
}

}  // namespace

OperatorMatrix assemble_h0(const DeviceParams& params) {
  params.validate();
  const int nf = params.n_fock;
  const Mat a = annihilation(nf).matrix();
  Mat h = params.omega_r * embed_fock(a.adjoint() * a);
  for (int i = 0; i < 2; ++i) h += embed_dqd(dqd_hamiltonian(params.dots[i]), i + 1, nf);
  return OperatorMatrix(full_dims(nf), std::move(h));
}

OperatorMatrix assemble_hi(const DeviceParams& params) {
  params.validate();
  const int nf = params.n_fock;
  const Mat a = annihilation(nf).matrix();
  const Mat x = embed_fock(a + a.adjoint());
  const Mat4 tz = kron2(Mat2::Identity(), pauli(3));
  Mat h = Mat::Zero(x.rows(), x.cols());
  for (int i = 0; i < 2; ++i) {
    if (params.dots[i].g_ac != 0.0) h += params.dots[i].g_ac * (x * embed_dqd(tz, i + 1, nf));
  }
  return OperatorMatrix(full_dims(nf), std::move(h));
}

OperatorMatrix assemble_hdr(const DeviceParams& params, std::span<const DrivePulse> drives, double t_ns) {
  const int nf = params.n_fock;
  const int n = 16 * nf;
  const Mat4 tz = kron2(Mat2::Identity(), pauli(3));
  Mat h = Mat::Zero(n, n);
  for (const DrivePulse& d : drives) {
    d.validate();
    if (!d.active(t_ns)) continue;
    const double c = d.amplitude * std::cos(kTwoPi * d.frequency * t_ns + d.phase);
    if (c != 0.0) h += c * embed_dqd(tz, d.dot, nf);
  }
  return OperatorMatrix(full_dims(nf), std::move(h));
}

DressedDqd diagonalize_dqd(const DeviceParams& params, int dot) {
  check_dot_index(dot);
  const DotParams& d = params.dots[dot - 1];
  if (!(2 * d.t_c > d.omega_z)) throw InvalidArgument(fmt::format("dot {}: requires 2 t_c > omega_z", dot));

  Eigen::SelfAdjointEigenSolver<Mat4> eig(dqd_hamiltonian(d));
  const Eigen::Vector4d& w = eig.eigenvalues();
  for (int k = 0; k < 3; ++k) {
    if (w(k + 1) - w(k) < kDegeneracyTol) {
      throw NumericalError(fmt::format("dot {}: degenerate single-DQD spectrum, cannot label states", dot));
    }
  }

  // Label by largest overlap with the decoupled reference states, then fix
  // each phase so that overlap is real and positive.
  const Mat4 ref = reference_states(d);
  const Mat4 ov = ref.adjoint() * eig.eigenvectors();
  DressedDqd out;
  std::array<bool, 4> used{};
  for (int k = 0; k < 4; ++k) {
    int best = 0;
    ov.row(k).cwiseAbs().maxCoeff(&best);
    if (used[best]) throw NumericalError(fmt::format("dot {}: ambiguous dressed-state labeling", dot));
    used[best] = true;
    const cplx o = ov(k, best);
    out.basis_transform.col(k) = eig.eigenvectors().col(best) * (std::abs(o) / o);
    out.energies(k) = w(best);
  }
  out.omega_sigma = out.energies(1) - out.energies(3);
  out.omega_tau = 0.5 * ((out.energies(0) - out.energies(1)) + (out.energies(2) - out.energies(3)));
  return out;
}

DressedHamiltonian dressed_hamiltonian(const DeviceParams& params, int n_fock) {
  if (n_fock < 2) throw InvalidArgument(fmt::format("n_fock must be >= 2 (got {})", n_fock));
  DressedHamiltonian out;
  for (int i = 0; i < 2; ++i) out.dqd[i] = diagonalize_dqd(params, i + 1);

  const int n = 16 * n_fock;
  const std::vector<int> dims = {2, 2, 2, 2, n_fock};
  Eigen::VectorXd diag(n);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int p = 0; p < n_fock; ++p) {
        diag((a * 4 + b) * n_fock + p) = out.dqd[0].energies(a) + out.dqd[1].energies(b) + params.omega_r * p;
      }
    }
  }
  out.h0 = OperatorMatrix(dims, diag.cast<cplx>().asDiagonal());

  const Mat4 tz = kron2(Mat2::Identity(), pauli(3));
  const Mat a = annihilation(n_fock).matrix();
  const Mat x = embed_fock(a + a.adjoint());
  Mat hi = Mat::Zero(n, n);
  for (int i = 0; i < 2; ++i) {
    const Mat4& v = out.dqd[i].basis_transform;
    Mat t = embed_dqd(v.adjoint() * tz * v, i + 1, n_fock);
    // Dressed τᶻ is real up to rounding with the phase convention above.
    t = t.real().cast<cplx>();
    hi += params.dots[i].g_ac * (x * t);
    out.tau_z[i] = OperatorMatrix(dims, std::move(t));
  }
  out.hi = OperatorMatrix(dims, std::move(hi));
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) out.computational[2 * s1 + s2] = ((2 * s1 + 1) * 4 + (2 * s2 + 1)) * n_fock;
  }
  return out;
}

Mat dressed_to_bare(const DressedHamiltonian& dh, int n_fock) {
  const OperatorMatrix v1(Mat(dh.dqd[0].basis_transform));
  const OperatorMatrix v2(Mat(dh.dqd[1].basis_transform));
  return kron(kron(v1, v2), OperatorMatrix(Mat::Identity(n_fock, n_fock))).matrix();
}

SchriefferWolff schrieffer_wolff(const OperatorMatrix& h0, const OperatorMatrix& v, std::span<const int> block,
                                 bool compute_residual) {
  const int n = h0.dim();
  if (v.dim() != n) throw InvalidArgument("schrieffer_wolff: h0 and v differ in dimension");
  if (block.empty()) throw InvalidArgument("schrieffer_wolff: empty block");
  const Mat& h = h0.matrix();
  const Eigen::VectorXd e = h.diagonal().real();
  const Mat off = h - Mat(h.diagonal().asDiagonal());
  if (off.norm() > 1e-12 * std::max(1.0, h.norm())) throw InvalidArgument("schrieffer_wolff: h0 must be diagonal");

  std::vector<bool> in_block(n, false);
  for (int b : block) {
    if (b < 0 || b >= n) throw InvalidArgument(fmt::format("schrieffer_wolff: block index {} out of range", b));
    in_block[b] = true;
  }

  const Mat& vm = v.matrix();
  Mat s = Mat::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      if (in_block[m] == in_block[k] || vm(m, k) == cplx(0.0)) continue;
      const double gap = e(m) - e(k);
      if (std::abs(gap) < kGapTol) {
        throw NumericalError(
            fmt::format("schrieffer_wolff: levels {} and {} are coupled across the block with gap {:.3g} GHz", m,
                        k, gap));
      }
      s(m, k) = vm(m, k) / gap;
    }
  }

  const Mat full = h + vm + 0.5 * (s * vm - vm * s);
  const int nb = static_cast<int>(block.size());
  Mat heff(nb, nb);
  for (int a = 0; a < nb; ++a) {
    for (int b = 0; b < nb; ++b) heff(a, b) = full(block[a], block[b]);
  }

  SchriefferWolff out{OperatorMatrix(std::move(heff)), OperatorMatrix(h0.dims(), s), 0.0};
  if (compute_residual) {
    // e^S = exp(−i·(iS)) with iS Hermitian.
    const Mat u = expm_hermitian(Mat(cplx(0, 1) * s), 1.0 / kTwoPi);
    const Mat t = u * (h + vm) * u.adjoint();
    double acc = 0.0;
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        if (in_block[m] != in_block[k]) acc += std::norm(t(m, k));
      }
    }
    out.residual = std::sqrt(acc);
  }
  return out;
}

namespace {

EffectiveModel effective_model_impl(const DeviceParams& params, std::span<const DrivePulse> drives,
                                    bool with_diagnostics) {
  params.validate();
  for (const DrivePulse& d : drives) d.validate();

  // Second order only reaches the one-photon manifold, so two Fock levels
  // give the exact projected Hamiltonian.
  const DressedHamiltonian dh = dressed_hamiltonian(params, 2);
  const std::span<const int> block(dh.computational.data(), 4);
  const SchriefferWolff sw = schrieffer_wolff(dh.h0, dh.hi, block, with_diagnostics);

  EffectiveModel m;
  m.h_eff = sw.h_eff.matrix();
  m.sw_residual = sw.residual;
  m.omega_1 = 2.0 * pauli_coefficient(m.h_eff, 3, 0).real();
  m.omega_2 = 2.0 * pauli_coefficient(m.h_eff, 0, 3).real();
  m.J = -m.h_eff(1, 2).real();

  for (int i = 0; i < 2; ++i) {
    const Mat4 t = block_of(dh.tau_z[i].matrix(), dh.computational);
    m.tau_x[i] = (i == 0 ? pauli_coefficient(t, 1, 0) : pauli_coefficient(t, 0, 1)).real();
    m.tau_z[i] = (i == 0 ? pauli_coefficient(t, 3, 0) : pauli_coefficient(t, 0, 3)).real();
  }

  const DrivePulse* control = nullptr;
  for (const DrivePulse& d : drives) {
    m.Omega_x[d.dot - 1] += d.amplitude * std::abs(m.tau_x[d.dot - 1]);
    m.Omega_z[d.dot - 1] += d.amplitude * m.tau_z[d.dot - 1];
    if (d.dot == 1 && control == nullptr) control = &d;
  }
  m.Delta = m.omega_1 - m.omega_2;
  if (control != nullptr) {
    m.has_control_drive = true;
    m.drive_frequency = control->frequency;
    m.delta_1 = m.omega_1 - m.drive_frequency;
    m.eta = std::hypot(m.delta_1, m.Omega_x[0]);
    m.chi = std::atan2(m.Omega_x[0], m.delta_1);
    m.J_tilde = m.eta > 0 ? m.J * m.Omega_x[0] / m.eta : 0.0;
  }

  if (with_diagnostics) {
    const double scale = std::max(std::abs(m.J), 1e-12);
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        const bool kept = (j == 0 && k == 0) || (j == 3 && k == 0) || (j == 0 && k == 3) || (j == 1 && k == 1) ||
                          (j == 2 && k == 2);
        if (kept) continue;
        const cplx c = pauli_coefficient(m.h_eff, j, k);
        if (std::abs(c) > 0.01 * scale) {
          static constexpr char kName[] = "IXYZ";
          m.warnings.push_back(
              fmt::format("residual Pauli term {}{} = {:.3g} GHz exceeds 1% of J", kName[j], kName[k], c.real()));
        }
      }
    }
    const double imbalance = std::abs(pauli_coefficient(m.h_eff, 1, 1) - pauli_coefficient(m.h_eff, 2, 2));
    if (imbalance > 0.01 * scale && std::abs(pauli_coefficient(m.h_eff, 2, 2)) > 0.01 * scale) {
      m.warnings.push_back(fmt::format("XX/YY imbalance {:.3g} GHz exceeds 1% of J", imbalance));
    }
    for (std::string& w : params.warnings()) m.warnings.push_back(std::move(w));
  }
  return m;
}

}  // namespace

EffectiveModel extract_effective_model(const DeviceParams& params, std::span<const DrivePulse> drives) {
  return effective_model_impl(params, drives, true);
}

DeviceParams apply_sample(const DeviceParams& params, const NoiseSample& sample) {
  DeviceParams p = params;
  for (int i = 0; i < 2; ++i) {
    p.dots[i].epsilon += sample.delta_epsilon[i];
    p.dots[i].t_c += sample.delta_t_c[i];
  }
  return p;
}

EffectiveModel shifted_model(const DeviceParams& params, std::span<const DrivePulse> drives,
                             const NoiseSample& sample) {
  for (int i = 0; i < 2; ++i) {
    if (!finite(sample.delta_epsilon[i]) || !finite(sample.delta_t_c[i])) {
      throw InvalidArgument("shifted_model: noise sample is not finite");
    }
  }
  return effective_model_impl(apply_sample(params, sample), drives, false);
}

ErrorVector model_errors(const EffectiveModel& nominal, const EffectiveModel& shifted) {
  ErrorVector e;
  e.delta_eta = shifted.eta - nominal.eta;
  e.delta_omega2 = shifted.omega_2 - nominal.omega_2;
  e.delta_Jtilde = shifted.J_tilde - nominal.J_tilde;
  e.delta_chi = shifted.chi - nominal.chi;
  e.delta_Omega2x = shifted.Omega_x[1] - nominal.Omega_x[1];
  e.delta_omega1 = shifted.omega_1 - nominal.omega_1;
  e.delta_J = shifted.J - nominal.J;
  return e;
}

double drive_amplitude_for(const DeviceParams& params, int dot, double omega_x) {
  check_dot_index(dot);
  if (!finite(omega_x) || omega_x < 0) throw InvalidArgument("target omega_x must be finite and >= 0");
  if (omega_x == 0.0) return 0.0;
  auto forward = [&](double amp) {
    const DrivePulse d{dot, amp, 1.0, 0.0, 0.0, 1.0};
    return effective_model_impl(params, std::span<const DrivePulse>(&d, 1), false).Omega_x[dot - 1];
  };
  double lo = 0.0, hi = omega_x;
  int guard = 0;
  while (forward(hi) < omega_x) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60) throw NumericalError("drive_amplitude_for: projected drive vanishes, cannot reach target");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (forward(mid) < omega_x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double dressed_qubit_frequency(const DeviceParams& params, int dot) {
  check_dot_index(dot);
  const EffectiveModel m = effective_model_impl(params, {}, false);
  return dot == 1 ? m.omega_1 : m.omega_2;
}

}  // namespace spinqed
