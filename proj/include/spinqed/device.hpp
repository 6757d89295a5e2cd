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

#ifndef SPINQED_DEVICE_HPP
#define SPINQED_DEVICE_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "spinqed/operators.hpp"

namespace spinqed {

/// One double quantum dot. Energies in GHz; the orbital splitting at
/// epsilon = 0 is 2·t_c.
struct DotParams {
  double epsilon = 0.0;
  double t_c = 0.0;
  double omega_z = 0.0;
  double g_ac = 0.0;
  double g_x = 0.0;

  bool operator==(const DotParams&) const = default;
};

struct DeviceParams {
  double omega_r = 0.0;
  std::array<DotParams, 2> dots{};
  int n_fock = 10;

  /// Throws InvalidArgument on hard invariant violations (2t_c ≤ ω_z,
  /// non-positive couplings, non-finite values, n_fock < 2).
  void validate() const;
  /// Soft checks; currently the dispersive ratio g_ac/|ω_r − ω_σ| < 0.2.
  std::vector<std::string> warnings() const;

  bool operator==(const DeviceParams&) const = default;
};

/// Square-envelope microwave drive on one dot: Ω̃ cos(2π f t + phase) τᶻ
/// while t_on ≤ t < t_off.
struct DrivePulse {
  int dot = 1;  // 1 or 2
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double t_on = 0.0;
  double t_off = 0.0;

  void validate() const;
  bool active(double t) const { return t >= t_on && t < t_off; }
  bool operator==(const DrivePulse&) const = default;
};

/// Single-DQD eigenbasis. Basis index is 2·σ + τ with σ = 0 the upper qubit
/// level and τ = 0 the upper (charge-like) orbital level, matching the
/// kron(spin, orbit) ordering of the bare basis.
struct DressedDqd {
  double omega_tau = 0.0;
  double omega_sigma = 0.0;
  Eigen::Vector4d energies = Eigen::Vector4d::Zero();
  Mat4 basis_transform = Mat4::Identity();  // columns are dressed states in the bare basis
};

/// Reduced two-qubit model in the dispersive, empty-cavity limit.
struct EffectiveModel {
  double omega_1 = 0.0;
  double omega_2 = 0.0;
  double J = 0.0;
  /// Projected τᶻ coefficients per dot (drive-independent): the σˣ and σᶻ
  /// weights of P τᵢᶻ P on the computational block.
  std::array<double, 2> tau_x{};
  std::array<double, 2> tau_z{};
  /// Drive amplitudes seen by each qubit, |Ω̃|·|tau_x| summed over drives.
  std::array<double, 2> Omega_x{};
  std::array<double, 2> Omega_z{};

  bool has_control_drive = false;
  double drive_frequency = 0.0;
  double delta_1 = 0.0;
  double Delta = 0.0;
  double chi = 0.0;
  double eta = 0.0;
  double J_tilde = 0.0;

  Mat4 h_eff = Mat4::Zero();
  double sw_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Noise draw: additive shifts of ε and t_c per dot (GHz).
struct NoiseSample {
  std::array<double, 2> delta_epsilon{};
  std::array<double, 2> delta_t_c{};
};

/// Differences between a shifted and a nominal model. The CR fields follow
/// the noisy doubly-rotating-frame Hamiltonian; the iSWAP fields follow the
/// resonant flip-flop Hamiltonian.
struct ErrorVector {
  double delta_eta = 0.0;
  double delta_omega2 = 0.0;
  double delta_Jtilde = 0.0;
  double delta_chi = 0.0;
  double delta_Omega2x = 0.0;

  double delta_omega1 = 0.0;
  double delta_J = 0.0;

  double delta_omega_plus() const { return delta_omega1 + delta_omega2; }
  double delta_omega_minus() const { return delta_omega1 - delta_omega2; }
  bool is_finite() const;
};

/// 4×4 single-DQD Hamiltonian in kron(spin, orbit) order.
Mat4 dqd_hamiltonian(const DotParams& dot);

/// Lab-frame pieces of the full Hamiltonian on dims [2,2,2,2,n_fock].
OperatorMatrix assemble_h0(const DeviceParams& params);
OperatorMatrix assemble_hi(const DeviceParams& params);
OperatorMatrix assemble_hdr(const DeviceParams& params, std::span<const DrivePulse> drives, double t_ns);

DressedDqd diagonalize_dqd(const DeviceParams& params, int dot);

/// H̃0, H̃I and the two τᶻ operators expressed in the product of dressed
/// single-DQD bases (H̃0 diagonal there).
struct DressedHamiltonian {
  std::array<DressedDqd, 2> dqd;
  OperatorMatrix h0;
  OperatorMatrix hi;
  std::array<OperatorMatrix, 2> tau_z;
  /// Full-space indices of |σ₁, τ₁ = lower, σ₂, τ₂ = lower, n = 0⟩ in the
  /// order |00⟩, |01⟩, |10⟩, |11⟩.
  std::array<int, 4> computational{};
};

DressedHamiltonian dressed_hamiltonian(const DeviceParams& params, int n_fock);

/// Kronecker product of the two dressed transforms with the Fock identity;
/// maps dressed-basis vectors to the bare basis of assemble_h0.
Mat dressed_to_bare(const DressedHamiltonian& dh, int n_fock);

struct SchriefferWolff {
  OperatorMatrix h_eff;
  OperatorMatrix generator;
  double residual = 0.0;
};

/// First-order generator across the block boundary and the projected
/// second-order Hamiltonian. h0 must be diagonal. The residual is the
/// Frobenius norm of the off-block part of e^S (h0 + v) e^−S, computed only
/// when requested.
SchriefferWolff schrieffer_wolff(const OperatorMatrix& h0, const OperatorMatrix& v, std::span<const int> block,
                                 bool compute_residual = true);

EffectiveModel extract_effective_model(const DeviceParams& params, std::span<const DrivePulse> drives);

DeviceParams apply_sample(const DeviceParams& params, const NoiseSample& sample);

/// Model at ε + δε, t_c + δt_c with the same drives (amplitude and frequency
/// held at their nominal values).
EffectiveModel shifted_model(const DeviceParams& params, std::span<const DrivePulse> drives,
                             const NoiseSample& sample);

/// shifted − nominal for the CR and iSWAP error symbols.
ErrorVector model_errors(const EffectiveModel& nominal, const EffectiveModel& shifted);

/// Ω̃ for which the projected σˣ amplitude on `dot` equals omega_x. Solved
/// by bisection on the forward map.
double drive_amplitude_for(const DeviceParams& params, int dot, double omega_x);

/// Dressed qubit frequency of `dot` in the effective model (handy for
/// setting the cross-resonance carrier).
double dressed_qubit_frequency(const DeviceParams& params, int dot);

}  // namespace spinqed

#endif  // SPINQED_DEVICE_HPP
