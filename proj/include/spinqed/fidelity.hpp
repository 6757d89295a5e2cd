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

#ifndef SPINQED_FIDELITY_HPP
#define SPINQED_FIDELITY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinqed/operators.hpp"

namespace spinqed {

using Ptm = Eigen::Matrix<double, 16, 16>;

/// Two-qubit process stored as the images E(σ₁ʲσ₂ᵏ), index 4j + k with
/// 0 = I, 1 = X, 2 = Y, 3 = Z.
struct ProcessMap {
  std::array<Mat4, 16> images{};

  /// Pauli transfer matrix R_ab = tr(P_a E(P_b))/4 (real part).
  Ptm ptm() const;
  /// 1 − tr E(I)/4.
  double trace_loss() const;
  Mat4 apply(const Mat4& rho) const;

  static ProcessMap from_kraus(const std::vector<Mat4>& kraus);
  static ProcessMap from_unitary(const Mat4& u) { return from_kraus({u}); }
  static ProcessMap depolarizing();
  static ProcessMap mix(const ProcessMap& a, const ProcessMap& b, double lambda);
};

/// How the qubit process is read off a full-space state.
enum class Reduction {
  Project,       // keep orbit-ground, vacuum amplitudes only (trace-decreasing)
  PartialTrace,  // trace out orbits and resonator
};

/// Computational subspace inside the full space.
struct Embedding {
  std::vector<int> dims;              // full-space dims, e.g. {2,2,2,2,10}
  Mat isometry;                       // columns: embedded |00⟩,|01⟩,|10⟩,|11⟩
  std::vector<int> qubit_subsystems;  // subsystems kept by the partial trace

  void validate() const;
};

/// Reconstruct the qubit process from a full propagator by evolving the 16
/// product inputs |0⟩,|1⟩,|+⟩,|+i⟩ per qubit.
ProcessMap reconstruct_process(const OperatorMatrix& full_propagator, const Embedding& embedding,
                               Reduction mode = Reduction::Project);

/// Same, given the already evolved columns U·B (full dim × 4).
ProcessMap reconstruct_process(const Mat& evolved_columns, const Embedding& embedding,
                               Reduction mode = Reduction::Project);

/// Population that left the embedded subspace, averaged over inputs.
double leakage(const Mat& evolved_columns, const Embedding& embedding);

/// F̄ = 1/5 + 1/80 Σ tr(U P U† E(P)). Values outside [0, 1] by more than
/// 1e-6 are clipped and a warning is appended when `warnings` is given.
double average_gate_fidelity(const ProcessMap& process, const Mat4& target,
                             std::vector<std::string>* warnings = nullptr);

/// F̄ for a unitary process against a unitary target:
/// (4 + |tr(V†U)|²)/20.
double unitary_fidelity(const Mat4& u, const Mat4& target);

struct LocalSearchOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_sweeps = 2000;
  double tolerance = 1e-15;
  int threads = 1;
};

struct FidelityReport {
  double fidelity_raw = 0.0;
  double fidelity_local_max = 0.0;
  /// Optimal locals: target becomes (A₁⊗A₂)·U·(B₁⊗B₂); order A₁, A₂, B₁, B₂.
  std::array<Mat2, 4> locals{};
  double leakage = 0.0;
  bool converged = false;
  int restarts_at_best = 0;
  double restart_spread = 0.0;
};

/// Maximize F̄(E, (A₁⊗A₂)·U·(B₁⊗B₂)) over single-qubit unitaries.
FidelityReport maximize_over_local(const ProcessMap& process, const Mat4& target,
                                   const LocalSearchOptions& options = {});

/// SU(2) element whose adjoint action is the rotation r (det r = 1).
Mat2 su2_from_rotation(const Eigen::Matrix3d& r);
/// Adjoint action R_ij = tr(σᵢ u σⱼ u†)/2.
Eigen::Matrix3d rotation_from_su2(const Mat2& u);

Mat4 cnot_gate();
Mat4 iswap_gate();

}  // namespace spinqed

#endif  // SPINQED_FIDELITY_HPP
