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

#ifndef SPINQED_DYNAMICS_HPP
#define SPINQED_DYNAMICS_HPP

#include <functional>
#include <span>
#include <vector>

#include "spinqed/device.hpp"
#include "spinqed/fidelity.hpp"
#include "spinqed/operators.hpp"

namespace spinqed {

/// Uniform grid on [t_start, t_end]. The number of steps is
/// ceil((t_end − t_start)/step) and the actual step is shrunk to fit.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double step = 0.0;

  void validate() const;
  int steps() const;
  double actual_step() const;
};

/// One factor of a frame transformation: exp(−i·2π·rate·t·G) for a rotating
/// term or exp(−i·angle·G) for a fixed rotation.
struct FrameTerm {
  OperatorMatrix generator;
  double rate = 0.0;
  double angle = 0.0;
  bool fixed = false;

  static FrameTerm rotating(OperatorMatrix g, double rate_ghz);
  static FrameTerm fixed_angle(OperatorMatrix g, double angle_rad);
};

/// V(t) = V₁(t)·V₂(t)·…, applied in the listed order.
struct FrameSpec {
  std::vector<FrameTerm> terms;

  OperatorMatrix unitary(double t_ns) const;
};

using HamiltonianFn = std::function<OperatorMatrix(double t_ns)>;

/// Midpoint-rule propagation. Returns steps() + 1 cumulative propagators,
/// the first being the identity at t_start.
std::vector<OperatorMatrix> propagate(const HamiltonianFn& h, const TimeGrid& grid);

/// Final propagator only.
OperatorMatrix propagate_final(const HamiltonianFn& h, const TimeGrid& grid);

/// V†(t)·u·V(0). An empty frame leaves u unchanged.
OperatorMatrix to_frame(const OperatorMatrix& u, const FrameSpec& frame, double t_ns);

/// Noisy doubly-rotating-frame CR Hamiltonian
/// ½(η + δη)σ₁ᶻ + ½δω₂σ₂ᶻ − ½(J̃ + δJ̃)σ₁ᶻσ₂ˣ.
Mat4 ddf_hamiltonian(const EffectiveModel& model, const ErrorVector& errors);

/// Resonant iSWAP Hamiltonian ½δω₁σ₁ᶻ + ½δω₂σ₂ᶻ − ½(J + δJ)(σ₁ˣσ₂ˣ + σ₁ʸσ₂ʸ).
/// Throws if the nominal model is detuned by more than 1e-6 GHz.
Mat4 df_iswap_hamiltonian(const EffectiveModel& model, const ErrorVector& errors);

/// Default number of midpoint steps per carrier period: the smallest power
/// of two with 2π·f·step < 0.1 rad.
int default_steps_per_period();

/// Propagator for h(t) = h_static + cos(2πft)·h_cos − sin(2πft)·h_sin, with
/// the midpoint step exponentials of one carrier period cached. The grid is
/// commensurate with the period, so evolving across whole periods uses one
/// precomputed matrix.
class PeriodicPropagator {
 public:
  PeriodicPropagator(Mat h_static, Mat h_cos, Mat h_sin, double frequency, int steps_per_period);

  double period() const { return period_; }
  double step() const { return period_ / static_cast<double>(steps_.size()); }
  int steps_per_period() const { return static_cast<int>(steps_.size()); }
  const Mat& period_unitary() const { return period_unitary_; }

  /// Evolve `states` (columns) from t_from to t_to, both measured from the
  /// carrier origin. A partial final step uses its own midpoint.
  Mat evolve(const Mat& states, double t_from, double t_to) const;

  /// Hamiltonian at time t.
  Mat hamiltonian(double t) const;

 private:
  Mat advance_partial(const Mat& states, double t_from, double t_to) const;

  Mat h_static_, h_cos_, h_sin_;
  double frequency_;
  double period_;
  std::vector<Mat> steps_;
  Mat period_unitary_;
};

/// Full-space cross-resonance setup in the dressed basis: drives share one
/// carrier and switch on at t = 0.
struct CrSimulation {
  DressedHamiltonian dressed;
  std::vector<DrivePulse> drives;
  int n_fock = 10;

  static CrSimulation build(const DeviceParams& params, std::vector<DrivePulse> drives);
  PeriodicPropagator propagator(int steps_per_period) const;
  /// Columns are the four embedded computational states.
  Mat computational_states() const;
  /// dims {2,2,2,2,n_fock}; the partial trace keeps the two spins.
  Embedding embedding() const;
  /// End of the drive window (all drives share it).
  double drive_off() const;
  double carrier() const;
};

}  // namespace spinqed

#endif  // SPINQED_DYNAMICS_HPP
