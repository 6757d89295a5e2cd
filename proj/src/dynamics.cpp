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

#include "spinqed/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace spinqed {

void TimeGrid::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(step)) {
    throw InvalidArgument("TimeGrid: values must be finite");
  }
  if (step <= 0) throw InvalidArgument("TimeGrid: step must be positive");
  if ((t_end - t_start) / step < 1.0 - 1e-12) throw InvalidArgument("TimeGrid: needs at least one step");
}

int TimeGrid::steps() const {
  validate();
  return static_cast<int>(std::ceil((t_end - t_start) / step - 1e-9));
}

double TimeGrid::actual_step() const { return (t_end - t_start) / steps(); }

FrameTerm FrameTerm::rotating(OperatorMatrix g, double rate_ghz) {
  if (!g.is_hermitian()) throw InvalidArgument("FrameTerm: generator must be Hermitian");
  return FrameTerm{std::move(g), rate_ghz, 0.0, false};
}

FrameTerm FrameTerm::fixed_angle(OperatorMatrix g, double angle_rad) {
  if (!g.is_hermitian()) throw InvalidArgument("FrameTerm: generator must be Hermitian");
  return FrameTerm{std::move(g), 0.0, angle_rad, true};
}

OperatorMatrix FrameSpec::unitary(double t_ns) const {
  if (terms.empty()) throw InvalidArgument("FrameSpec: no terms");
  OperatorMatrix v = OperatorMatrix::identity(terms.front().generator.dims());
  for (const FrameTerm& term : terms) {
    // exp(−i·angle·G) = expm_hermitian(G, angle/2π).
    const double phase = term.fixed ? term.angle : kTwoPi * term.rate * t_ns;
    v = v * expm_hermitian(term.generator, phase / kTwoPi);
  }
  return v;
}

namespace {

Mat checked_hamiltonian(const HamiltonianFn& h, double t, int expected_dim) {
  const OperatorMatrix m = h(t);
  if (m.dim() != expected_dim) {
    throw InvalidArgument(fmt::format("propagate: Hamiltonian dimension changed at t = {} ns", t));
  }
  if (!m.matrix().allFinite()) throw NumericalError(fmt::format("propagate: non-finite Hamiltonian at t = {} ns", t));
  return m.matrix();
}

}  // namespace

std::vector<OperatorMatrix> propagate(const HamiltonianFn& h, const TimeGrid& grid) {
  const int n = grid.steps();
  const double dt = grid.actual_step();
  const OperatorMatrix h0 = h(grid.t_start + 0.5 * dt);
  std::vector<OperatorMatrix> out;
  out.reserve(n + 1);
  out.push_back(OperatorMatrix::identity(h0.dims()));
  Mat u = out.back().matrix();
  for (int k = 0; k < n; ++k) {
    const double tm = grid.t_start + (k + 0.5) * dt;
    u = expm_hermitian(checked_hamiltonian(h, tm, h0.dim()), dt) * u;
    out.emplace_back(h0.dims(), u);
  }
  return out;
}

OperatorMatrix propagate_final(const HamiltonianFn& h, const TimeGrid& grid) {
  const int n = grid.steps();
  const double dt = grid.actual_step();
  const OperatorMatrix h0 = h(grid.t_start + 0.5 * dt);
  Mat u = Mat::Identity(h0.dim(), h0.dim());
  for (int k = 0; k < n; ++k) {
    const double tm = grid.t_start + (k + 0.5) * dt;
    u = expm_hermitian(checked_hamiltonian(h, tm, h0.dim()), dt) * u;
  }
  return OperatorMatrix(h0.dims(), std::move(u));
}

OperatorMatrix to_frame(const OperatorMatrix& u, const FrameSpec& frame, double t_ns) {
  if (frame.terms.empty()) return u;  // lab frame
  return frame.unitary(t_ns).adjoint() * u * frame.unitary(0.0);
}

Mat4 ddf_hamiltonian(const EffectiveModel& model, const ErrorVector& e) {
  return 0.5 * (model.eta + e.delta_eta) * pauli2(3, 0) + 0.5 * e.delta_omega2 * pauli2(0, 3) -
         0.5 * (model.J_tilde + e.delta_Jtilde) * pauli2(3, 1);
}

Mat4 df_iswap_hamiltonian(const EffectiveModel& model, const ErrorVector& e) {
  const double detuning = model.omega_1 - model.omega_2;
  if (std::abs(detuning) > 1e-6) {
    throw InvalidArgument(fmt::format("iSWAP requires resonant qubits; nominal detuning is {:.3g} GHz", detuning));
  }
  return 0.5 * e.delta_omega1 * pauli2(3, 0) + 0.5 * e.delta_omega2 * pauli2(0, 3) -
         0.5 * (model.J + e.delta_J) * (pauli2(1, 1) + pauli2(2, 2));
}

int default_steps_per_period() {
  int n = 1;
  while (kTwoPi / n >= 0.1) n *= 2;
  return n;
}

PeriodicPropagator::PeriodicPropagator(Mat h_static, Mat h_cos, Mat h_sin, double frequency, int steps_per_period)
    : h_static_(std::move(h_static)), h_cos_(std::move(h_cos)), h_sin_(std::move(h_sin)), frequency_(frequency) {
  if (!(frequency_ > 0) || !std::isfinite(frequency_)) throw InvalidArgument("PeriodicPropagator: bad frequency");
  if (steps_per_period < 1) throw InvalidArgument("PeriodicPropagator: steps_per_period must be >= 1");
  period_ = 1.0 / frequency_;
  const double dt = period_ / steps_per_period;
  const Eigen::Index n = h_static_.rows();
  period_unitary_ = Mat::Identity(n, n);
  steps_.reserve(steps_per_period);
  for (int k = 0; k < steps_per_period; ++k) {
    steps_.push_back(expm_hermitian(hamiltonian((k + 0.5) * dt), dt));
    period_unitary_ = steps_.back() * period_unitary_;
  }
}

Mat PeriodicPropagator::hamiltonian(double t) const {
  const double w = kTwoPi * frequency_ * t;
  return h_static_ + std::cos(w) * h_cos_ - std::sin(w) * h_sin_;
}

Mat PeriodicPropagator::advance_partial(const Mat& states, double t_from, double t_to) const {
  if (t_to - t_from <= 0) return states;
  return expm_hermitian(hamiltonian(0.5 * (t_from + t_to)), t_to - t_from) * states;
}

Mat PeriodicPropagator::evolve(const Mat& states, double t_from, double t_to) const {
  if (t_to < t_from) throw InvalidArgument("PeriodicPropagator: t_to must not precede t_from");
  const double dt = step();
  const long n_steps = static_cast<long>(steps_.size());
  const double tol = 1e-9 * dt;

  // Snap t_from to the grid, or take a partial step up to the next node.
  Mat cur = states;
  long k = static_cast<long>(std::floor(t_from / dt + 0.5));
  if (std::abs(t_from - k * dt) > tol) {
    k = static_cast<long>(std::ceil(t_from / dt));
    const double node = std::min(k * dt, t_to);
    cur = advance_partial(cur, t_from, node);
    if (node >= t_to) return cur;
  }
  const long k_end = static_cast<long>(std::floor((t_to + tol) / dt));

  while (k < k_end && k % n_steps != 0) {
    cur = steps_[k % n_steps] * cur;
    ++k;
  }
  while (k + n_steps <= k_end) {
    cur = period_unitary_ * cur;
    k += n_steps;
  }
  while (k < k_end) {
    cur = steps_[k % n_steps] * cur;
    ++k;
  }
  if (t_to - k * dt > tol) cur = advance_partial(cur, k * dt, t_to);
  return cur;
}

CrSimulation CrSimulation::build(const DeviceParams& params, std::vector<DrivePulse> drives) {
  params.validate();
  if (drives.empty()) throw InvalidArgument("CrSimulation: at least one drive is required");
  for (const DrivePulse& d : drives) {
    d.validate();
    if (d.t_on != 0.0) throw InvalidArgument("CrSimulation: drives must switch on at t = 0");
    if (d.frequency != drives.front().frequency || d.t_off != drives.front().t_off) {
      throw InvalidArgument("CrSimulation: all drives must share carrier frequency and window");
    }
  }
  CrSimulation sim;
  sim.dressed = dressed_hamiltonian(params, params.n_fock);
  sim.drives = std::move(drives);
  sim.n_fock = params.n_fock;
  return sim;
}

PeriodicPropagator CrSimulation::propagator(int steps_per_period) const {
  const Mat hs = dressed.h0.matrix() + dressed.hi.matrix();
  Mat hc = Mat::Zero(hs.rows(), hs.cols());
  Mat hsin = Mat::Zero(hs.rows(), hs.cols());
  for (const DrivePulse& d : drives) {
    hc += d.amplitude * std::cos(d.phase) * dressed.tau_z[d.dot - 1].matrix();
    hsin += d.amplitude * std::sin(d.phase) * dressed.tau_z[d.dot - 1].matrix();
  }
  return PeriodicPropagator(hs, hc, hsin, carrier(), steps_per_period);
}

Mat CrSimulation::computational_states() const {
  const int n = 16 * n_fock;
  Mat b = Mat::Zero(n, 4);
  for (int j = 0; j < 4; ++j) b(dressed.computational[j], j) = 1.0;
  return b;
}

Embedding CrSimulation::embedding() const {
  return Embedding{{2, 2, 2, 2, n_fock}, computational_states(), {0, 2}};
}

double CrSimulation::drive_off() const { return drives.front().t_off; }

double CrSimulation::carrier() const { return drives.front().frequency; }

}  // namespace spinqed
