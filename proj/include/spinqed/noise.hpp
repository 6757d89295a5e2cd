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

#ifndef SPINQED_NOISE_HPP
#define SPINQED_NOISE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spinqed/device.hpp"
#include "spinqed/sequences.hpp"

namespace spinqed {

struct NoiseSpec {
  double sigma_epsilon = 0.0;
  double sigma_t = 0.0;

  /// σ_t = σ_ε/200.
  static NoiseSpec linked(double sigma_epsilon);
  void validate() const;
};

/// Four standard normals (δε₁, δε₂, δt₁, δt₂ before scaling) for sample k.
/// Each sample has its own engine seeded from (seed, k), so streams do not
/// depend on how samples are split across workers.
std::array<double, 4> standard_draw(std::uint64_t seed, std::uint64_t k);

NoiseSample scale_draw(const std::array<double, 4>& z, const NoiseSpec& spec);

std::vector<NoiseSample> sample_noise(const NoiseSpec& spec, std::uint64_t seed, int n);

enum class NoiseParameter { TunnelCoupling, Detuning };

struct Sensitivity {
  std::array<double, 2> partial{};  // signed ∂x/∂p_i
  double total = 0.0;               // Σᵢ|∂x/∂p_i|
};

/// Central differences with h = 1e-4·t_ci and one Richardson step.
Sensitivity sensitivity(const std::function<double(const DeviceParams&)>& quantity, const DeviceParams& params,
                        NoiseParameter which = NoiseParameter::TunnelCoupling);

enum class ModelQuantity { Eta, Omega1, Omega2, J, JTilde, Chi };

double model_quantity(const EffectiveModel& m, ModelQuantity q);
std::string to_string(ModelQuantity q);

/// Sensitivity of an effective-model field with drive amplitudes and
/// frequencies held fixed.
Sensitivity model_sensitivity(ModelQuantity q, const DeviceParams& params, std::span<const DrivePulse> drives,
                              NoiseParameter which = NoiseParameter::TunnelCoupling);

enum class FidelityMode {
  Fixed,  // against the noiseless sequence, no local freedom
  Local,  // against the family target, maximized over locals
};

struct McOptions {
  int n = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
  FidelityMode mode = FidelityMode::Fixed;
  int local_restarts = 4;
};

struct McResult {
  double mean_infidelity = 0.0;
  double stderr_infidelity = 0.0;
  int n_used = 0;
  int rejected = 0;
};

/// Everything a sample needs: nominal device, drives and model.
struct NoiseContext {
  DeviceParams params;
  std::vector<DrivePulse> drives;
  EffectiveModel nominal;

  static NoiseContext build(const DeviceParams& params, std::vector<DrivePulse> drives);
};

/// Mean 1 − F̄ over n samples for one sequence. In Fixed mode `target` is
/// the gate compared against (normally the noiseless sequence); in Local
/// mode it is the family gate and locals are maximized per sample.
McResult monte_carlo_infidelity(const GateSequence& seq, const Mat4& target, const NoiseSpec& spec,
                                const NoiseContext& ctx, const McOptions& options);

/// Several sequences over a list of noise levels. The same standard draws
/// are reused for every level and sequence, and each shifted model is
/// computed once per sample. Result indexed [level][sequence].
std::vector<std::vector<McResult>> monte_carlo_sweep(std::span<const GateSequence> sequences,
                                                     std::span<const NoiseSpec> levels, const NoiseContext& ctx,
                                                     const McOptions& options);

/// Log-spaced grid including both endpoints.
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace spinqed

#endif  // SPINQED_NOISE_HPP
