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

#ifndef SPINQED_CONFIG_HPP
#define SPINQED_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinqed/device.hpp"
#include "spinqed/fidelity.hpp"
#include "spinqed/noise.hpp"
#include "spinqed/sequences.hpp"

namespace spinqed {

enum class ExperimentKind { CrFidelity, Sensitivities, NoiseSweep, SweetSpot, SequenceCheck };

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment(std::string_view s);

/// Drive as written in a config: either the bare amplitude Ω̃ or the
/// projected Ωˣ to solve for. frequency = nullopt means "track the dressed
/// target-qubit frequency".
struct DriveConfig {
  std::optional<double> amplitude;
  std::optional<double> omega_x;
  std::optional<double> frequency;
  double phase = 0.0;
  double t_on = 0.0;
  double t_off = 0.0;

  bool operator==(const DriveConfig&) const = default;
};

struct SimulationConfig {
  double t_end = 590.0;
  double sample_interval = 10.0;
  int steps_per_period = 64;
  int local_restarts = 32;
  Reduction reduction = Reduction::Project;

  bool operator==(const SimulationConfig&) const = default;
};

struct NoiseConfig {
  double sigma_epsilon = 0.0;
  std::optional<double> sigma_t;  // default σ_ε/200
  int samples = 2000;
  FidelityMode fidelity_mode = FidelityMode::Fixed;
  int local_restarts = 4;

  bool operator==(const NoiseConfig&) const = default;
};

struct SweepConfig {
  GateFamily gate = GateFamily::CR;
  std::vector<Correction> sequences;
  double sigma_min = 0.01;
  double sigma_max = 1.0;
  int sigma_points = 10;
  double two_t_c_min = 6.5;
  double two_t_c_max = 9.0;
  int two_t_c_points = 11;
  double omega_x_min = 0.002;
  double omega_x_max = 0.08;
  int omega_x_points = 40;

  bool operator==(const SweepConfig&) const = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CrFidelity;
  std::uint64_t seed = 1;
  DeviceParams device;
  std::optional<DriveConfig> drive1;
  std::optional<DriveConfig> drive2;
  SimulationConfig simulation;
  NoiseConfig noise;
  SweepConfig sweep;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Collected parse/validation errors; what() joins them one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Parse the line-oriented `key = value` format with `[section]` headers.
/// `#` starts a comment. Throws ConfigError listing every problem.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Resolve drive configs into pulses (solving Ω̃ and the carrier).
std::vector<DrivePulse> resolve_drives(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical serialization with the output directory
/// blanked, hex. Moving a run elsewhere keeps its hash.
std::string config_hash(const ExperimentConfig& config);

/// Bundled presets: fig1, fig2a, fig2b, fig4a, fig4b, sweet-spot,
/// sequence-check.
std::vector<std::string> preset_names();
std::string preset_text(std::string_view name);

}  // namespace spinqed

#endif  // SPINQED_CONFIG_HPP
