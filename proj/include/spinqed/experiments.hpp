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

#ifndef SPINQED_EXPERIMENTS_HPP
#define SPINQED_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinqed/config.hpp"
#include "spinqed/device.hpp"
#include "spinqed/fidelity.hpp"

namespace spinqed {

inline constexpr const char* kVersion = "0.1.0";

struct CrPoint {
  double t = 0.0;
  FidelityReport report;
};

struct CrSeriesOptions {
  std::vector<double> times;  // ascending, ns
  int steps_per_period = 64;
  Reduction reduction = Reduction::Project;
  int restarts = 32;
  int final_restarts = 32;  // used for the last time point
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Full-space CR evolution sampled at the given times. fidelity_raw is taken
/// in the frame rotating at the carrier on both qubits; fidelity_local_max is
/// against CNOT. After the drive window the evolution continues undriven.
std::vector<CrPoint> cr_fidelity_series(const DeviceParams& params, const std::vector<DrivePulse>& drives,
                                        const CrSeriesOptions& options);

/// Four evolved computational columns at time t (same path as the series).
Mat cr_evolved_states(const DeviceParams& params, const std::vector<DrivePulse>& drives, double t,
                      int steps_per_period);

/// Same, for ascending times in one pass.
std::vector<Mat> cr_evolved_series(const DeviceParams& params, const std::vector<DrivePulse>& drives,
                                   const std::vector<double>& times, int steps_per_period);

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::ostream* log = nullptr;  // progress and warnings; null = silent
};

/// Run one experiment and write its CSV and summary.json. Returns 0 on
/// success, 2 on invalid input, 3 on numerical failure.
int run_experiment(ExperimentConfig config, const RunOptions& options);

}  // namespace spinqed

#endif  // SPINQED_EXPERIMENTS_HPP
