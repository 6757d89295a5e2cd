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

// Bundled experiment configurations. Device values are the reference
// device parameters; frequencies in GHz, times in ns.

#include <fmt/format.h>

#include "spinqed/config.hpp"

namespace spinqed {

namespace {

// Shared resonator and DQD block; Zeeman splittings differ per preset.
std::string device_block(double omega_z1, double omega_z2) {
  return fmt::format(R"([device]
omega_r = 6
n_fock = 10

[dot1]
epsilon = 0
t_c = 3.5
omega_z = {}
g_ac = 0.04
g_x = 0.2

[dot2]
epsilon = 0
t_c = 3.5
omega_z = {}
g_ac = 0.04
g_x = 0.2
)",
                     omega_z1, omega_z2);
}

const char* kFig1 = R"([experiment]
name = cr-fidelity
seed = 1

{}
[drive1]
omega_x = 0.015
frequency = auto   # dressed omega_2 (5.9059 GHz)
t_on = 0
t_off = 590

[simulation]
t_end = 590
sample_interval = 10
steps_per_period = 64
local_restarts = 32
reduction = project

[output]
dir = out/fig1
)";

const char* kFig2a = R"([experiment]
name = sensitivities

{}
[drive1]
omega_x = 0.02
t_off = 1000

[sweep]
gate = cr
two_t_c_min = 6.5
two_t_c_max = 9
two_t_c_points = 11

[output]
dir = out/fig2a
)";

const char* kFig2b = R"([experiment]
name = sensitivities

{}
[sweep]
gate = iswap
two_t_c_min = 6.5
two_t_c_max = 9
two_t_c_points = 11

[output]
dir = out/fig2b
)";

const char* kFig4a = R"([experiment]
name = noise-sweep
seed = 1

{}
[noise]
samples = 2000
fidelity_mode = fixed

[sweep]
gate = iswap
sequences = uncorrected,1qfull
sigma_min = 0.01
sigma_max = 1
sigma_points = 10

[output]
dir = out/fig4a
)";

const char* kFig4b = R"([experiment]
name = noise-sweep
seed = 1

{}
[drive1]
omega_x = 0.0285
t_off = 1000

[drive2]
omega_x = 0.015
t_off = 1000

[noise]
samples = 2000
fidelity_mode = fixed

[sweep]
gate = cr
sequences = uncorrected,2qecho,1qpartial,1qfull
sigma_min = 0.01
sigma_max = 1
sigma_points = 10

[output]
dir = out/fig4b
)";

const char* kSweetSpot = R"([experiment]
name = sweet-spot

{}
[sweep]
omega_x_min = 0.002
omega_x_max = 0.08
omega_x_points = 40

[output]
dir = out/sweet-spot
)";

const char* kSequenceCheck = R"([experiment]
name = sequence-check

{}
[drive1]
omega_x = 0.015
t_off = 1000

[sweep]
gate = cr

[output]
dir = out/sequence-check
)";

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2a", "fig2b", "fig4a", "fig4b", "sweet-spot", "sequence-check"};
}

std::string preset_text(std::string_view name) {
  const std::string cr = device_block(5.96, 5.94);
  const std::string res = device_block(5.95, 5.95);
  if (name == "fig1") return fmt::format(fmt::runtime(kFig1), cr);
  if (name == "fig2a") return fmt::format(fmt::runtime(kFig2a), cr);
  if (name == "fig2b") return fmt::format(fmt::runtime(kFig2b), res);
  if (name == "fig4a") return fmt::format(fmt::runtime(kFig4a), res);
  if (name == "fig4b") return fmt::format(fmt::runtime(kFig4b), cr);
  if (name == "sweet-spot") return fmt::format(fmt::runtime(kSweetSpot), cr);
  if (name == "sequence-check") return fmt::format(fmt::runtime(kSequenceCheck), cr);
  throw InvalidArgument(fmt::format("unknown preset '{}'", name));
}

}  // namespace spinqed
