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

#ifndef SPINQED_SEQUENCES_HPP
#define SPINQED_SEQUENCES_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinqed/device.hpp"
#include "spinqed/operators.hpp"

namespace spinqed {

enum class GateFamily { CR, ISwap };
enum class Correction { Uncorrected, TwoQEcho, OneQPartial, OneQFull };

struct SequenceKind {
  Correction correction = Correction::Uncorrected;
  GateFamily family = GateFamily::CR;

  bool operator==(const SequenceKind&) const = default;
};

std::string to_string(Correction c);
std::string to_string(GateFamily g);
std::string to_string(const SequenceKind& k);  // e.g. "cr-1qfull"
/// Accepts "uncorrected", "2qecho", "1qpartial", "1qfull".
Correction parse_correction(std::string_view s);
GateFamily parse_family(std::string_view s);

enum class EvolveKind { CrSingle, CrDouble, ISwap };

/// Reduced-model evolution through an angle φ.
struct Evolve {
  EvolveKind kind = EvolveKind::CrSingle;
  double angle = 0.0;
};

/// Instantaneous exp(−i·angle/2·σ^axis) on one qubit; axis is 'x', 'y' or 'z'.
struct LocalPulse {
  char axis = 'x';
  int qubit = 1;
  double angle = kPi;
};

using Segment = std::variant<Evolve, LocalPulse>;

/// Segments in time order (first applied first).
struct GateSequence {
  SequenceKind kind;
  double target_angle = 0.0;
  std::vector<Segment> segments;

  /// Σ|segment angles|.
  double total_evolution_angle() const;
  /// total_evolution_angle / target_angle.
  double duration_multiplier() const;
  /// One segment per line.
  std::string listing() const;
};

/// Noisy DDF evolution through φ for φ/(2πJ̃) ns, J̃ taken from the nominal
/// model. The double-drive variant adds ½(Ω₂ˣ + δΩ₂ˣ)σ₂ˣ. A nonzero δχ
/// conjugates the result by exp(−iδχσ₁ʸ/2).
Mat4 cr_segment(const EffectiveModel& model, const ErrorVector& errors, double phi, bool double_drive,
                double omega_2x);

/// exp of the resonant flip-flop Hamiltonian for φ/(4πJ) ns.
Mat4 iswap_segment(const EffectiveModel& model, const ErrorVector& errors, double phi);

GateSequence build_sequence(SequenceKind kind, double phi);

/// Ordered product of the segments. Ω₂ˣ for double-drive segments comes from
/// model.Omega_x[1].
Mat4 evaluate_sequence(const GateSequence& seq, const EffectiveModel& model, const ErrorVector& errors);

/// Ideal gate the family targets up to locals: CNOT or iSWAP.
Mat4 family_target(GateFamily family);

/// Default target angle: π/2 for CR, π for iSWAP.
double default_angle(GateFamily family);

}  // namespace spinqed

#endif  // SPINQED_SEQUENCES_HPP
