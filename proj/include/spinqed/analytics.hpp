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

#ifndef SPINQED_ANALYTICS_HPP
#define SPINQED_ANALYTICS_HPP

#include <span>
#include <string>
#include <vector>

#include "spinqed/device.hpp"
#include "spinqed/sequences.hpp"

namespace spinqed {

struct ClosedForms {
  double chi = 0.0;
  double eta = 0.0;
  double J_tilde = 0.0;
};

/// χ = atan2(Ωˣ, δ₁), η = √(δ₁² + Ωˣ²), J̃ = JΩˣ/η.
ClosedForms closed_forms(double delta_1, double omega_x, double J);

/// ψ(φ) = arccos(cos(φ/2)/2).
double psi(double phi);
/// ζ(φ) = (4ψ(φ) + π − φ)(η + δη)/J̃.
double zeta(double phi, double eta, double delta_eta, double J_tilde);

/// Energy scales the expansions are normalized by.
struct ExpansionScales {
  double J_tilde = 0.0;    // CR
  double J = 0.0;          // iSWAP
  double Omega_2x = 0.0;   // 2Qecho
};

struct Prediction {
  double infidelity = 0.0;
  std::vector<std::string> warnings;
};

/// Lowest-order 1 − F̄ for the sequence at its CNOT (φ = π/2) or iSWAP
/// (φ = π) angle. Ratios above 0.3 attach a validity warning.
Prediction predicted_infidelity(SequenceKind kind, const ErrorVector& ev, const ExpansionScales& scales);

// Expansion constants quoted without closed form.
inline constexpr double kPartialEta = 8.21;
inline constexpr double kPartialCross = 5.99;
inline constexpr double kPartialQuartic = 2.02;
inline constexpr double kFullCross = 20.41;
inline constexpr double kFullQuartic = 8.44;
inline constexpr double kIswapFullCross = 3.00;
inline constexpr double kIswapFullQuartic = 0.25;

struct SweetSpot {
  double omega_x = 0.0;      // GHz
  double sensitivity = 0.0;  // Σᵢ|∂η/∂t_ci| at the minimizer
  std::vector<double> scan_omega_x;
  std::vector<double> scan_sensitivity;
};

/// Σᵢ|∂η/∂t_ci| as a function of the control-drive Ωˣ; the carrier stays at
/// the nominal dressed ω₂.
double eta_tc_sensitivity(const DeviceParams& params, double omega_x);

/// Minimize Σᵢ|∂η/∂t_ci| over Ω₁ˣ ∈ [lo, hi] by scan then golden section.
SweetSpot sweet_spot_drive(const DeviceParams& params, double lo = 0.002, double hi = 0.08, int scan_points = 40);

/// exp(−(k² − 1)t²/T₂²) with k = gate_time_factor(kind, φ).
double decoherence_penalty(SequenceKind kind, double phi, double t_ns, double t2_ns);
double gate_time_factor(SequenceKind kind, double phi);

}  // namespace spinqed

#endif  // SPINQED_ANALYTICS_HPP
