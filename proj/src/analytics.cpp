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

#include "spinqed/analytics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spinqed/noise.hpp"

namespace spinqed {

ClosedForms closed_forms(double delta_1, double omega_x, double J) {
  if (delta_1 == 0.0 && omega_x == 0.0) throw InvalidArgument("closed_forms: chi undefined for delta_1 = Omega_x = 0");
  ClosedForms c;
  c.eta = std::hypot(delta_1, omega_x);
  c.chi = std::atan2(omega_x, delta_1);
  c.J_tilde = J * omega_x / c.eta;
  return c;
}

double psi(double phi) { return std::acos(std::cos(phi / 2) / 2); }

double zeta(double phi, double eta, double delta_eta, double J_tilde) {
  return (4 * psi(phi) + kPi - phi) * (eta + delta_eta) / J_tilde;
}

Prediction predicted_infidelity(SequenceKind kind, const ErrorVector& ev, const ExpansionScales& sc) {
  Prediction p;
  auto ratio = [&](double num, double den, const char* name) {
    const double r = num / den;
    if (std::abs(r) > 0.3) p.warnings.push_back(fmt::format("{} = {:.3g} is outside the expansion window", name, r));
    return r;
  };
  const double pi2 = kPi * kPi;

  if (kind.family == GateFamily::CR) {
    if (!(sc.J_tilde > 0)) throw InvalidArgument("predicted_infidelity: CR expansions need J_tilde > 0");
    const double eta = ratio(ev.delta_eta, sc.J_tilde, "delta_eta/J_tilde");
    const double w2 = ratio(ev.delta_omega2, sc.J_tilde, "delta_omega2/J_tilde");
    const double jt = ratio(ev.delta_Jtilde, sc.J_tilde, "delta_Jtilde/J_tilde");
    const double chi = ratio(ev.delta_chi, 1.0, "delta_chi");
    switch (kind.correction) {
      case Correction::Uncorrected:
        p.infidelity = pi2 / 20 * eta * eta + 0.4 * w2 * w2 + pi2 / 20 * jt * jt + 0.4 * chi * chi;
        break;
      case Correction::TwoQEcho: {
        if (!(sc.Omega_2x > 0)) throw InvalidArgument("predicted_infidelity: 2qecho needs Omega_2x > 0");
        const double w2o = ratio(ev.delta_omega2, sc.Omega_2x, "delta_omega2/Omega_2x");
        p.infidelity = 0.4 * w2o * w2o + pi2 / 20 * jt * jt + 0.4 * chi * chi;
        break;
      }
      case Correction::OneQPartial:
        p.infidelity = kPartialEta * eta * eta + 9 * pi2 / 20 * jt * jt + 0.4 * chi * chi +
                       kPartialCross * w2 * w2 * jt + kPartialQuartic * std::pow(w2, 4);
        break;
      case Correction::OneQFull:
        p.infidelity = 5 * pi2 / 4 * jt * jt + 0.4 * chi * chi + kFullCross * w2 * w2 * jt +
                       kFullQuartic * std::pow(w2, 4);
        break;
    }
    return p;
  }

  if (!(sc.J > 0)) throw InvalidArgument("predicted_infidelity: iSWAP expansions need J > 0");
  const double j = ratio(ev.delta_J, sc.J, "delta_J/J");
  const double wm = ratio(ev.delta_omega_minus(), sc.J, "delta_omega_minus/J");
  const double wp = ratio(ev.delta_omega_plus(), sc.J, "delta_omega_plus/J");
  switch (kind.correction) {
    case Correction::Uncorrected:
      p.infidelity = pi2 / 10 * j * j + 0.1 * wm * wm + pi2 / 40 * wp * wp;
      break;
    case Correction::OneQFull:
      p.infidelity = 9 * pi2 / 10 * j * j + kIswapFullCross * j * wm * wm + kIswapFullQuartic * std::pow(wm, 4);
      break;
    default:
      throw InvalidArgument(fmt::format("predicted_infidelity: no expansion for {}", to_string(kind)));
  }
  return p;
}

double eta_tc_sensitivity(const DeviceParams& params, double omega_x) {
  const double carrier = dressed_qubit_frequency(params, 2);
  const DrivePulse drive{1, drive_amplitude_for(params, 1, omega_x), carrier, 0.0, 0.0, 1.0};
  return model_sensitivity(ModelQuantity::Eta, params, std::span<const DrivePulse>(&drive, 1)).total;
}

SweetSpot sweet_spot_drive(const DeviceParams& params, double lo, double hi, int scan_points) {
  params.validate();
  if (!(lo > 0) || !(hi > lo) || scan_points < 3) throw InvalidArgument("sweet_spot_drive: bad scan range");
  const double delta = dressed_qubit_frequency(params, 1) - dressed_qubit_frequency(params, 2);
  if (!(delta > 0)) {
    throw InvalidArgument(fmt::format("sweet_spot_drive: no sweet spot for Delta = {:.4g} GHz (needs Delta > 0)", delta));
  }

  SweetSpot out;
  int best = 0;
  for (int i = 0; i < scan_points; ++i) {
    const double x = lo + (hi - lo) * i / (scan_points - 1);
    out.scan_omega_x.push_back(x);
    out.scan_sensitivity.push_back(eta_tc_sensitivity(params, x));
    if (out.scan_sensitivity.back() < out.scan_sensitivity[best]) best = i;
  }
  if (best == 0 || best == scan_points - 1) {
    throw NumericalError("sweet_spot_drive: minimum is not interior to the scan range");
  }

  // Golden section on the bracketing interval.
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = out.scan_omega_x[best - 1], b = out.scan_omega_x[best + 1];
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = eta_tc_sensitivity(params, c), fd = eta_tc_sensitivity(params, d);
  while (b - a > 1e-7) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = eta_tc_sensitivity(params, c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = eta_tc_sensitivity(params, d);
    }
  }
  out.omega_x = 0.5 * (a + b);
  out.sensitivity = eta_tc_sensitivity(params, out.omega_x);
  return out;
}

double gate_time_factor(SequenceKind kind, double phi) { return build_sequence(kind, phi).duration_multiplier(); }

double decoherence_penalty(SequenceKind kind, double phi, double t_ns, double t2_ns) {
  if (t_ns < 0) throw InvalidArgument("decoherence_penalty: t must be >= 0");
  if (!(t2_ns > 0)) throw InvalidArgument("decoherence_penalty: T2 must be positive");
  const double k = gate_time_factor(kind, phi);
  return std::exp(-(k * k - 1) * t_ns * t_ns / (t2_ns * t2_ns));
}

}  // namespace spinqed
