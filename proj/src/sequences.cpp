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

#include "spinqed/sequences.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spinqed/analytics.hpp"
#include "spinqed/dynamics.hpp"
#include "spinqed/fidelity.hpp"

namespace spinqed {

std::string to_string(Correction c) {
  switch (c) {
    case Correction::Uncorrected: return "uncorrected";
    case Correction::TwoQEcho: return "2qecho";
    case Correction::OneQPartial: return "1qpartial";
    case Correction::OneQFull: return "1qfull";
  }
  return "?";
}

std::string to_string(GateFamily g) { return g == GateFamily::CR ? "cr" : "iswap"; }

std::string to_string(const SequenceKind& k) { return to_string(k.family) + "-" + to_string(k.correction); }

Correction parse_correction(std::string_view s) {
  if (s == "uncorrected") return Correction::Uncorrected;
  if (s == "2qecho") return Correction::TwoQEcho;
  if (s == "1qpartial") return Correction::OneQPartial;
  if (s == "1qfull") return Correction::OneQFull;
  throw InvalidArgument(fmt::format("unknown sequence '{}'", s));
}

GateFamily parse_family(std::string_view s) {
  if (s == "cr") return GateFamily::CR;
  if (s == "iswap") return GateFamily::ISwap;
  throw InvalidArgument(fmt::format("unknown gate family '{}'", s));
}

double GateSequence::total_evolution_angle() const {
  double acc = 0.0;
  for (const Segment& s : segments) {
    if (const auto* e = std::get_if<Evolve>(&s)) acc += std::abs(e->angle);
  }
  return acc;
}

double GateSequence::duration_multiplier() const { return total_evolution_angle() / target_angle; }

std::string GateSequence::listing() const {
  std::string out = fmt::format("# {} phi={:.6f}\n", to_string(kind), target_angle);
  for (const Segment& s : segments) {
    if (const auto* e = std::get_if<Evolve>(&s)) {
      static constexpr const char* kNames[] = {"U1", "U12", "Uiswap"};
      out += fmt::format("evolve {} angle={:.6f}\n", kNames[static_cast<int>(e->kind)], e->angle);
    } else {
      const auto& p = std::get<LocalPulse>(s);
      out += fmt::format("pulse {}{} angle={:.6f}\n", p.axis, p.qubit, p.angle);
    }
  }
  return out;
}

Mat4 cr_segment(const EffectiveModel& model, const ErrorVector& errors, double phi, bool double_drive,
                double omega_2x) {
  if (!(model.J_tilde > 0)) throw InvalidArgument("cr_segment: requires J_tilde > 0");
  Mat4 h = ddf_hamiltonian(model, errors);
  if (double_drive) h += 0.5 * (omega_2x + errors.delta_Omega2x) * pauli2(0, 1);
  const double t = phi / (kTwoPi * model.J_tilde);
  Mat4 u = expm_hermitian4(h, t);
  if (errors.delta_chi != 0.0) {
    const Mat4 r = local_rotation(2, 1, errors.delta_chi);
    u = r.adjoint() * u * r;
  }
  return u;
}

Mat4 iswap_segment(const EffectiveModel& model, const ErrorVector& errors, double phi) {
  if (!(model.J > 0)) throw InvalidArgument("iswap_segment: requires J > 0");
  return expm_hermitian4(df_iswap_hamiltonian(model, errors), phi / (2.0 * kTwoPi * model.J));
}

namespace {

void append_partial(std::vector<Segment>& out, EvolveKind kind, double phi) {
  const double s = psi(phi);
  out.push_back(Evolve{kind, s - phi / 2});
  out.push_back(LocalPulse{'z', 2, kPi});
  out.push_back(Evolve{kind, 2 * s + kPi});
  out.push_back(LocalPulse{'z', 2, kPi});
  out.push_back(Evolve{kind, s - phi / 2});
}

void append_yy(std::vector<Segment>& out) {
  out.push_back(LocalPulse{'y', 1, kPi});
  out.push_back(LocalPulse{'y', 2, kPi});
}

}  // namespace

GateSequence build_sequence(SequenceKind kind, double phi) {
  if (!(phi > 0) || phi > kTwoPi + 1e-12) throw InvalidArgument("build_sequence: phi must lie in (0, 2pi]");
  if (kind.correction == Correction::TwoQEcho && kind.family == GateFamily::ISwap) {
    throw InvalidArgument("build_sequence: 2qecho is defined for the cross-resonance gate only");
  }
  GateSequence seq;
  seq.kind = kind;
  seq.target_angle = phi;
  const EvolveKind ek = kind.family == GateFamily::ISwap ? EvolveKind::ISwap : EvolveKind::CrSingle;
  switch (kind.correction) {
    case Correction::Uncorrected:
      seq.segments.push_back(Evolve{ek, phi});
      break;
    case Correction::TwoQEcho:
      for (int rep = 0; rep < 2; ++rep) {
        seq.segments.push_back(Evolve{EvolveKind::CrDouble, phi / 2});
        append_yy(seq.segments);
      }
      break;
    case Correction::OneQPartial:
      append_partial(seq.segments, ek, phi);
      break;
    case Correction::OneQFull:
      for (int rep = 0; rep < 2; ++rep) {
        append_partial(seq.segments, ek, phi / 2);
        append_yy(seq.segments);
      }
      break;
  }
  return seq;
}

Mat4 evaluate_sequence(const GateSequence& seq, const EffectiveModel& model, const ErrorVector& errors) {
  Mat4 u = Mat4::Identity();
  for (const Segment& s : seq.segments) {
    if (const auto* e = std::get_if<Evolve>(&s)) {
      switch (e->kind) {
        case EvolveKind::CrSingle: u = cr_segment(model, errors, e->angle, false, 0.0) * u; break;
        case EvolveKind::CrDouble: u = cr_segment(model, errors, e->angle, true, model.Omega_x[1]) * u; break;
        case EvolveKind::ISwap: u = iswap_segment(model, errors, e->angle) * u; break;
      }
    } else {
      const auto& p = std::get<LocalPulse>(s);
      const int axis = p.axis == 'x' ? 1 : p.axis == 'y' ? 2 : p.axis == 'z' ? 3 : 0;
      if (axis == 0) throw InvalidArgument(fmt::format("evaluate_sequence: bad pulse axis '{}'", p.axis));
      u = local_rotation(axis, p.qubit, p.angle) * u;
    }
  }
  return u;
}

Mat4 family_target(GateFamily family) { return family == GateFamily::CR ? cnot_gate() : iswap_gate(); }

double default_angle(GateFamily family) { return family == GateFamily::CR ? kPi / 2 : kPi; }

}  // namespace spinqed
