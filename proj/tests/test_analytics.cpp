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

#include <doctest.h>

#include <cmath>

#include "spinqed/analytics.hpp"
#include "test_util.hpp"

using namespace spinqed;

TEST_CASE("closed forms") {
  const ClosedForms c = closed_forms(0.020, 0.015, 1e-3);
  CHECK(c.eta == doctest::Approx(0.025).epsilon(1e-14));
  CHECK(std::sin(c.chi) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(c.J_tilde == doctest::Approx(0.6e-3).epsilon(1e-14));
  const ClosedForms r = closed_forms(0.0, 0.015, 1e-3);
  CHECK(r.chi == doctest::Approx(kPi / 2));
  CHECK(r.J_tilde == doctest::Approx(1e-3));
  CHECK_THROWS_AS(closed_forms(0.0, 0.0, 1e-3), InvalidArgument);
}

TEST_CASE("psi and zeta") {
  CHECK(psi(kPi) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(psi(0.0) == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(8 / kPi * psi(kPi / 2) + 1 == doctest::Approx(4.08).epsilon(1e-3));
  CHECK(zeta(kPi / 2, 0.02, 0.001, 0.5e-3) == doctest::Approx((4 * psi(kPi / 2) + kPi / 2) * 0.021 / 0.5e-3));
}

TEST_CASE("expansion values") {
  const ExpansionScales sc{1.0, 1.0, 1.0};
  for (Correction c : {Correction::Uncorrected, Correction::TwoQEcho, Correction::OneQPartial, Correction::OneQFull})
    CHECK(predicted_infidelity({c, GateFamily::CR}, ErrorVector{}, sc).infidelity == 0.0);

  ErrorVector e;
  e.delta_eta = 0.1;
  CHECK(predicted_infidelity({Correction::Uncorrected, GateFamily::CR}, e, sc).infidelity ==
        doctest::Approx(4.93e-3).epsilon(1e-3));
  e = ErrorVector{};
  e.delta_omega2 = 0.1;
  CHECK(predicted_infidelity({Correction::OneQPartial, GateFamily::CR}, e, sc).infidelity ==
        doctest::Approx(2.02e-4).epsilon(1e-12));

  e.delta_omega2 = 0.5;
  CHECK_FALSE(predicted_infidelity({Correction::OneQPartial, GateFamily::CR}, e, sc).warnings.empty());
  CHECK_THROWS_AS(predicted_infidelity({Correction::OneQPartial, GateFamily::ISwap}, e, sc), InvalidArgument);
  CHECK_THROWS_AS(predicted_infidelity({Correction::Uncorrected, GateFamily::CR}, e, {0.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("decoherence penalty") {
  const SequenceKind k{Correction::OneQFull, GateFamily::ISwap};
  CHECK(decoherence_penalty(k, kPi, 0.0, 1000.0) == 1.0);
  const double f = gate_time_factor(k, kPi);
  CHECK(f * f - 1 == doctest::Approx(15.6).epsilon(0.01));
  CHECK(decoherence_penalty(k, kPi, 100.0, 1e12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(decoherence_penalty({Correction::Uncorrected, GateFamily::CR}, kPi / 2, 100.0, 300.0) == 1.0);
  CHECK_THROWS_AS(decoherence_penalty(k, kPi, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("sweet spot drive") {
  const DeviceParams p = spinqed::testing::fig1_device();
  const SweetSpot s = sweet_spot_drive(p);
  CHECK(s.omega_x == doctest::Approx(0.0285).epsilon(0.1));
  CHECK(eta_tc_sensitivity(p, 0.015) >= 10 * s.sensitivity);
  CHECK(s.scan_omega_x.size() == 40);

  DeviceParams swapped = p;
  std::swap(swapped.dots[0].omega_z, swapped.dots[1].omega_z);
  CHECK_THROWS_AS(sweet_spot_drive(swapped), InvalidArgument);
  CHECK_THROWS_AS(sweet_spot_drive(p, 0.04, 0.08, 10), NumericalError);
}
