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

#include "spinqed/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "spinqed/fidelity.hpp"

namespace spinqed {

NoiseSpec NoiseSpec::linked(double sigma_epsilon) { return NoiseSpec{sigma_epsilon, sigma_epsilon / 200.0}; }

void NoiseSpec::validate() const {
  if (!std::isfinite(sigma_epsilon) || !std::isfinite(sigma_t) || sigma_epsilon < 0 || sigma_t < 0) {
    throw InvalidArgument("NoiseSpec: sigmas must be finite and >= 0");
  }
}

std::array<double, 4> standard_draw(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  std::mt19937_64 eng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 4> z;
  for (double& v : z) v = normal(eng);
  return z;
}

NoiseSample scale_draw(const std::array<double, 4>& z, const NoiseSpec& spec) {
  NoiseSample s;
  s.delta_epsilon = {spec.sigma_epsilon * z[0], spec.sigma_epsilon * z[1]};
  s.delta_t_c = {spec.sigma_t * z[2], spec.sigma_t * z[3]};
  return s;
}

std::vector<NoiseSample> sample_noise(const NoiseSpec& spec, std::uint64_t seed, int n) {
  spec.validate();
  if (n < 1) throw InvalidArgument("sample_noise: n must be >= 1");
  std::vector<NoiseSample> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(scale_draw(standard_draw(seed, k), spec));
  return out;
}

Sensitivity sensitivity(const std::function<double(const DeviceParams&)>& quantity, const DeviceParams& params,
                        NoiseParameter which) {
  auto eval = [&](int dot, double shift) {
    DeviceParams p = params;
    (which == NoiseParameter::TunnelCoupling ? p.dots[dot].t_c : p.dots[dot].epsilon) += shift;
    try {
      const double v = quantity(p);
      if (!std::isfinite(v)) throw NumericalError("non-finite value");
      return v;
    } catch (const std::exception& e) {
      throw NumericalError(fmt::format("sensitivity: quantity failed at dot {} shift {:.3g} GHz: {}", dot + 1, shift,
                                       e.what()));
    }
  };
  Sensitivity s;
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-4 * params.dots[i].t_c;
    const double d1 = (eval(i, h) - eval(i, -h)) / (2 * h);
    const double d2 = (eval(i, h / 2) - eval(i, -h / 2)) / h;
    s.partial[i] = (4 * d2 - d1) / 3;
    s.total += std::abs(s.partial[i]);
  }
  return s;
}

double model_quantity(const EffectiveModel& m, ModelQuantity q) {
  switch (q) {
    case ModelQuantity::Eta: return m.eta;
    case ModelQuantity::Omega1: return m.omega_1;
    case ModelQuantity::Omega2: return m.omega_2;
    case ModelQuantity::J: return m.J;
    case ModelQuantity::JTilde: return m.J_tilde;
    case ModelQuantity::Chi: return m.chi;
  }
  return 0.0;
}

std::string to_string(ModelQuantity q) {
  switch (q) {
    case ModelQuantity::Eta: return "eta";
    case ModelQuantity::Omega1: return "omega1";
    case ModelQuantity::Omega2: return "omega2";
    case ModelQuantity::J: return "J";
    case ModelQuantity::JTilde: return "J_tilde";
    case ModelQuantity::Chi: return "chi";
  }
  return "?";
}

Sensitivity model_sensitivity(ModelQuantity q, const DeviceParams& params, std::span<const DrivePulse> drives,
                              NoiseParameter which) {
  return sensitivity(
      [&](const DeviceParams& p) { return model_quantity(shifted_model(p, drives, NoiseSample{}), q); }, params,
      which);
}

NoiseContext NoiseContext::build(const DeviceParams& params, std::vector<DrivePulse> drives) {
  NoiseContext ctx;
  ctx.params = params;
  ctx.drives = std::move(drives);
  ctx.nominal = extract_effective_model(ctx.params, ctx.drives);
  return ctx;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0) || !(hi >= lo) || points < 1) throw InvalidArgument("log_grid: need 0 < lo <= hi and points >= 1");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    g[i] = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  }
  return g;
}

namespace {

constexpr double kRejected = std::numeric_limits<double>::quiet_NaN();

struct SequenceTarget {
  const GateSequence* seq;
  Mat4 target;
};

double sample_infidelity(const SequenceTarget& st, const EffectiveModel& nominal, const ErrorVector& errors,
                         const McOptions& opt) {
  const Mat4 u = evaluate_sequence(*st.seq, nominal, errors);
  if (opt.mode == FidelityMode::Fixed) return 1.0 - unitary_fidelity(u, st.target);
  LocalSearchOptions lo;
  lo.restarts = opt.local_restarts;
  lo.seed = 0;
  return 1.0 - maximize_over_local(ProcessMap::from_unitary(u), st.target, lo).fidelity_local_max;
}

// Fills infid[s][k] for every sequence s and sample k of one noise level.
void run_level(std::span<const SequenceTarget> targets, const NoiseSpec& spec, const NoiseContext& ctx,
               const McOptions& opt, std::vector<std::vector<double>>& infid) {
  auto work = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const NoiseSample sample = scale_draw(standard_draw(opt.seed, static_cast<std::uint64_t>(k)), spec);
      ErrorVector err;
      bool ok = true;
      try {
        const DeviceParams shifted = apply_sample(ctx.params, sample);
        shifted.validate();
        err = model_errors(ctx.nominal, shifted_model(ctx.params, ctx.drives, sample));
        ok = err.is_finite();
      } catch (const std::exception&) {
        ok = false;
      }
      for (size_t s = 0; s < targets.size(); ++s) {
        infid[s][k] = ok ? sample_infidelity(targets[s], ctx.nominal, err, opt) : kRejected;
      }
    }
  };
  const int threads = std::clamp(opt.threads, 1, opt.n);
  if (threads == 1) {
    work(0, opt.n);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (opt.n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int b = w * chunk, e = std::min(opt.n, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& t : pool) t.join();
}

McResult reduce(const std::vector<double>& v) {
  McResult r;
  double sum = 0.0;
  for (double x : v) {
    if (std::isnan(x)) {
      ++r.rejected;
    } else {
      sum += x;
      ++r.n_used;
    }
  }
  if (r.n_used == 0) return r;
  r.mean_infidelity = sum / r.n_used;
  double ss = 0.0;
  for (double x : v) {
    if (!std::isnan(x)) ss += (x - r.mean_infidelity) * (x - r.mean_infidelity);
  }
  r.stderr_infidelity = r.n_used > 1 ? std::sqrt(ss / (r.n_used - 1) / r.n_used) : 0.0;
  return r;
}

void check_options(const McOptions& opt) {
  if (opt.n < 1) throw InvalidArgument("monte carlo: n must be >= 1");
  if (opt.local_restarts < 1) throw InvalidArgument("monte carlo: local_restarts must be >= 1");
}

}  // namespace

McResult monte_carlo_infidelity(const GateSequence& seq, const Mat4& target, const NoiseSpec& spec,
                                const NoiseContext& ctx, const McOptions& opt) {
  spec.validate();
  check_options(opt);
  const SequenceTarget st{&seq, target};
  std::vector<std::vector<double>> infid(1, std::vector<double>(opt.n));
  run_level(std::span<const SequenceTarget>(&st, 1), spec, ctx, opt, infid);
  return reduce(infid[0]);
}

std::vector<std::vector<McResult>> monte_carlo_sweep(std::span<const GateSequence> sequences,
                                                     std::span<const NoiseSpec> levels, const NoiseContext& ctx,
                                                     const McOptions& opt) {
  check_options(opt);
  std::vector<SequenceTarget> targets;
  for (const GateSequence& s : sequences) {
    const Mat4 t = opt.mode == FidelityMode::Fixed ? evaluate_sequence(s, ctx.nominal, ErrorVector{})
                                                   : family_target(s.kind.family);
    targets.push_back({&s, t});
  }
  std::vector<std::vector<McResult>> out;
  for (const NoiseSpec& spec : levels) {
    spec.validate();
    std::vector<std::vector<double>> infid(targets.size(), std::vector<double>(opt.n));
    run_level(targets, spec, ctx, opt, infid);
    std::vector<McResult> row;
    for (const auto& v : infid) row.push_back(reduce(v));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace spinqed
