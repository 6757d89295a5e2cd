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

#include "spinqed/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include <Eigen/Core>
#include <fmt/format.h>
#include <json.hpp>

#include "spinqed/analytics.hpp"
#include "spinqed/dynamics.hpp"
#include "spinqed/noise.hpp"
#include "spinqed/sequences.hpp"

namespace spinqed {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Frame rotating at f on both qubits, as a 4×4 unitary.
Mat4 carrier_frame(double f, double t) {
  const Mat4 z = pauli2(3, 0) + pauli2(0, 3);
  return expm_hermitian4(0.5 * f * z, t);
}

ProcessMap conjugate_outputs(const ProcessMap& p, const Mat4& v) {
  ProcessMap out;
  for (size_t i = 0; i < p.images.size(); ++i) out.images[i] = v.adjoint() * p.images[i] * v;
  return out;
}

// Walks a CrSimulation forward, keeping the state on the carrier grid so
// that every sample point is reached along the same path.
class CrWalker {
 public:
  CrWalker(const CrSimulation& sim, int steps_per_period)
      : prop_(sim.propagator(steps_per_period)),
        h_static_(sim.dressed.h0.matrix() + sim.dressed.hi.matrix()),
        t_off_(sim.drive_off()),
        node_(sim.computational_states()) {}

  Mat at(double t) {
    if (t < t_node_ - 1e-12) throw InvalidArgument("cr series: times must be ascending");
    if (t <= t_off_) {
      const double dt = prop_.step();
      const double grid = std::min(t, std::floor(t / dt + 1e-9) * dt);
      if (grid > t_node_) {
        node_ = prop_.evolve(node_, t_node_, grid);
        t_node_ = grid;
      }
      return prop_.evolve(node_, t_node_, t);
    }
    if (!off_) {
      off_ = prop_.evolve(node_, t_node_, t_off_);
      node_ = *off_;
      t_node_ = t_off_;
    }
    return expm_hermitian(h_static_, t - t_off_) * *off_;
  }

 private:
  PeriodicPropagator prop_;
  Mat h_static_;
  double t_off_;
  Mat node_;
  double t_node_ = 0.0;
  std::optional<Mat> off_;
};

}  // namespace

Mat cr_evolved_states(const DeviceParams& params, const std::vector<DrivePulse>& drives, double t,
                      int steps_per_period) {
  const CrSimulation sim = CrSimulation::build(params, drives);
  CrWalker walker(sim, steps_per_period);
  return walker.at(t);
}

std::vector<Mat> cr_evolved_series(const DeviceParams& params, const std::vector<DrivePulse>& drives,
                                   const std::vector<double>& times, int steps_per_period) {
  const CrSimulation sim = CrSimulation::build(params, drives);
  CrWalker walker(sim, steps_per_period);
  std::vector<Mat> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(walker.at(t));
  return out;
}

std::vector<CrPoint> cr_fidelity_series(const DeviceParams& params, const std::vector<DrivePulse>& drives,
                                        const CrSeriesOptions& opt) {
  if (opt.times.empty()) throw InvalidArgument("cr series: no sample times");
  const CrSimulation sim = CrSimulation::build(params, drives);
  const Embedding emb = sim.embedding();
  CrWalker walker(sim, opt.steps_per_period);
  const Mat4 cnot = cnot_gate();

  std::vector<CrPoint> out;
  for (size_t i = 0; i < opt.times.size(); ++i) {
    const double t = opt.times[i];
    if (!std::isfinite(t) || t < 0) throw InvalidArgument("cr series: times must be finite and >= 0");
    const Mat psi = walker.at(t);
    const ProcessMap process =
        conjugate_outputs(reconstruct_process(psi, emb, opt.reduction), carrier_frame(sim.carrier(), t));
    LocalSearchOptions lo;
    lo.restarts = i + 1 == opt.times.size() ? opt.final_restarts : opt.restarts;
    lo.seed = opt.seed;
    lo.threads = opt.threads;
    CrPoint p;
    p.t = t;
    p.report = maximize_over_local(process, cnot, lo);
    p.report.leakage = leakage(psi, emb);
    out.push_back(p);
  }
  return out;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.10g}", v);
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& hash, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::ios_base::failure("cannot open " + path.string());
    out_ << "# config_hash=" << hash << '\n';
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw std::ios_base::failure("write failed");
  }

 private:
  std::ofstream out_;
};

struct Context {
  const ExperimentConfig& config;
  const RunOptions& options;
  fs::path dir;
  std::string hash;
  std::vector<std::string> files;
  std::vector<std::string> warnings;

  void log(const std::string& msg) const {
    if (options.log) *options.log << msg << '\n';
  }
  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    files.push_back(name);
    return CsvWriter(dir / name, hash, header);
  }
};

// Drives for a device point; Ωˣ targets are re-solved and an "auto" carrier
// follows the dressed target-qubit frequency of `params`.
std::vector<DrivePulse> drives_for(const ExperimentConfig& c, const DeviceParams& params) {
  ExperimentConfig copy = c;
  copy.device = params;
  return resolve_drives(copy);
}

Json model_json(const EffectiveModel& m) {
  Json j;
  j["omega_1_GHz"] = m.omega_1;
  j["omega_2_GHz"] = m.omega_2;
  j["J_GHz"] = m.J;
  if (m.has_control_drive) {
    j["Omega_1x_GHz"] = m.Omega_x[0];
    j["Omega_2x_GHz"] = m.Omega_x[1];
    j["delta_1_GHz"] = m.delta_1;
    j["eta_GHz"] = m.eta;
    j["chi_rad"] = m.chi;
    j["J_tilde_GHz"] = m.J_tilde;
  }
  j["sw_residual"] = m.sw_residual;
  return j;
}

Json run_cr_fidelity(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const auto drives = resolve_drives(c);
  const EffectiveModel model = extract_effective_model(c.device, drives);
  for (const auto& w : model.warnings) ctx.warnings.push_back(w);

  const SimulationConfig& s = c.simulation;
  CrSeriesOptions opt;
  for (int k = 0;; ++k) {
    const double t = k * s.sample_interval;
    if (t >= s.t_end - 1e-9) break;
    opt.times.push_back(t);
  }
  opt.times.push_back(s.t_end);
  opt.steps_per_period = s.steps_per_period;
  opt.reduction = s.reduction;
  opt.restarts = std::min(s.local_restarts, 8);
  opt.final_restarts = s.local_restarts;
  opt.seed = c.seed;
  opt.threads = ctx.options.threads;
  ctx.log(fmt::format("cr-fidelity: {} sample points, carrier {:.6f} GHz, amplitude {:.6f} GHz", opt.times.size(),
                      drives.front().frequency, drives.front().amplitude));
  const auto series = cr_fidelity_series(c.device, drives, opt);

  CsvWriter w = ctx.csv("cr_fidelity.csv", {"t_ns", "fidelity_raw", "fidelity_local_max", "leakage"});
  for (const CrPoint& p : series) {
    w.row({num(p.t), num(p.report.fidelity_raw), num(p.report.fidelity_local_max), num(p.report.leakage)});
  }
  const CrPoint& last = series.back();
  if (!last.report.converged) ctx.warnings.push_back("local maximization at the final point did not converge");
  Json h;
  h["t_final_ns"] = last.t;
  h["fidelity_raw"] = last.report.fidelity_raw;
  h["fidelity_local_max"] = last.report.fidelity_local_max;
  h["leakage"] = last.report.leakage;
  h["local_max_converged"] = last.report.converged;
  h["drive_amplitude_GHz"] = drives.front().amplitude;
  h["drive_frequency_GHz"] = drives.front().frequency;
  h["cnot_time_sw_estimate_ns"] = model.J_tilde > 0 ? 0.25 / model.J_tilde : kNaN;
  h["model"] = model_json(model);
  return h;
}

struct QuantitySpec {
  ModelQuantity q;
  std::string label;
  bool normalize;
};

Json run_sensitivities(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const SweepConfig& sw = c.sweep;
  const bool cr = sw.gate == GateFamily::CR;
  std::vector<QuantitySpec> quantities;
  if (cr) {
    quantities = {{ModelQuantity::Eta, "eta/J_tilde", true},
                  {ModelQuantity::Omega2, "omega2/J_tilde", true},
                  {ModelQuantity::JTilde, "J_tilde/J_tilde", true},
                  {ModelQuantity::Chi, "chi", false}};
  } else {
    quantities = {{ModelQuantity::Omega1, "omega1/J", true},
                  {ModelQuantity::Omega2, "omega2/J", true},
                  {ModelQuantity::J, "J/J", true}};
  }

  CsvWriter w = ctx.csv("sensitivities.csv",
                        {"two_t_c_GHz", "quantity", "sensitivity_ns", "signed_dot1_ns", "signed_dot2_ns"});
  std::vector<double> grid, eta_dot1;
  const int n = sw.two_t_c_points;
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? sw.two_t_c_min : sw.two_t_c_min + (sw.two_t_c_max - sw.two_t_c_min) * i / (n - 1);
    DeviceParams p = c.device;
    p.dots[0].t_c = p.dots[1].t_c = 0.5 * x;
    p.validate();
    const std::vector<DrivePulse> drives = cr ? drives_for(c, p) : std::vector<DrivePulse>{};
    const EffectiveModel m = shifted_model(p, drives, NoiseSample{});
    const double scale = cr ? m.J_tilde : m.J;
    if (!(std::abs(scale) > 0)) throw NumericalError(fmt::format("sensitivities: zero coupling at 2t_c = {}", x));
    for (const QuantitySpec& qs : quantities) {
      const Sensitivity s = model_sensitivity(qs.q, p, drives);
      const double k = qs.normalize ? 1.0 / std::abs(scale) : 1.0;
      w.row({num(x), qs.label, num(s.total * k), num(s.partial[0] * k), num(s.partial[1] * k)});
      if (qs.q == ModelQuantity::Eta) {
        grid.push_back(x);
        eta_dot1.push_back(s.partial[0]);
      }
    }
    ctx.log(fmt::format("sensitivities: 2t_c = {:.4f} GHz done", x));
  }

  Json h;
  h["gate"] = to_string(sw.gate);
  h["points"] = n;
  if (cr) {
    Json crossings = Json::array();
    for (size_t i = 1; i < grid.size(); ++i) {
      if ((eta_dot1[i - 1] < 0) != (eta_dot1[i] < 0)) {
        const double f = eta_dot1[i - 1] / (eta_dot1[i - 1] - eta_dot1[i]);
        crossings.push_back(grid[i - 1] + f * (grid[i] - grid[i - 1]));
      }
    }
    h["deta_dtc1_zero_crossings_GHz"] = crossings;
  }
  return h;
}

Json run_noise_sweep(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const SweepConfig& sw = c.sweep;
  std::vector<NoiseSpec> levels;
  if (c.noise.sigma_epsilon > 0) {
    levels.push_back({c.noise.sigma_epsilon, c.noise.sigma_t.value_or(c.noise.sigma_epsilon / 200.0)});
  } else {
    for (double s : log_grid(sw.sigma_min, sw.sigma_max, sw.sigma_points)) levels.push_back(NoiseSpec::linked(s));
  }
  const auto drives = sw.gate == GateFamily::CR ? resolve_drives(c) : std::vector<DrivePulse>{};
  const NoiseContext nctx = NoiseContext::build(c.device, drives);
  for (const auto& w : nctx.nominal.warnings) ctx.warnings.push_back(w);

  std::vector<GateSequence> seqs;
  for (Correction corr : sw.sequences) {
    seqs.push_back(build_sequence({corr, sw.gate}, default_angle(sw.gate)));
  }
  McOptions mc;
  mc.n = c.noise.samples;
  mc.seed = c.seed;
  mc.threads = ctx.options.threads;
  mc.mode = c.noise.fidelity_mode;
  mc.local_restarts = c.noise.local_restarts;
  ctx.log(fmt::format("noise-sweep: {} levels x {} sequences x {} samples", levels.size(), seqs.size(), mc.n));
  const auto results = monte_carlo_sweep(seqs, levels, nctx, mc);

  CsvWriter w =
      ctx.csv("noise_sweep.csv", {"sigma_epsilon", "sigma_t", "sequence", "mean_infidelity", "stderr", "n", "rejected"});
  for (size_t l = 0; l < levels.size(); ++l) {
    for (size_t s = 0; s < seqs.size(); ++s) {
      const McResult& r = results[l][s];
      w.row({num(levels[l].sigma_epsilon), num(levels[l].sigma_t), to_string(seqs[s].kind),
             num(r.n_used ? r.mean_infidelity : kNaN), num(r.n_used ? r.stderr_infidelity : kNaN),
             std::to_string(r.n_used), std::to_string(r.rejected)});
      if (r.rejected > 0) {
        ctx.warnings.push_back(fmt::format("{} samples rejected at sigma_epsilon = {}", r.rejected,
                                           levels[l].sigma_epsilon));
      }
    }
  }

  Json h;
  h["fidelity_mode"] = c.noise.fidelity_mode == FidelityMode::Fixed ? "fixed" : "local";
  h["samples"] = mc.n;
  Json slopes;
  if (levels.size() >= 2) {
    for (size_t s = 0; s < seqs.size(); ++s) {
      const double a = results[0][s].mean_infidelity, b = results[1][s].mean_infidelity;
      slopes[to_string(seqs[s].kind)] =
          a > 0 && b > 0 ? std::log(b / a) / std::log(levels[1].sigma_epsilon / levels[0].sigma_epsilon) : kNaN;
    }
    h["small_sigma_loglog_slope"] = slopes;
  }
  Json at_min;
  for (size_t s = 0; s < seqs.size(); ++s) at_min[to_string(seqs[s].kind)] = results[0][s].mean_infidelity;
  h["mean_infidelity_at_first_level"] = at_min;
  return h;
}

Json run_sweet_spot(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const SweepConfig& sw = c.sweep;
  ctx.log(fmt::format("sweet-spot: scanning {} points in [{}, {}] GHz", sw.omega_x_points, sw.omega_x_min,
                      sw.omega_x_max));
  const SweetSpot spot = sweet_spot_drive(c.device, sw.omega_x_min, sw.omega_x_max, sw.omega_x_points);
  CsvWriter w = ctx.csv("sweet_spot.csv", {"omega_1x_GHz", "sum_abs_deta_dtc"});
  for (size_t i = 0; i < spot.scan_omega_x.size(); ++i) {
    w.row({num(spot.scan_omega_x[i]), num(spot.scan_sensitivity[i])});
  }
  const double reference = eta_tc_sensitivity(c.device, 0.015);
  Json h;
  h["omega_1x_GHz"] = spot.omega_x;
  h["sensitivity_at_minimum"] = spot.sensitivity;
  h["sensitivity_at_15MHz"] = reference;
  h["reduction_vs_15MHz"] = spot.sensitivity > 0 ? reference / spot.sensitivity : kNaN;
  return h;
}

// min over φ of ‖u − e^{iφ}v‖_F, computed directly to keep precision.
double phase_free_distance(const Mat4& u, const Mat4& v) {
  const cplx tr = (v.adjoint() * u).trace();
  const cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
  return (u - phase * v).norm();
}

Json run_sequence_check(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const auto drives = resolve_drives(c);
  const EffectiveModel cr_model = extract_effective_model(c.device, drives);
  for (const auto& w : cr_model.warnings) ctx.warnings.push_back(w);
  // Zero-noise iSWAP sequences only see J; use a resonant copy.
  EffectiveModel iswap_model = cr_model;
  iswap_model.omega_2 = iswap_model.omega_1;

  const std::vector<SequenceKind> kinds = {
      {Correction::Uncorrected, GateFamily::CR}, {Correction::TwoQEcho, GateFamily::CR},
      {Correction::OneQPartial, GateFamily::CR}, {Correction::OneQFull, GateFamily::CR},
      {Correction::Uncorrected, GateFamily::ISwap}, {Correction::OneQFull, GateFamily::ISwap}};

  CsvWriter w = ctx.csv("sequence_check.csv",
                        {"sequence", "duration_factor", "local_max_residual", "identity_residual"});
  std::ofstream listing(ctx.dir / "sequences.txt");
  ctx.files.push_back("sequences.txt");
  Json factors, residuals;
  double identity = kNaN;
  for (const SequenceKind& k : kinds) {
    const double phi = default_angle(k.family);
    const GateSequence seq = build_sequence(k, phi);
    const EffectiveModel& m = k.family == GateFamily::CR ? cr_model : iswap_model;
    const Mat4 u = evaluate_sequence(seq, m, ErrorVector{});
    LocalSearchOptions lo;
    lo.restarts = 8;
    lo.seed = c.seed;
    const double local = 1.0 - maximize_over_local(ProcessMap::from_unitary(u), family_target(k.family), lo)
                                   .fidelity_local_max;
    double ident = kNaN;
    if (k == SequenceKind{Correction::OneQPartial, GateFamily::CR}) {
      const Mat4 z1 = pauli2(3, 0), zx = pauli2(3, 1);
      const double zt = zeta(phi, m.eta, 0.0, m.J_tilde);
      const Mat4 expected = expm_hermitian4(zt / (2 * kTwoPi) * z1, 1.0) *
                            expm_hermitian4((phi + kPi) / (2 * kTwoPi) * zx, 1.0);
      ident = identity = phase_free_distance(u, expected);
    }
    w.row({to_string(k), num(seq.duration_multiplier()), num(local), num(ident)});
    listing << "## " << to_string(k) << " phi=" << num(phi) << '\n' << seq.listing() << '\n';
    factors[to_string(k)] = seq.duration_multiplier();
    residuals[to_string(k)] = local;
  }
  if (!listing) throw std::ios_base::failure("cannot write sequences.txt");
  Json h;
  h["duration_factors"] = factors;
  h["local_max_residuals"] = residuals;
  h["cr_1qpartial_identity_distance"] = identity;
  h["model"] = model_json(cr_model);
  return h;
}

Json versions() {
  Json v;
  v["spinqed"] = kVersion;
  v["eigen"] = fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
  v["fmt"] = FMT_VERSION;
  v["nlohmann_json"] = fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                   NLOHMANN_JSON_VERSION_PATCH);
  return v;
}

}  // namespace

int run_experiment(ExperimentConfig config, const RunOptions& options) {
  auto report = [&](const std::string& kind, const std::string& what) {
    if (options.log) *options.log << "error (" << kind << "): " << what << '\n';
  };
  try {
    if (options.seed) config.seed = *options.seed;
    if (options.output_dir) config.output_dir = *options.output_dir;
    if (options.threads < 1) throw InvalidArgument("threads must be >= 1");
    config.device.validate();

    Context ctx{config, options, fs::path(config.output_dir), config_hash(config), {}, {}};
    fs::create_directories(ctx.dir);
    Json headline;
    switch (config.experiment) {
      case ExperimentKind::CrFidelity: headline = run_cr_fidelity(ctx); break;
      case ExperimentKind::Sensitivities: headline = run_sensitivities(ctx); break;
      case ExperimentKind::NoiseSweep: headline = run_noise_sweep(ctx); break;
      case ExperimentKind::SweetSpot: headline = run_sweet_spot(ctx); break;
      case ExperimentKind::SequenceCheck: headline = run_sequence_check(ctx); break;
    }
    for (const auto& w : ctx.warnings) ctx.log("warning: " + w);

    Json summary;
    summary["experiment"] = to_string(config.experiment);
    summary["config_hash"] = ctx.hash;
    summary["seed"] = config.seed;
    summary["versions"] = versions();
    summary["files"] = ctx.files;
    summary["warnings"] = ctx.warnings;
    summary["headline"] = headline;
    std::ofstream js(ctx.dir / "summary.json");
    js << summary.dump(2) << '\n';
    if (!js) throw std::ios_base::failure("cannot write summary.json");
    ctx.log(fmt::format("wrote {} files to {}", ctx.files.size() + 1, ctx.dir.string()));
    return 0;
  } catch (const ConfigError& e) {
    report("config", e.what());
    return 2;
  } catch (const InvalidArgument& e) {
    report("invalid input", e.what());
    return 2;
  } catch (const NumericalError& e) {
    report("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    report("io", e.what());
    return 1;
  }
}

}  // namespace spinqed
