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

#include "spinqed/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

namespace spinqed {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::CrFidelity: return "cr-fidelity";
    case ExperimentKind::Sensitivities: return "sensitivities";
    case ExperimentKind::NoiseSweep: return "noise-sweep";
    case ExperimentKind::SweetSpot: return "sweet-spot";
    case ExperimentKind::SequenceCheck: return "sequence-check";
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view s) {
  for (auto k : {ExperimentKind::CrFidelity, ExperimentKind::Sensitivities, ExperimentKind::NoiseSweep,
                 ExperimentKind::SweetSpot, ExperimentKind::SequenceCheck}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument(fmt::format("unknown experiment '{}'", s));
}

namespace {

std::string join_lines(const std::vector<std::string>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += '\n';
    out += e;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

// Allowed keys per section; the boolean marks keys that are always required.
const std::map<std::string, std::map<std::string, bool>>& schema() {
  static const std::map<std::string, std::map<std::string, bool>> s = [] {
    std::map<std::string, std::map<std::string, bool>> m;
    m["experiment"] = {{"name", true}, {"seed", false}};
    m["device"] = {{"omega_r", true}, {"n_fock", false}};
    for (const char* dot : {"dot1", "dot2"}) {
      m[dot] = {{"epsilon", false}, {"t_c", true}, {"omega_z", true}, {"g_ac", true}, {"g_x", true}};
    }
    for (const char* drv : {"drive1", "drive2"}) {
      m[drv] = {{"amplitude", false}, {"omega_x", false}, {"frequency", false},
                {"phase", false},     {"t_on", false},    {"t_off", false}};
    }
    m["simulation"] = {{"t_end", false},
                       {"sample_interval", false},
                       {"steps_per_period", false},
                       {"local_restarts", false},
                       {"reduction", false}};
    m["noise"] = {{"sigma_epsilon", false},
                  {"sigma_t", false},
                  {"samples", false},
                  {"fidelity_mode", false},
                  {"local_restarts", false}};
    m["sweep"] = {{"gate", false},           {"sequences", false},      {"sigma_min", false},
                  {"sigma_max", false},      {"sigma_points", false},   {"two_t_c_min", false},
                  {"two_t_c_max", false},    {"two_t_c_points", false}, {"omega_x_min", false},
                  {"omega_x_max", false},    {"omega_x_points", false}};
    m["output"] = {{"dir", false}};
    return m;
  }();
  return s;
}

class Reader {
 public:
  Reader(std::map<std::string, std::map<std::string, Entry>> data, std::vector<std::string>& errors)
      : data_(std::move(data)), errors_(errors) {}

  bool has_section(const std::string& s) const { return data_.count(s) > 0; }

  const Entry* find(const std::string& s, const std::string& k) const {
    auto it = data_.find(s);
    if (it == data_.end()) return nullptr;
    auto jt = it->second.find(k);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  int line(const std::string& s, const std::string& k) const {
    const Entry* e = find(s, k);
    return e ? e->line : 0;
  }

  void require(const std::string& s, const std::string& k) {
    if (!find(s, k)) errors_.push_back(fmt::format("missing required key {}.{}", s, k));
  }

  std::optional<double> number(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    double v = 0.0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      errors_.push_back(fmt::format("line {}: {}.{} expects a finite number, got '{}'", e->line, s, k, e->value));
      return std::nullopt;
    }
    return v;
  }

  std::optional<long long> integer(const std::string& s, const std::string& k) {
    const Entry* e = find(s, k);
    if (!e) return std::nullopt;
    long long v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) {
      errors_.push_back(fmt::format("line {}: {}.{} expects an integer, got '{}'", e->line, s, k, e->value));
      return std::nullopt;
    }
    return v;
  }

  void error(const std::string& s, const std::string& k, const std::string& msg) {
    const int l = line(s, k);
    errors_.push_back(l > 0 ? fmt::format("line {}: {}.{}: {}", l, s, k, msg) : fmt::format("{}.{}: {}", s, k, msg));
  }

 private:
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::vector<std::string>& errors_;
};

template <typename T>
void assign(std::optional<T> v, T& out) {
  if (v) out = *v;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto c = s.find(',');
    const std::string_view item = trim(s.substr(0, c));
    if (!item.empty()) out.emplace_back(item);
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_lines(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  std::map<std::string, std::map<std::string, Entry>> data;
  std::string section;
  int line_no = 0;
  bool section_known = false;

  while (!text.empty() || line_no == 0) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view ln = trim(raw);
    if (ln.empty()) {
      if (text.empty()) break;
      continue;
    }
    if (ln.front() == '[') {
      if (ln.back() != ']') {
        errors.push_back(fmt::format("line {}: malformed section header", line_no));
        section_known = false;
        continue;
      }
      section = std::string(trim(ln.substr(1, ln.size() - 2)));
      section_known = schema().count(section) > 0;
      if (!section_known) {
        errors.push_back(fmt::format("line {}: unknown section [{}]", line_no, section));
      } else if (data.count(section)) {
        errors.push_back(fmt::format("line {}: duplicate section [{}]", line_no, section));
      } else {
        data[section];
      }
      continue;
    }
    const auto eq = ln.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(fmt::format("line {}: expected 'key = value'", line_no));
      continue;
    }
    const std::string key(trim(ln.substr(0, eq)));
    const std::string value(trim(ln.substr(eq + 1)));
    if (section.empty()) {
      errors.push_back(fmt::format("line {}: key '{}' outside any section", line_no, key));
      continue;
    }
    if (!section_known) continue;
    if (!schema().at(section).count(key)) {
      errors.push_back(fmt::format("line {}: unknown key '{}' in [{}]", line_no, key, section));
      continue;
    }
    if (value.empty()) {
      errors.push_back(fmt::format("line {}: empty value for {}.{}", line_no, section, key));
      continue;
    }
    if (data[section].count(key)) {
      errors.push_back(fmt::format("line {}: duplicate key {}.{}", line_no, section, key));
      continue;
    }
    data[section][key] = Entry{value, line_no};
  }

  Reader r(std::move(data), errors);
  for (const auto& [sec, keys] : schema()) {
    if (sec.rfind("drive", 0) == 0) continue;
    for (const auto& [key, required] : keys) {
      if (required) r.require(sec, key);
    }
  }

  ExperimentConfig c;
  if (const Entry* e = r.find("experiment", "name")) {
    try {
      c.experiment = parse_experiment(e->value);
    } catch (const InvalidArgument& ex) {
      r.error("experiment", "name", ex.what());
    }
  }
  if (auto v = r.integer("experiment", "seed")) {
    if (*v < 0) r.error("experiment", "seed", "must be >= 0");
    else c.seed = static_cast<std::uint64_t>(*v);
  }

  assign(r.number("device", "omega_r"), c.device.omega_r);
  if (r.find("device", "omega_r") && !(c.device.omega_r > 0)) r.error("device", "omega_r", "must be positive");
  if (auto v = r.integer("device", "n_fock")) {
    if (*v < 2) r.error("device", "n_fock", "must be >= 2");
    else c.device.n_fock = static_cast<int>(*v);
  }
  for (int i = 0; i < 2; ++i) {
    const std::string s = fmt::format("dot{}", i + 1);
    DotParams& d = c.device.dots[i];
    assign(r.number(s, "epsilon"), d.epsilon);
    assign(r.number(s, "t_c"), d.t_c);
    assign(r.number(s, "omega_z"), d.omega_z);
    assign(r.number(s, "g_ac"), d.g_ac);
    assign(r.number(s, "g_x"), d.g_x);
    if (r.find(s, "t_c") && !(d.t_c > 0)) r.error(s, "t_c", "must be positive");
    if (r.find(s, "omega_z") && !(d.omega_z > 0)) r.error(s, "omega_z", "must be positive");
    if (r.find(s, "g_ac") && d.g_ac < 0) r.error(s, "g_ac", "must be >= 0");
    if (r.find(s, "g_x") && d.g_x < 0) r.error(s, "g_x", "must be >= 0");
    if (r.find(s, "t_c") && r.find(s, "omega_z") && d.t_c > 0 && !(2 * d.t_c > d.omega_z)) {
      r.error(s, "t_c", fmt::format("requires 2 t_c > omega_z (2 t_c = {}, omega_z = {})", 2 * d.t_c, d.omega_z));
    }
  }

  for (int i = 0; i < 2; ++i) {
    const std::string s = fmt::format("drive{}", i + 1);
    if (!r.has_section(s)) continue;
    DriveConfig d;
    d.amplitude = r.number(s, "amplitude");
    d.omega_x = r.number(s, "omega_x");
    if (const Entry* e = r.find(s, "frequency"); e && e->value != "auto") d.frequency = r.number(s, "frequency");
    assign(r.number(s, "phase"), d.phase);
    assign(r.number(s, "t_on"), d.t_on);
    assign(r.number(s, "t_off"), d.t_off);
    const bool has_amp = r.find(s, "amplitude") != nullptr, has_ox = r.find(s, "omega_x") != nullptr;
    if (has_amp == has_ox) {
      errors.push_back(fmt::format("[{}]: exactly one of amplitude or omega_x is required", s));
    }
    if (d.amplitude && *d.amplitude < 0) r.error(s, "amplitude", "must be >= 0");
    if (d.omega_x && *d.omega_x < 0) r.error(s, "omega_x", "must be >= 0");
    if (d.frequency && !(*d.frequency > 0)) r.error(s, "frequency", "must be positive");
    if (!r.find(s, "t_off")) {
      errors.push_back(fmt::format("missing required key {}.t_off", s));
    } else if (!(d.t_off > d.t_on)) {
      r.error(s, "t_off", "must exceed t_on");
    }
    (i == 0 ? c.drive1 : c.drive2) = d;
  }

  assign(r.number("simulation", "t_end"), c.simulation.t_end);
  assign(r.number("simulation", "sample_interval"), c.simulation.sample_interval);
  if (auto v = r.integer("simulation", "steps_per_period")) c.simulation.steps_per_period = static_cast<int>(*v);
  if (auto v = r.integer("simulation", "local_restarts")) c.simulation.local_restarts = static_cast<int>(*v);
  if (const Entry* e = r.find("simulation", "reduction")) {
    if (e->value == "project") c.simulation.reduction = Reduction::Project;
    else if (e->value == "partial-trace") c.simulation.reduction = Reduction::PartialTrace;
    else r.error("simulation", "reduction", "expects 'project' or 'partial-trace'");
  }
  if (!(c.simulation.t_end > 0)) r.error("simulation", "t_end", "must be positive");
  if (!(c.simulation.sample_interval > 0)) r.error("simulation", "sample_interval", "must be positive");
  if (c.simulation.steps_per_period < 1) r.error("simulation", "steps_per_period", "must be >= 1");
  if (c.simulation.local_restarts < 1) r.error("simulation", "local_restarts", "must be >= 1");

  assign(r.number("noise", "sigma_epsilon"), c.noise.sigma_epsilon);
  c.noise.sigma_t = r.number("noise", "sigma_t");
  if (auto v = r.integer("noise", "samples")) c.noise.samples = static_cast<int>(*v);
  if (auto v = r.integer("noise", "local_restarts")) c.noise.local_restarts = static_cast<int>(*v);
  if (const Entry* e = r.find("noise", "fidelity_mode")) {
    if (e->value == "fixed") c.noise.fidelity_mode = FidelityMode::Fixed;
    else if (e->value == "local") c.noise.fidelity_mode = FidelityMode::Local;
    else r.error("noise", "fidelity_mode", "expects 'fixed' or 'local'");
  }
  if (c.noise.sigma_epsilon < 0) r.error("noise", "sigma_epsilon", "must be >= 0");
  if (c.noise.sigma_t && *c.noise.sigma_t < 0) r.error("noise", "sigma_t", "must be >= 0");
  if (c.noise.samples < 1) r.error("noise", "samples", "must be >= 1");
  if (c.noise.local_restarts < 1) r.error("noise", "local_restarts", "must be >= 1");

  SweepConfig& sw = c.sweep;
  if (const Entry* e = r.find("sweep", "gate")) {
    try {
      sw.gate = parse_family(e->value);
    } catch (const InvalidArgument& ex) {
      r.error("sweep", "gate", ex.what());
    }
  }
  if (const Entry* e = r.find("sweep", "sequences")) {
    for (const std::string& item : split_list(e->value)) {
      try {
        sw.sequences.push_back(parse_correction(item));
      } catch (const InvalidArgument& ex) {
        r.error("sweep", "sequences", ex.what());
      }
    }
  }
  assign(r.number("sweep", "sigma_min"), sw.sigma_min);
  assign(r.number("sweep", "sigma_max"), sw.sigma_max);
  if (auto v = r.integer("sweep", "sigma_points")) sw.sigma_points = static_cast<int>(*v);
  assign(r.number("sweep", "two_t_c_min"), sw.two_t_c_min);
  assign(r.number("sweep", "two_t_c_max"), sw.two_t_c_max);
  if (auto v = r.integer("sweep", "two_t_c_points")) sw.two_t_c_points = static_cast<int>(*v);
  assign(r.number("sweep", "omega_x_min"), sw.omega_x_min);
  assign(r.number("sweep", "omega_x_max"), sw.omega_x_max);
  if (auto v = r.integer("sweep", "omega_x_points")) sw.omega_x_points = static_cast<int>(*v);
  if (!(sw.sigma_min > 0) || !(sw.sigma_max >= sw.sigma_min)) r.error("sweep", "sigma_max", "needs 0 < sigma_min <= sigma_max");
  if (sw.sigma_points < 1) r.error("sweep", "sigma_points", "must be >= 1");
  if (!(sw.two_t_c_max >= sw.two_t_c_min) || !(sw.two_t_c_min > 0)) {
    r.error("sweep", "two_t_c_max", "needs 0 < two_t_c_min <= two_t_c_max");
  }
  if (sw.two_t_c_points < 1) r.error("sweep", "two_t_c_points", "must be >= 1");
  if (!(sw.omega_x_min > 0) || !(sw.omega_x_max > sw.omega_x_min)) {
    r.error("sweep", "omega_x_max", "needs 0 < omega_x_min < omega_x_max");
  }
  if (sw.omega_x_points < 3) r.error("sweep", "omega_x_points", "must be >= 3");
  for (Correction corr : sw.sequences) {
    if (corr == Correction::TwoQEcho && sw.gate == GateFamily::ISwap) {
      r.error("sweep", "sequences", "2qecho is only defined for gate = cr");
    }
  }

  if (const Entry* e = r.find("output", "dir")) c.output_dir = e->value;

  // Experiment-specific requirements.
  const bool needs_control = c.experiment == ExperimentKind::CrFidelity ||
                             ((c.experiment == ExperimentKind::NoiseSweep ||
                               c.experiment == ExperimentKind::Sensitivities ||
                               c.experiment == ExperimentKind::SequenceCheck) &&
                              sw.gate == GateFamily::CR);
  if (r.find("experiment", "name") && needs_control && !c.drive1) {
    errors.push_back(fmt::format("experiment {} requires a [drive1] section", to_string(c.experiment)));
  }
  if (c.experiment == ExperimentKind::NoiseSweep && r.find("experiment", "name")) {
    if (sw.sequences.empty()) errors.push_back("experiment noise-sweep requires sweep.sequences");
    for (Correction corr : sw.sequences) {
      if (corr == Correction::TwoQEcho && !c.drive2) errors.push_back("sequence 2qecho requires a [drive2] section");
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  auto kv = [&](const char* k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  out += "[experiment]\n";
  kv("name", to_string(c.experiment));
  kv("seed", std::to_string(c.seed));
  out += "\n[device]\n";
  kv("omega_r", num(c.device.omega_r));
  kv("n_fock", std::to_string(c.device.n_fock));
  for (int i = 0; i < 2; ++i) {
    const DotParams& d = c.device.dots[i];
    out += fmt::format("\n[dot{}]\n", i + 1);
    kv("epsilon", num(d.epsilon));
    kv("t_c", num(d.t_c));
    kv("omega_z", num(d.omega_z));
    kv("g_ac", num(d.g_ac));
    kv("g_x", num(d.g_x));
  }
  for (int i = 0; i < 2; ++i) {
    const auto& d = i == 0 ? c.drive1 : c.drive2;
    if (!d) continue;
    out += fmt::format("\n[drive{}]\n", i + 1);
    if (d->amplitude) kv("amplitude", num(*d->amplitude));
    if (d->omega_x) kv("omega_x", num(*d->omega_x));
    kv("frequency", d->frequency ? num(*d->frequency) : "auto");
    kv("phase", num(d->phase));
    kv("t_on", num(d->t_on));
    kv("t_off", num(d->t_off));
  }
  out += "\n[simulation]\n";
  kv("t_end", num(c.simulation.t_end));
  kv("sample_interval", num(c.simulation.sample_interval));
  kv("steps_per_period", std::to_string(c.simulation.steps_per_period));
  kv("local_restarts", std::to_string(c.simulation.local_restarts));
  kv("reduction", c.simulation.reduction == Reduction::Project ? "project" : "partial-trace");
  out += "\n[noise]\n";
  kv("sigma_epsilon", num(c.noise.sigma_epsilon));
  if (c.noise.sigma_t) kv("sigma_t", num(*c.noise.sigma_t));
  kv("samples", std::to_string(c.noise.samples));
  kv("fidelity_mode", c.noise.fidelity_mode == FidelityMode::Fixed ? "fixed" : "local");
  kv("local_restarts", std::to_string(c.noise.local_restarts));
  out += "\n[sweep]\n";
  kv("gate", to_string(c.sweep.gate));
  if (!c.sweep.sequences.empty()) {
    std::string list;
    for (Correction corr : c.sweep.sequences) list += (list.empty() ? "" : ",") + to_string(corr);
    kv("sequences", list);
  }
  kv("sigma_min", num(c.sweep.sigma_min));
  kv("sigma_max", num(c.sweep.sigma_max));
  kv("sigma_points", std::to_string(c.sweep.sigma_points));
  kv("two_t_c_min", num(c.sweep.two_t_c_min));
  kv("two_t_c_max", num(c.sweep.two_t_c_max));
  kv("two_t_c_points", std::to_string(c.sweep.two_t_c_points));
  kv("omega_x_min", num(c.sweep.omega_x_min));
  kv("omega_x_max", num(c.sweep.omega_x_max));
  kv("omega_x_points", std::to_string(c.sweep.omega_x_points));
  out += "\n[output]\n";
  kv("dir", c.output_dir);
  return out;
}

std::vector<DrivePulse> resolve_drives(const ExperimentConfig& c) {
  std::vector<DrivePulse> out;
  std::optional<double> carrier;
  for (int i = 0; i < 2; ++i) {
    const auto& d = i == 0 ? c.drive1 : c.drive2;
    if (!d) continue;
    DrivePulse p;
    p.dot = i + 1;
    if (d->frequency) {
      p.frequency = *d->frequency;
    } else {
      if (!carrier) carrier = dressed_qubit_frequency(c.device, 2);
      p.frequency = *carrier;
    }
    p.amplitude = d->amplitude ? *d->amplitude : drive_amplitude_for(c.device, i + 1, *d->omega_x);
    p.phase = d->phase;
    p.t_on = d->t_on;
    p.t_off = d->t_off;
    p.validate();
    out.push_back(p);
  }
  return out;
}

std::string config_hash(const ExperimentConfig& c) {
  ExperimentConfig copy = c;
  copy.output_dir.clear();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(copy)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace spinqed
