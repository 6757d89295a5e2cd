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

// spinqed: run one experiment from a config file or a bundled preset.
//
//   spinqed cr-fidelity --preset fig1 --out out/fig1
//   spinqed noise-sweep --config my.cfg --threads 4 --seed 7
//   spinqed presets              # list bundled presets
//   spinqed show-preset fig4b    # print one, as a starting point

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinqed/config.hpp"
#include "spinqed/experiments.hpp"

namespace {

struct RunArgs {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
  bool quiet = false;
};

int run(spinqed::ExperimentKind kind, const RunArgs& args, CLI::App& sub) {
  std::string text;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) {
      std::cerr << "cannot read " << args.config_path << '\n';
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    try {
      text = spinqed::preset_text(args.preset);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }
  }

  spinqed::ExperimentConfig config;
  try {
    config = spinqed::parse_config(text);
  } catch (const spinqed::ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << msg << '\n';
    return 2;
  }
  if (config.experiment != kind) {
    std::cerr << "config describes experiment '" << spinqed::to_string(config.experiment) << "', not '"
              << spinqed::to_string(kind) << "'\n";
    return 2;
  }

  spinqed::RunOptions opts;
  opts.threads = args.threads;
  if (sub.count("--seed")) opts.seed = args.seed;
  if (!args.out.empty()) opts.output_dir = args.out;
  opts.log = args.quiet ? nullptr : &std::cerr;
  return spinqed::run_experiment(config, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-qubit cross-resonance and iSWAP gate simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", spinqed::kVersion);

  RunArgs args;
  int exit_code = 0;
  for (auto kind : {spinqed::ExperimentKind::CrFidelity, spinqed::ExperimentKind::Sensitivities,
                    spinqed::ExperimentKind::NoiseSweep, spinqed::ExperimentKind::SweetSpot,
                    spinqed::ExperimentKind::SequenceCheck}) {
    CLI::App* sub = app.add_subcommand(spinqed::to_string(kind), "run the " + spinqed::to_string(kind) + " experiment");
    auto* cfg = sub->add_option("--config", args.config_path, "config file")->check(CLI::ExistingFile);
    auto* pre = sub->add_option("--preset", args.preset, "bundled preset name");
    cfg->excludes(pre);
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--out", args.out, "override the output directory");
    sub->add_option("--threads", args.threads, "worker threads")
        ->envname("SPINQED_THREADS")
        ->check(CLI::PositiveNumber);
    sub->add_flag("-q,--quiet", args.quiet, "no progress output");
    sub->callback([&, kind, sub] {
      if (args.config_path.empty() && args.preset.empty()) throw CLI::RequiredError("--config or --preset");
      exit_code = run(kind, args, *sub);
    });
  }

  app.add_subcommand("presets", "list bundled presets")->callback([] {
    for (const auto& name : spinqed::preset_names()) std::cout << name << '\n';
  });
  std::string show;
  auto* show_cmd = app.add_subcommand("show-preset", "print a bundled preset");
  show_cmd->add_option("name", show)->required();
  show_cmd->callback([&] {
    try {
      std::cout << spinqed::preset_text(show);
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      exit_code = 2;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return exit_code;
}
