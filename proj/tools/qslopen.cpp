// Copyright 2026 The qslopen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qslopen/commands.hpp"

namespace {

struct RawOptions {
  std::string model;
  std::string out;
  double theta = 0.0;
  double target_f = 0.0;
  double t_max = 0.0;
  double dt = 1e-3;
  int grid = 0;
  double gamma = 0.0;
  int n = 0;
  std::vector<double> bloch;
  bool strict = false;
};

struct Flags {
  CLI::Option* theta = nullptr;
  CLI::Option* target_f = nullptr;
  CLI::Option* t_max = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* bloch = nullptr;
};

Flags add_common(CLI::App* sub, RawOptions& raw) {
  Flags f;
  sub->add_option("--model", raw.model, "Model file (JSON)");
  sub->add_option("--out", raw.out, "CSV output path (default: stdout)");
  f.theta = sub->add_option("--theta", raw.theta, "Target angle in radians, f = cos(theta)");
  f.target_f = sub->add_option("--target-f", raw.target_f, "Target relative purity");
  f.theta->excludes(f.target_f);
  f.t_max = sub->add_option("--t-max", raw.t_max, "Time window");
  sub->add_option("--dt", raw.dt, "Integrator step")->capture_default_str();
  f.grid = sub->add_option("--grid", raw.grid, "Grid size");
  f.gamma = sub->add_option("--gamma", raw.gamma, "Decoherence rate");
  f.n = sub->add_option("--n", raw.n, "Largest qubit count (metrology)");
  f.bloch = sub->add_option("--bloch", raw.bloch, "Bloch vector r1 r2 r3")->expected(3);
  sub->add_flag("--strict", raw.strict, "Reject unknown model-file fields");
  return f;
}

qsl::RunConfig to_config(const std::string& command, const RawOptions& raw, const Flags& f) {
  qsl::RunConfig cfg;
  cfg.command = command;
  cfg.model_file = raw.model;
  cfg.output = raw.out;
  cfg.dt = raw.dt;
  cfg.strict = raw.strict;
  if (f.theta->count() > 0) cfg.theta = raw.theta;
  if (f.target_f->count() > 0) cfg.target_f = raw.target_f;
  if (f.t_max->count() > 0) cfg.t_max = raw.t_max;
  if (f.grid->count() > 0) cfg.grid = raw.grid;
  if (f.gamma->count() > 0) cfg.gamma = raw.gamma;
  if (f.n->count() > 0) cfg.n = raw.n;
  if (f.bloch->count() > 0) cfg.bloch = qsl::BlochState{raw.bloch[0], raw.bloch[1], raw.bloch[2]};
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum speed limits for open quantum systems"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"bound", "Evaluate speed-limit bounds for a model"},
      {"evolve", "Simulate a trajectory and its relative purity"},
      {"passage", "Find the passage time to f = cos(theta)"},
      {"metrology", "Bound-limited Ramsey comparison of product and GHZ probes"},
      {"reproduce-sm-figure", "Exact passage time over its bound for isotropic decoherence"},
      {"certify", "Certify complete positivity and trace preservation of a channel"},
  };
  RawOptions raw;
  std::vector<std::pair<CLI::App*, Flags>> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs.emplace_back(sub, add_common(sub, raw));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsl::exit_code::kValidation;
  }

  for (const auto& [sub, flags] : subs) {
    if (!sub->parsed()) continue;
    const qsl::RunConfig cfg = to_config(sub->get_name(), raw, flags);
    if (cfg.output.empty()) return qsl::run_command(cfg, std::cout, std::cerr, std::cerr);
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << cfg.output << " for writing\n";
      return qsl::exit_code::kValidation;
    }
    return qsl::run_command(cfg, out, std::cout, std::cerr);
  }
  return qsl::exit_code::kValidation;
}
