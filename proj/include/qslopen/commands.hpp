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

// Command implementations behind the qslopen executable. Each command writes
// CSV to `csv` and a one-line summary to `log`, and returns an exit code:
// 0 ok, 2 validation, 3 numerical failure, 4 not reached.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qslopen/bounds.hpp"
#include "qslopen/channels.hpp"
#include "qslopen/csv.hpp"
#include "qslopen/errors.hpp"
#include "qslopen/lindblad.hpp"
#include "qslopen/metrology.hpp"
#include "qslopen/model_file.hpp"
#include "qslopen/models.hpp"

namespace qsl {

struct RunConfig {
  std::string command;
  std::string model_file;
  std::string output;  // empty: standard output
  std::optional<double> theta;
  std::optional<double> target_f;
  std::optional<double> t_max;
  double dt = 1e-3;
  std::optional<int> grid;
  std::optional<double> gamma;
  std::optional<int> n;
  std::optional<BlochState> bloch;
  bool strict = false;
};

inline constexpr double kDefaultTheta = std::numbers::pi / 2.0;

/// theta from --theta or --target-f (f = cos theta).
inline double resolve_theta(const RunConfig& cfg) {
  if (cfg.theta && cfg.target_f) {
    throw ValidationError("--theta and --target-f are mutually exclusive");
  }
  if (cfg.target_f) {
    const double f = *cfg.target_f;
    if (!(f >= 0.0 && f < 1.0)) throw ValidationError("--target-f must lie in [0, 1)");
    return std::acos(f);
  }
  const double theta = cfg.theta.value_or(kDefaultTheta);
  require_theta(theta, "--theta");
  return theta;
}

inline int resolve_grid(const RunConfig& cfg, int fallback, int minimum) {
  const int grid = cfg.grid.value_or(fallback);
  if (grid < minimum) {
    throw ValidationError("--grid must be at least " + std::to_string(minimum));
  }
  return grid;
}

inline LoadedModel load_config_model(const RunConfig& cfg) {
  if (cfg.model_file.empty()) throw ValidationError(cfg.command + " requires --model");
  return load_model(parse_model_file(cfg.model_file, cfg.strict));
}

inline double resolve_t_max(const RunConfig& cfg, const LoadedModel& m, double rate_units) {
  const double t_max = cfg.t_max.value_or(rate_units / m.rate_scale);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("--t-max must be positive");
  return t_max;
}

// ---------------------------------------------------------------------------

inline int cmd_bound(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const LoadedModel m = load_config_model(cfg);
  const double theta = resolve_theta(cfg);
  std::vector<BoundReport> reports;
  if (m.lindbladian) reports.push_back(mt_open_bound(*m.lindbladian, m.rho0, theta));
  if (m.gain_loss_h) {
    reports.push_back(non_hermitian_bound(*m.gain_loss_h, *m.gain_loss_gamma, m.rho0, theta));
  }
  std::string note;
  if (m.channel) {
    try {
      reports.push_back(
          kraus_bound_auto(*m.channel, m.rho0, theta, resolve_t_max(cfg, m, 20.0)));
    } catch (const NotReachedError&) {
      note = "; kraus bound skipped (target not reached)";
    }
  }
  if (m.kind == ModelKind::unitary && std::abs(m.rho0.purity() - 1.0) <= 1e-9) {
    reports.push_back(mt_unitary(m.lindbladian->hamiltonian(), m.rho0));
    reports.push_back(ml_unitary(m.lindbladian->hamiltonian(), m.rho0));
  }
  CsvWriter w(csv, {"bound", "theta", "tau_lower", "tau_weak", "speed_v", "trace_purity"});
  for (const BoundReport& r : reports) {
    w.row({r.bound_name, r.theta, r.tau_lower, r.tau_weak, r.speed_v, r.trace_purity});
  }
  log << "bound: " << to_string(m.kind) << ", theta=" << format_double(theta)
      << ", tau_lower=" << format_double(reports.front().tau_lower) << note << '\n';
  return exit_code::kOk;
}

inline int cmd_evolve(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const LoadedModel m = load_config_model(cfg);
  const double t_max = resolve_t_max(cfg, m, 5.0);
  const int grid = resolve_grid(cfg, 101, 2);
  std::vector<TrajectorySample> samples;
  if (m.lindbladian) {
    std::vector<double> times(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) times[i] = t_max * i / static_cast<double>(grid - 1);
    samples = evolve(*m.lindbladian, m.rho0, times);
  } else {
    const auto steps = gain_loss_evolve(*m.gain_loss_h, *m.gain_loss_gamma, m.rho0, t_max, cfg.dt);
    const std::size_t stride =
        std::max<std::size_t>(1, (steps.size() - 1) / static_cast<std::size_t>(grid - 1));
    for (std::size_t k = 0; k < steps.size(); k += stride) samples.push_back(steps[k]);
    if (samples.back().t != steps.back().t) samples.push_back(steps.back());
  }
  CsvWriter w(csv, {"t", "f", "purity", "trace", "closed_form_f"});
  for (const TrajectorySample& s : samples) {
    std::optional<double> closed;
    if (m.f_closed) closed = m.f_closed(s.t);
    w.row({s.t, s.f, s.rho.purity(), s.rho.matrix().trace().real(), cell(closed)});
  }
  log << "evolve: " << to_string(m.kind) << ", " << samples.size() << " samples to t="
      << format_double(t_max) << ", final f=" << format_double(samples.back().f) << '\n';
  return exit_code::kOk;
}

namespace detail {

/// First crossing of f = target along recorded samples, linearly interpolated.
inline std::optional<double> first_crossing(const std::vector<TrajectorySample>& samples,
                                            double target) {
  for (std::size_t k = 1; k < samples.size(); ++k) {
    if (samples[k].f <= target) {
      const auto& a = samples[k - 1];
      const auto& b = samples[k];
      return a.t + (a.f - target) / (a.f - b.f) * (b.t - a.t);
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline int cmd_passage(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const LoadedModel m = load_config_model(cfg);
  const double theta = resolve_theta(cfg);
  const double t_max = resolve_t_max(cfg, m, 20.0);
  const double target = std::cos(theta);
  PassageResult result;
  result.theta = theta;
  std::optional<BoundReport> bound;
  if (m.lindbladian || m.channel) {
    PassageOptions opt;
    opt.grid = resolve_grid(cfg, opt.grid, 3);
    opt.dt = cfg.dt;
    const TrajectorySource source =
        m.lindbladian ? TrajectorySource(*m.lindbladian) : TrajectorySource(*m.channel);
    result = passage_time(source, m.rho0, theta, t_max, opt);
    if (m.lindbladian) {
      try {
        bound = mt_open_bound(*m.lindbladian, m.rho0, theta);
      } catch (const StationaryError&) {
      }
    }
  } else {
    const auto steps = gain_loss_evolve(*m.gain_loss_h, *m.gain_loss_gamma, m.rho0, t_max, cfg.dt);
    result.tau_exact = detail::first_crossing(steps, target);
  }

  CsvWriter w(csv, {"theta", "target_f", "status", "tau_exact", "f_infinity", "tau_tight",
                    "tau_weak"});
  const std::string status = result.reached() ? "reached" : "not-reached";
  w.row({theta, target, status, cell(result.tau_exact), cell(result.f_infinity),
         cell(bound ? std::optional(bound->tau_lower) : std::nullopt),
         cell(bound ? std::optional(bound->tau_weak) : std::nullopt)});
  if (!result.reached()) {
    log << "passage: target f=" << format_double(target) << " not reached before t="
        << format_double(t_max);
    if (result.f_infinity) log << " (f plateaus at " << format_double(*result.f_infinity) << ")";
    log << '\n';
    return exit_code::kNotReached;
  }
  log << "passage: " << to_string(m.kind) << ", theta=" << format_double(theta)
      << ", tau=" << format_double(*result.tau_exact) << '\n';
  return exit_code::kOk;
}

inline int cmd_metrology(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const double gamma = cfg.gamma.value_or(1.0);
  const int n_max = cfg.n.value_or(6);
  require_rate(gamma, "metrology");
  if (n_max < 1) throw ValidationError("--n must be >= 1");
  CsvWriter w(csv, {"n", "t_p", "t_ghz", "fisher_p", "fisher_ghz", "ratio"});
  std::vector<int> ns;
  for (int n = 1; n <= n_max; ++n) {
    const ResolutionReport r = resolution_ratio(gamma, n, 1, n);
    w.row({static_cast<long>(n), r.t_p, r.t_ghz, r.fisher_p, r.fisher_ghz, r.ratio});
    ns.push_back(n);
  }
  log << "metrology: gamma=" << format_double(gamma) << ", N=1.." << n_max;
  if (ns.size() >= 3) {
    const ScalingReport s = scaling_verdict(gamma, ns);
    log << ", fitted beta=" << format_double(s.beta)
        << (s.standard_scaling_holds ? " (standard scaling)" : " (beyond standard scaling)");
  }
  log << '\n';
  return exit_code::kOk;
}

inline int cmd_reproduce_sm_figure(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  double gamma = cfg.gamma.value_or(1.0);
  BlochState bloch = cfg.bloch.value_or(BlochState{0.0, 0.0, 1.0});
  if (!cfg.model_file.empty()) {
    const LoadedModel m = load_config_model(cfg);
    if (!m.isotropic) throw ValidationError("reproduce-sm-figure requires an isotropic model");
    gamma = m.isotropic->gamma();
    bloch = *m.bloch;
  }
  const IsotropicEnvironment env(gamma);
  require_valid_bloch(bloch);
  const double theta_max = IsotropicEnvironment::max_theta(bloch);
  constexpr double kEndpointGap = 1e-6;
  if (!(theta_max > 2.0 * kEndpointGap)) {
    throw ValidationError("reproduce-sm-figure: no reachable theta for this Bloch vector");
  }
  const int grid = resolve_grid(cfg, 50, 2);
  const double theta_small = 1e-3;
  const double small_ratio = *env.tau_exact(theta_small, bloch) / env.tau_B(theta_small, bloch);

  CsvWriter w(csv, {"theta", "tau_exact", "tau_B", "ratio", "near_endpoint"});
  double last_ratio = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double theta = i == grid ? theta_max - kEndpointGap : theta_max * i / grid;
    const auto tau = env.tau_exact(theta, bloch);
    if (!tau) throw NumericalError("reproduce-sm-figure: grid point beyond reachable range");
    const double tau_b = env.tau_B(theta, bloch);
    last_ratio = *tau / tau_b;
    const long near = last_ratio > 10.0 * small_ratio ? 1 : 0;
    w.row({theta, *tau, tau_b, last_ratio, near});
  }
  log << "reproduce-sm-figure: theta_max=" << format_double(theta_max)
      << ", small-theta ratio (theta=1e-3)=" << format_double(small_ratio)
      << ", endpoint ratio=" << format_double(last_ratio) << '\n';
  return exit_code::kOk;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const LoadedModel m = load_config_model(cfg);
  if (!m.channel) throw ValidationError("certify: model has no Kraus representation");
  const double t_max = resolve_t_max(cfg, m, 10.0);
  const int grid = resolve_grid(cfg, 20, 2);
  const double t_min = 1e-3 * t_max;
  CsvWriter w(csv, {"t", "tp_deviation", "choi_min_eigenvalue", "passed"});
  int failures = 0;
  for (int i = 0; i < grid; ++i) {
    const double t = t_min * std::pow(t_max / t_min, i / static_cast<double>(grid - 1));
    const CptReport r = certify_cpt(*m.channel, t);
    failures += r.passed ? 0 : 1;
    w.row({r.t, r.tp_deviation, r.choi_min_eigenvalue, static_cast<long>(r.passed)});
  }
  log << "certify: " << m.channel->name() << ", " << grid - failures << "/" << grid
      << " times passed\n";
  return failures == 0 ? exit_code::kOk : exit_code::kNumerical;
}

/// Dispatches cfg.command and maps library exceptions to exit codes.
inline int run_command(const RunConfig& cfg, std::ostream& csv, std::ostream& log,
                       std::ostream& err) {
  try {
    if (cfg.command == "bound") return cmd_bound(cfg, csv, log);
    if (cfg.command == "evolve") return cmd_evolve(cfg, csv, log);
    if (cfg.command == "passage") return cmd_passage(cfg, csv, log);
    if (cfg.command == "metrology") return cmd_metrology(cfg, csv, log);
    if (cfg.command == "reproduce-sm-figure") return cmd_reproduce_sm_figure(cfg, csv, log);
    if (cfg.command == "certify") return cmd_certify(cfg, csv, log);
    throw ValidationError("unknown command '" + cfg.command + "'");
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kValidation;
  } catch (const NotReachedError& e) {
    err << "not reached: " << e.what() << '\n';
    return exit_code::kNotReached;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_code::kNumerical;
  }
}

}  // namespace qsl
