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

// Ramsey phase estimation under local dephasing.
//
// Phase convention: a single angle x carries the accumulated phase, x = phi t
// per qubit for product probes and x = N phi t for the GHZ parity signal, so
// d/dphi brings down t (resp. N t). Each qubit's coherence decays with
// visibility exp(-gamma t); the GHZ coherence with exp(-N gamma t).
//
// Repetition accounting: comparisons at a fixed total time T use nu = T / t
// repetitions for a probe interrogated for time t.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qslopen/bounds.hpp"
#include "qslopen/models.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

/// Registers up to this size are evaluated with explicit matrices.
inline constexpr int kMatrixQubitLimit = 5;

struct RamseyConfig {
  int n_qubits = 1;
  double gamma = 0.0;
  double t = 0.0;
  double phi = 0.0;
  long repetitions = 1;
};

enum class Preparation { product, ghz };

inline std::string_view to_string(Preparation p) {
  return p == Preparation::product ? "product" : "ghz";
}

struct FisherReport {
  double fisher = 0.0;
  double phase_at_max = 0.0;
  double delta_phi = std::numeric_limits<double>::infinity();
  double formula_value = 0.0;
};

inline void require_ramsey(const RamseyConfig& cfg) {
  std::ostringstream os;
  if (cfg.n_qubits < 1) {
    os << "RamseyConfig: n_qubits=" << cfg.n_qubits << " must be >= 1";
  } else if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    os << "RamseyConfig: gamma=" << cfg.gamma << " must be >= 0";
  } else if (!(cfg.t >= 0.0) || !std::isfinite(cfg.t)) {
    os << "RamseyConfig: t=" << cfg.t << " must be >= 0";
  } else if (!std::isfinite(cfg.phi)) {
    os << "RamseyConfig: phi must be finite";
  } else if (cfg.repetitions < 1) {
    os << "RamseyConfig: repetitions=" << cfg.repetitions << " must be >= 1";
  } else {
    return;
  }
  throw ValidationError(os.str());
}

/// F_p = N exp(-2 gamma t) t^2 and F_GHZ = N^2 exp(-2 N gamma t) t^2.
inline double fisher_formula(Preparation prep, int n, double gamma, double t) {
  const double nn = static_cast<double>(n);
  return prep == Preparation::product ? nn * std::exp(-2.0 * gamma * t) * t * t
                                      : nn * nn * std::exp(-2.0 * nn * gamma * t) * t * t;
}

namespace detail {

struct RamseySignal {
  double visibility;
  double slope;  // dx/dphi
  double copies;  // independent identical signals
};

inline RamseySignal ramsey_signal(const RamseyConfig& cfg, Preparation prep) {
  const double n = static_cast<double>(cfg.n_qubits);
  if (prep == Preparation::product) return {std::exp(-cfg.gamma * cfg.t), cfg.t, n};
  return {std::exp(-n * cfg.gamma * cfg.t), n * cfg.t, 1.0};
}

/// sum_i (dp_i/dphi)^2 / p_i over the outcomes p = (1 +- V cos x)/2, i.e.
///   slope^2 V^2 sin^2 x / (1 - V^2 + V^2 sin^2 x).
/// At V = 1 and sin x = 0 the ratio is 0/0; its limit is slope^2.
inline double two_outcome_fisher(const RamseySignal& sig, double x) {
  const double v2 = sig.visibility * sig.visibility;
  const double s = std::sin(x);
  const double num = v2 * s * s;
  const double den = (1.0 - v2) + num;
  if (!(den > 0.0)) return sig.copies * sig.slope * sig.slope;
  return sig.copies * sig.slope * sig.slope * num / den;
}

inline double cramer_rao(double fisher, double repetitions) {
  return fisher > 0.0 ? 1.0 / std::sqrt(repetitions * fisher)
                      : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Classical Fisher information of the hard-wired measurement at cfg.phi.
inline double fisher_at_phase(const RamseyConfig& cfg, Preparation prep) {
  require_ramsey(cfg);
  const auto sig = detail::ramsey_signal(cfg, prep);
  return detail::two_outcome_fisher(sig, sig.slope * cfg.phi);
}

/// Fisher information maximized over phi; the maximum sits where cos x = 0.
/// cfg.phi is ignored.
inline FisherReport fisher_numeric(const RamseyConfig& cfg, Preparation prep) {
  require_ramsey(cfg);
  const auto sig = detail::ramsey_signal(cfg, prep);
  FisherReport r;
  r.phase_at_max = sig.slope > 0.0 ? (std::numbers::pi / 2.0) / sig.slope : 0.0;
  r.fisher = detail::two_outcome_fisher(sig, std::numbers::pi / 2.0);
  if (sig.slope == 0.0) r.fisher = 0.0;
  r.delta_phi = detail::cramer_rao(r.fisher, static_cast<double>(cfg.repetitions));
  r.formula_value = fisher_formula(prep, cfg.n_qubits, cfg.gamma, cfg.t);
  return r;
}

// ---------------------------------------------------------------------------
// Dephasing speed from Z correlators.

/// Z-basis correlators <Z_k> and <Z_k Z_l> of an n-qubit state.
struct ZCorrelators {
  std::vector<double> z;
  std::vector<double> zz;  // row-major n x n

  double pair(int k, int l) const { return zz[static_cast<std::size_t>(k) * z.size() + l]; }
};

/// Correlators from the computational-basis populations (Z is diagonal).
inline ZCorrelators z_correlators(const DensityMatrix& rho, int n) {
  require_qubit_count(n, "z_correlators");
  if (rho.dim() != (Index{1} << n)) throw ValidationError("z_correlators: dimension mismatch");
  const auto un = static_cast<std::size_t>(n);
  ZCorrelators c{std::vector<double>(un, 0.0), std::vector<double>(un * un, 0.0)};
  for (Index i = 0; i < rho.dim(); ++i) {
    const double p = rho.matrix()(i, i).real();
    for (int k = 0; k < n; ++k) {
      const double zk = ((i >> (n - 1 - k)) & 1) ? -1.0 : 1.0;
      c.z[static_cast<std::size_t>(k)] += p * zk;
      for (int l = 0; l < n; ++l) {
        const double zl = ((i >> (n - 1 - l)) & 1) ? -1.0 : 1.0;
        c.zz[static_cast<std::size_t>(k) * un + static_cast<std::size_t>(l)] += p * zk * zl;
      }
    }
  }
  return c;
}

/// GHZ(N): <Z_k> = 0, <Z_k Z_l> = 1. Valid for any N.
inline ZCorrelators ghz_correlators(int n) {
  const auto un = static_cast<std::size_t>(n);
  return {std::vector<double>(un, 0.0), std::vector<double>(un * un, 1.0)};
}

/// |+>^N: <Z_k> = 0, <Z_k Z_l> = delta_kl.
inline ZCorrelators product_plus_correlators(int n) {
  const auto un = static_cast<std::size_t>(n);
  ZCorrelators c{std::vector<double>(un, 0.0), std::vector<double>(un * un, 0.0)};
  for (std::size_t k = 0; k < un; ++k) c.zz[k * un + k] = 1.0;
  return c;
}

/// Pure-state speed under local dephasing,
/// gamma sqrt(N^2 - 2N sum_k <Z_k>^2 + sum_kl <Z_k Z_l>^2).
inline double dephasing_speed_pure(const ZCorrelators& c, double gamma) {
  const double n = static_cast<double>(c.z.size());
  double single = 0.0;
  for (const double z : c.z) single += z * z;
  double pair = 0.0;
  for (const double zz : c.zz) pair += zz * zz;
  const double sq = n * n - 2.0 * n * single + pair;
  return gamma * std::sqrt(std::max(sq, 0.0));
}

struct SpeedCap {
  double v;
  double cap;
};

/// Speed of a pure n-qubit state under local dephasing and the linear cap
/// sqrt(2) gamma N.
inline SpeedCap local_noise_speed_cap(const DensityMatrix& rho0, int n, double gamma) {
  require_qubit_count(n, "local_noise_speed_cap");
  if (!(gamma >= 0.0)) throw ValidationError("local_noise_speed_cap: gamma must be >= 0");
  if (std::abs(rho0.purity() - 1.0) > 1e-9) {
    throw ValidationError("local_noise_speed_cap: the expansion requires a pure state");
  }
  const SpeedCap out{dephasing_speed_pure(z_correlators(rho0, n), gamma),
                     std::numbers::sqrt2 * gamma * n};
  if (out.v > out.cap + 1e-10) {
    std::ostringstream os;
    os << "local_noise_speed_cap: v=" << out.v << " exceeds cap " << out.cap;
    throw NumericalError(os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound-limited interrogation times.

struct OptimalTimes {
  double t_p;
  double t_ghz;
};

/// Orthogonalization times from the Markovian bound at theta = pi/2: the
/// single-qubit |+> state gives t_p, GHZ(n) gives t_ghz. Registers beyond
/// kMatrixQubitLimit use the correlator expansion for the GHZ speed.
inline OptimalTimes optimal_times(double gamma, int n) {
  require_rate(gamma, "optimal_times");
  if (n < 1) throw ValidationError("optimal_times: n must be >= 1");
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  const double t_p = mt_open_bound(dephasing_model(1, gamma), plus_state(), kHalfPi).tau_lower;
  double t_ghz = 0.0;
  if (n <= kMatrixQubitLimit) {
    t_ghz = mt_open_bound(dephasing_model(n, gamma), ghz(n), kHalfPi).tau_lower;
  } else {
    const double v = dephasing_speed_pure(ghz_correlators(n), gamma);
    t_ghz = bound_from_speed("mt_open", v, 1.0, kHalfPi).tau_lower;
  }
  return {t_p, t_ghz};
}

struct ResolutionReport {
  double ratio = 0.0;  // delta_phi_ghz / delta_phi_p
  double t_p = 0.0;
  double t_ghz = 0.0;
  double fisher_p = 0.0;
  double fisher_ghz = 0.0;
  double nu_p = 0.0;
  double nu_ghz = 0.0;
  bool noiseless_heisenberg = false;
};

namespace detail {

inline ResolutionReport resolution_at(double gamma, int n, double t_p, double t_ghz,
                                      double nu_p, double nu_ghz) {
  ResolutionReport r;
  r.t_p = t_p;
  r.t_ghz = t_ghz;
  r.nu_p = nu_p;
  r.nu_ghz = nu_ghz;
  r.fisher_p = fisher_numeric({n, gamma, t_p, 0.0, 1}, Preparation::product).fisher;
  r.fisher_ghz = fisher_numeric({n, gamma, t_ghz, 0.0, 1}, Preparation::ghz).fisher;
  r.ratio = std::sqrt((nu_p * r.fisher_p) / (nu_ghz * r.fisher_ghz));
  r.noiseless_heisenberg = gamma == 0.0;
  return r;
}

inline void require_repetitions(double nu_p, double nu_ghz) {
  if (!(nu_p > 0.0) || !(nu_ghz > 0.0)) {
    throw ValidationError("resolution_ratio: repetition counts must be positive");
  }
}

}  // namespace detail

/// delta_phi_ghz / delta_phi_p = sqrt(nu_p F_p / (nu_ghz F_ghz)) at the
/// bound-limited times with the given repetition counts.
inline ResolutionReport resolution_ratio(double gamma, int n, long nu_p, long nu_ghz) {
  detail::require_repetitions(static_cast<double>(nu_p), static_cast<double>(nu_ghz));
  const OptimalTimes times = optimal_times(gamma, n);
  return detail::resolution_at(gamma, n, times.t_p, times.t_ghz, static_cast<double>(nu_p),
                               static_cast<double>(nu_ghz));
}

/// Same comparison with nu = total_time / t for each probe.
inline ResolutionReport resolution_ratio_fixed_total_time(double gamma, int n,
                                                          double total_time) {
  if (!(total_time > 0.0)) throw ValidationError("resolution_ratio: total time must be > 0");
  const OptimalTimes times = optimal_times(gamma, n);
  return detail::resolution_at(gamma, n, times.t_p, times.t_ghz, total_time / times.t_p,
                               total_time / times.t_ghz);
}

/// Noiseless comparison at a common interrogation time t (no bound-limited
/// time exists when gamma = 0). Flagged as the Heisenberg regime.
inline ResolutionReport resolution_ratio_noiseless(int n, double t, long nu_p, long nu_ghz) {
  detail::require_repetitions(static_cast<double>(nu_p), static_cast<double>(nu_ghz));
  if (!(t > 0.0)) throw ValidationError("resolution_ratio_noiseless: t must be > 0");
  return detail::resolution_at(0.0, n, t, t, static_cast<double>(nu_p),
                               static_cast<double>(nu_ghz));
}

// ---------------------------------------------------------------------------
// Scaling of the best resolution with N.

struct ScalingPoint {
  int n;
  double delta_phi;
};

struct ScalingReport {
  double beta = 0.0;  // delta_phi ~ N^(-beta)
  std::vector<ScalingPoint> points;
  bool heisenberg_regime = false;
  bool standard_scaling_holds = false;
};

inline constexpr double kScalingFitTol = 0.02;

/// Least-squares slope of log(delta_phi) against log(N).
inline double fit_exponent(std::span<const ScalingPoint> pts) {
  if (pts.size() < 3) throw ValidationError("scaling fit needs at least 3 distinct N");
  double sx = 0.0;
  double sy = 0.0;
  const double m = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    sx += std::log(static_cast<double>(p.n));
    sy += std::log(p.delta_phi);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = std::log(static_cast<double>(p.n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.delta_phi) - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("scaling fit needs at least 3 distinct N");
  return -sxy / sxx;
}

/// For gamma > 0: the best of product and GHZ resolutions at the bound-limited
/// times with a common total time. For gamma = 0: the best single-shot
/// resolution at interrogation time noiseless_t.
inline ScalingReport scaling_verdict(double gamma, std::span<const int> n_list,
                                     double noiseless_t = 1.0) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("scaling_verdict: gamma must be >= 0");
  }
  std::vector<int> ns(n_list.begin(), n_list.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.size() < 3) throw ValidationError("scaling fit needs at least 3 distinct N");
  ScalingReport r;
  r.heisenberg_regime = gamma == 0.0;
  constexpr double kTotalTime = 1.0;
  for (const int n : ns) {
    if (n < 1) throw ValidationError("scaling_verdict: N must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    if (gamma > 0.0) {
      const OptimalTimes times = optimal_times(gamma, n);
      for (const auto& [prep, t] : {std::pair{Preparation::product, times.t_p},
                                    std::pair{Preparation::ghz, times.t_ghz}}) {
        const double f = fisher_numeric({n, gamma, t, 0.0, 1}, prep).fisher;
        best = std::min(best, detail::cramer_rao(f, kTotalTime / t));
      }
    } else {
      for (const Preparation prep : {Preparation::product, Preparation::ghz}) {
        best = std::min(best, fisher_numeric({n, 0.0, noiseless_t, 0.0, 1}, prep).delta_phi);
      }
    }
    r.points.push_back({n, best});
  }
  r.beta = fit_exponent(r.points);
  r.standard_scaling_holds = r.beta <= 0.5 + kScalingFitTol;
  return r;
}

}  // namespace qsl
