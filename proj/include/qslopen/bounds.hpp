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

// Speed-limit evaluators for open-system dynamics and the exact passage-time
// finder they are compared against.
//
// Everything is phrased in terms of the relative purity
//   f(t) = tr[rho0 rho_t] / tr[rho0^2],
// parametrized as f = cos(theta) with theta in (0, pi/2]. The passage time
// tau_theta is the first time f reaches cos(theta).

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qslopen/channels.hpp"
#include "qslopen/lindblad.hpp"
#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

struct BoundReport {
  std::string bound_name;
  double theta = 0.0;
  /// Strongest lower bound on tau_theta produced by the evaluator.
  double tau_lower = 0.0;
  /// The quadratic-in-theta relaxation of tau_lower (equal to it when the
  /// evaluator has only one form).
  double tau_weak = 0.0;
  /// Speed entering the denominator (inverse time); NaN when not applicable.
  double speed_v = std::numeric_limits<double>::quiet_NaN();
  double trace_purity = std::numeric_limits<double>::quiet_NaN();
  /// Named intermediate scalars, in insertion order.
  std::vector<std::pair<std::string, double>> details;
  /// Per-time integrand samples for the time-averaged bounds.
  std::vector<std::pair<double, double>> samples;
  /// Self-consistency verdict (tau_exact >= tau_lower) where one is computed.
  std::optional<bool> holds;
  std::string note;

  void add(std::string name, double value) { details.emplace_back(std::move(name), value); }

  bool has(std::string_view name) const {
    return std::any_of(details.begin(), details.end(),
                       [&](const auto& kv) { return kv.first == name; });
  }

  double detail(std::string_view name) const {
    for (const auto& [key, value] : details) {
      if (key == name) return value;
    }
    throw ValidationError("BoundReport: no detail named '" + std::string(name) + "'");
  }
};

struct PassageResult {
  double theta = 0.0;
  std::optional<double> tau_exact;  // empty: not reached within t_max
  std::optional<double> f_infinity;  // set when an asymptotic plateau was detected

  bool reached() const { return tau_exact.has_value(); }
};

inline void require_theta(double theta, std::string_view what) {
  if (!(theta > 0.0) || theta > std::numbers::pi / 2.0 + 1e-12) {
    std::ostringstream os;
    os << what << ": theta=" << theta << " outside (0, pi/2]";
    throw ValidationError(os.str());
  }
}

/// Below this a speed is treated as exactly zero.
inline constexpr double kStationarySpeed = 1e-13;

/// sqrt(tr[(L^dagger rho0)^2]).
inline double speed_v(const Lindbladian& lind, const DensityMatrix& rho0) {
  const CMatrix x = apply_adjoint(lind, rho0);
  const double sq = checked_real(trace_product(x, x), "speed_v");
  if (sq < -1e-12) throw NumericalError("speed_v: negative tr[(L^dagger rho0)^2]");
  return std::sqrt(std::max(sq, 0.0));
}

/// Both forms of the Markovian bound given the speed v:
///   tight: |cos(theta) - 1| tr rho0^2 / v,  weak: 4 theta^2 tr rho0^2 / (pi^2 v).
inline BoundReport bound_from_speed(std::string name, double v, double trace_purity,
                                    double theta) {
  require_theta(theta, name);
  if (!(v > kStationarySpeed)) {
    throw StationaryError(name + ": speed v = 0");
  }
  BoundReport r;
  r.bound_name = std::move(name);
  r.theta = theta;
  r.speed_v = v;
  r.trace_purity = trace_purity;
  r.tau_lower = std::abs(std::cos(theta) - 1.0) * trace_purity / v;
  r.tau_weak = 4.0 * theta * theta * trace_purity / (std::numbers::pi * std::numbers::pi * v);
  r.add("tr_adjoint_sq", v * v);
  r.add("tau_tight", r.tau_lower);
  r.add("tau_weak", r.tau_weak);
  return r;
}

inline BoundReport mt_open_bound(const Lindbladian& lind, const DensityMatrix& rho0,
                                 double theta) {
  require_theta(theta, "mt_open_bound");
  return bound_from_speed("mt_open", speed_v(lind, rho0), rho0.purity(), theta);
}

// ---------------------------------------------------------------------------
// Passage times.

using TrajectorySource = std::variant<Lindbladian, TimeDependentLindbladian, KrausChannel>;

struct PassageOptions {
  /// Scan points on [0, t_max], endpoints included.
  int grid = 2048;
  /// Relative tolerance of the bisection on the crossing time.
  double rel_tol = 1e-10;
  /// Integrator step for time-dependent generators.
  double dt = 1e-3;
  /// Relative variation of f over the last 10% of the scan below which an
  /// unreached target is reported with an asymptotic f(infinity).
  double plateau_tol = 1e-9;
  /// A local minimum of f within this distance of the target counts as a
  /// (tangential) arrival.
  double touch_tol = 1e-12;
};

namespace detail {

/// f(t) and, where cheaply available, df/dt.
struct OverlapCurve {
  std::function<double(double)> f;
  std::function<double(double)> fdot;  // may return NaN
};

inline OverlapCurve overlap_curve(const Lindbladian& lind, const DensityMatrix& rho0) {
  if (lind.dim() != rho0.dim()) throw ValidationError("passage_time: dimension mismatch");
  const double purity = rho0.purity();
  const CMatrix m = liouvillian_matrix(lind);
  const CVector v0 = vec(rho0.matrix());
  // tr[rho0 X] = vec(rho0)^dagger vec(X) for Hermitian rho0.
  const Eigen::RowVectorXcd w = v0.adjoint() / purity;
  const Eigen::RowVectorXcd wm = w * m;
  return {[=](double t) { return (w * (expm(t * m) * v0)).value().real(); },
          [=](double t) { return (wm * (expm(t * m) * v0)).value().real(); }};
}

inline OverlapCurve overlap_curve(const KrausChannel& ch, const DensityMatrix& rho0) {
  if (ch.dim() != rho0.dim()) throw ValidationError("passage_time: dimension mismatch");
  const double purity = rho0.purity();
  const CMatrix r0 = rho0.matrix();
  return {[=](double t) {
            double acc = 0.0;
            for (const CMatrix& k : ch.kraus(t)) {
              acc += trace_product(r0, k * r0 * k.adjoint()).real();
            }
            return acc / purity;
          },
          [=](double t) {
            const KrausList ks = ch.kraus(t);
            const KrausList dks = kraus_derivative(ch, t);
            double acc = 0.0;
            for (std::size_t a = 0; a < ks.size(); ++a) {
              acc += 2.0 * trace_product(r0, dks[a] * r0 * ks[a].adjoint()).real();
            }
            return acc / purity;
          }};
}

/// RK4 flow cached on a uniform grid; off-grid states take one partial step
/// from the grid point below.
class TdFlow {
  struct Rhs {
    const TdFlow* self;
    CMatrix operator()(double t, const CMatrix& rho) const { return self->generator_apply(t, rho); }
  };

 public:
  TdFlow(TimeDependentLindbladian tdl, const DensityMatrix& rho0, double t_max, double dt)
      : tdl_(std::move(tdl)) {
    const long n = std::max(1L, step_count(t_max, dt));
    h_ = t_max / static_cast<double>(n);
    states_.reserve(static_cast<std::size_t>(n) + 1);
    states_.push_back(rho0.matrix());
    for (long k = 0; k < n; ++k) {
      CMatrix next = rk4_step(Rhs{this}, h_ * static_cast<double>(k), states_.back(), h_);
      check_step(next, h_ * static_cast<double>(k + 1), h_, "passage_time");
      states_.push_back(std::move(next));
    }
  }

  CMatrix state(double t) const {
    const long last = static_cast<long>(states_.size()) - 1;
    long k = static_cast<long>(std::floor(t / h_));
    k = std::clamp(k, 0L, last);
    const double rest = t - h_ * static_cast<double>(k);
    if (rest <= 0.0) return states_[static_cast<std::size_t>(k)];
    return rk4_step(Rhs{this}, h_ * static_cast<double>(k), states_[static_cast<std::size_t>(k)],
                    rest);
  }

  CMatrix generator_apply(double t, const CMatrix& rho) const {
    return tdl_.generator_at(t).apply(rho);
  }

 private:
  TimeDependentLindbladian tdl_;
  double h_ = 0.0;
  std::vector<CMatrix> states_;
};

inline OverlapCurve overlap_curve(const TimeDependentLindbladian& tdl, const DensityMatrix& rho0,
                                  double t_max, double dt) {
  if (!tdl.generator_at) throw ValidationError("passage_time: empty generator");
  const auto flow = std::make_shared<const TdFlow>(tdl, rho0, t_max, dt);
  const double purity = rho0.purity();
  const CMatrix r0 = rho0.matrix();
  return {[=](double t) { return trace_product(r0, flow->state(t)).real() / purity; },
          [=](double t) {
            return trace_product(r0, flow->generator_apply(t, flow->state(t))).real() / purity;
          }};
}

}  // namespace detail

/// First time t in [0, t_max] with f(t) = cos(theta). A dense scan brackets
/// the first crossing, which is then refined by bisection. Local minima that
/// come within `touch_tol` of the target count as arrivals, so tangential
/// contacts (e.g. f = cos^2 t reaching 0) are located by the root of df/dt.
inline PassageResult passage_time(const TrajectorySource& source, const DensityMatrix& rho0,
                                  double theta, double t_max, const PassageOptions& opt = {}) {
  require_theta(theta, "passage_time");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw ValidationError("passage_time: t_max must be positive");
  }
  if (opt.grid < 3) throw ValidationError("passage_time: grid must have at least 3 points");

  const detail::OverlapCurve curve = std::visit(
      [&](const auto& src) -> detail::OverlapCurve {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, TimeDependentLindbladian>) {
          return detail::overlap_curve(src, rho0, t_max, opt.dt);
        } else {
          return detail::overlap_curve(src, rho0);
        }
      },
      source);

  const double target = std::cos(theta);
  auto g = [&](double t) { return curve.f(t) - target; };

  const int n = opt.grid;
  std::vector<double> ts(static_cast<std::size_t>(n));
  std::vector<double> gs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ts[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    gs[i] = g(ts[i]);
    if (!std::isfinite(gs[i])) {
      std::ostringstream os;
      os << "passage_time: non-finite relative purity at t=" << ts[i];
      throw NumericalError(os.str());
    }
  }

  // g(a) > 0 >= g(b).
  auto bisect = [&](double a, double b) {
    for (int it = 0; it < 400 && (b - a) > opt.rel_tol * b; ++it) {
      const double mid = 0.5 * (a + b);
      if (g(mid) <= 0.0) {
        b = mid;
      } else {
        a = mid;
      }
    }
    return 0.5 * (a + b);
  };

  // Minimum of f on [a, b]: root of df/dt when it brackets, else golden section.
  auto refine_min = [&](double a, double b) {
    const double da = curve.fdot(a);
    const double db = curve.fdot(b);
    if (std::isfinite(da) && std::isfinite(db) && da < 0.0 && db > 0.0) {
      for (int it = 0; it < 400 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        const double dm = curve.fdot(mid);
        if (!std::isfinite(dm)) break;
        if (dm < 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c);
    double gd = g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
      if (gc < gd) {
        b = d;
        d = c;
        gd = gc;
        c = b - invphi * (b - a);
        gc = g(c);
      } else {
        a = c;
        c = d;
        gc = gd;
        d = a + invphi * (b - a);
        gd = g(d);
      }
    }
    return 0.5 * (a + b);
  };

  const double scale = 1.0 - target;
  PassageResult result;
  result.theta = theta;
  for (int i = 1; i < n; ++i) {
    if (gs[i] <= 0.0) {
      if (gs[i] >= -opt.touch_tol && i + 1 < n && gs[i + 1] > gs[i]) {
        const double tm = refine_min(ts[i - 1], ts[i + 1]);
        if (g(tm) >= -opt.touch_tol) {
          result.tau_exact = tm;
          return result;
        }
      }
      result.tau_exact = bisect(ts[i - 1], ts[i]);
      return result;
    }
    if (i + 1 < n && gs[i] < gs[i - 1] && gs[i] <= gs[i + 1]) {
      // Parabolic estimate of the dip between samples.
      const double curvature = gs[i + 1] - 2.0 * gs[i] + gs[i - 1];
      const double slope = gs[i + 1] - gs[i - 1];
      const double estimate =
          curvature > 0.0 ? gs[i] - slope * slope / (8.0 * curvature) : gs[i];
      if (estimate <= 1e-3 * scale) {
        const double tm = refine_min(ts[i - 1], ts[i + 1]);
        const double gm = g(tm);
        if (std::abs(gm) <= opt.touch_tol) {
          result.tau_exact = tm;
          return result;
        }
        if (gm < 0.0) {
          result.tau_exact = bisect(ts[i - 1], tm);
          return result;
        }
      }
    }
  }

  // Not reached: report an asymptote if the tail has flattened out.
  const int tail_start = static_cast<int>(std::floor(0.9 * (n - 1)));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double mean = 0.0;
  for (int i = tail_start; i < n; ++i) {
    const double f = gs[i] + target;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    mean += f;
  }
  mean /= static_cast<double>(n - tail_start);
  if ((hi - lo) <= opt.plateau_tol * std::max(std::abs(mean), 1e-300)) {
    result.f_infinity = gs[n - 1] + target;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Time-averaged bounds.

namespace detail {

inline double trapezoid(std::span<const std::pair<double, double>> pts) {
  double acc = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    acc += 0.5 * (pts[k].second + pts[k - 1].second) * (pts[k].first - pts[k - 1].first);
  }
  return acc;
}

inline void require_grid(std::span<const double> grid, std::string_view what) {
  if (grid.size() < 2) throw ValidationError(std::string(what) + ": grid needs >= 2 points");
  if (grid.front() != 0.0) throw ValidationError(std::string(what) + ": grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ValidationError(std::string(what) + ": grid must be strictly ascending");
    }
  }
}

}  // namespace detail

/// Time-dependent generator bound, evaluated as a self-consistency check on a
/// computed trajectory: tau_exact is read off the trajectory (first crossing,
/// linear interpolation between samples), the speed
/// sqrt(tr[(L(t)^dagger rho0)^2]) is averaged over [0, tau_exact] by the
/// trapezoid rule, and the report states whether tau_exact >= the bound.
inline BoundReport mt_open_bound_td(const TimeDependentLindbladian& tdl,
                                    const DensityMatrix& rho0, double theta,
                                    std::span<const TrajectorySample> trajectory) {
  require_theta(theta, "mt_open_bound_td");
  if (!tdl.generator_at) throw ValidationError("mt_open_bound_td: empty generator");
  if (trajectory.empty() || trajectory.front().t != 0.0) {
    throw ValidationError("mt_open_bound_td: trajectory must start at t = 0");
  }
  const double target = std::cos(theta);
  std::size_t hit = 0;
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    if (trajectory[k].f <= target) {
      hit = k;
      break;
    }
  }
  if (hit == 0) {
    throw NotReachedError("mt_open_bound_td: target not reached on the supplied trajectory");
  }
  const TrajectorySample& before = trajectory[hit - 1];
  const TrajectorySample& after = trajectory[hit];
  const double frac = (before.f - target) / (before.f - after.f);
  const double tau = before.t + frac * (after.t - before.t);

  auto speed_at = [&](double t) { return speed_v(tdl.generator_at(t), rho0); };
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < hit; ++k) pts.emplace_back(trajectory[k].t, speed_at(trajectory[k].t));
  if (tau > pts.back().first) pts.emplace_back(tau, speed_at(tau));
  const double average = tau > 0.0 ? detail::trapezoid(pts) / tau : pts.front().second;

  const double purity = rho0.purity();
  BoundReport r = bound_from_speed("mt_open_td", average, purity, theta);
  r.add("tau_exact", tau);
  r.add("average_speed", average);
  r.samples = std::move(pts);
  r.holds = tau >= r.tau_lower;
  r.note =
      "time-averaged speed taken over the computed passage time; the bound is a "
      "self-consistency check on this trajectory";
  return r;
}

/// Kraus-channel bound
///   tau_theta >= (2 theta^2/pi^2) sqrt(tr rho0^2) / avg(sum_a ||K_a rho0 dK_a^dagger||),
/// with the average taken by the trapezoid rule over `t_grid`, which must
/// span [0, tau_theta]. The tight form uses |cos(theta) - 1|/2 in place of
/// 2 theta^2/pi^2.
inline BoundReport kraus_bound(const KrausChannel& ch, const DensityMatrix& rho0, double theta,
                               std::span<const double> t_grid) {
  require_theta(theta, "kraus_bound");
  detail::require_grid(t_grid, "kraus_bound");
  if (ch.dim() != rho0.dim()) throw ValidationError("kraus_bound: dimension mismatch");
  const CMatrix& r0 = rho0.matrix();
  const double span = t_grid.back();

  auto summand = [&](double t) {
    const KrausList ks = ch.kraus(t);
    const KrausList dks = kraus_derivative(ch, t);
    if (ks.size() != dks.size()) {
      throw ValidationError("kraus_bound: derivative list length mismatch");
    }
    double acc = 0.0;
    for (std::size_t a = 0; a < ks.size(); ++a) acc += hs_norm(ks[a] * r0 * dks[a].adjoint());
    return acc;
  };

  int endpoint_limits = 0;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(t_grid.size());
  for (const double t : t_grid) {
    const CptReport cert = certify_cpt(ch, t);
    if (!cert.passed) {
      std::ostringstream os;
      os << "kraus_bound: " << ch.name() << " fails CPT certification at t=" << t;
      throw NumericalError(os.str());
    }
    double value = summand(t);
    if (!std::isfinite(value)) {
      // K_a vanishes where dK_a/dt diverges (e.g. sqrt(1 - s) at t = 0); use the
      // one-sided limit of the finite product.
      value = summand(t + 1e-9 * span);
      ++endpoint_limits;
      if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "kraus_bound: non-finite integrand at t=" << t;
        throw NumericalError(os.str());
      }
    }
    pts.emplace_back(t, value);
  }
  const double average = detail::trapezoid(pts) / span;
  if (!(average > kStationarySpeed)) throw StationaryError("kraus_bound: channel does not move rho0");

  const double purity = rho0.purity();
  BoundReport r;
  r.bound_name = "kraus";
  r.theta = theta;
  r.speed_v = average;
  r.trace_purity = purity;
  r.tau_weak = 2.0 * theta * theta / (std::numbers::pi * std::numbers::pi) *
               std::sqrt(purity) / average;
  r.tau_lower = 0.5 * std::abs(std::cos(theta) - 1.0) * std::sqrt(purity) / average;
  r.add("average_summand", average);
  r.add("grid_span", span);
  r.add("tau_tight", r.tau_lower);
  r.add("tau_weak", r.tau_weak);
  r.add("singular_points_replaced_by_limit", endpoint_limits);
  r.samples = std::move(pts);
  return r;
}

/// kraus_bound on a uniform grid over [0, tau_exact], with tau_exact found by
/// passage_time on the same channel.
inline BoundReport kraus_bound_auto(const KrausChannel& ch, const DensityMatrix& rho0,
                                    double theta, double t_max, int n_grid = 513,
                                    const PassageOptions& opt = {}) {
  const PassageResult passage = passage_time(ch, rho0, theta, t_max, opt);
  if (!passage.reached()) {
    throw NotReachedError("kraus_bound: target f = cos(theta) not reached before t_max");
  }
  const double tau = *passage.tau_exact;
  if (n_grid < 2) throw ValidationError("kraus_bound: n_grid must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n_grid));
  for (int k = 0; k < n_grid; ++k) grid[k] = tau * k / static_cast<double>(n_grid - 1);
  BoundReport r = kraus_bound(ch, rho0, theta, grid);
  r.add("tau_exact", tau);
  r.holds = tau >= r.tau_lower;
  return r;
}

/// Bound for the coherent non-Hermitian generator L_c rho = -i[H, rho] - {Gamma, rho}.
/// The general form uses sqrt(tr[(L_c^dagger rho0)^2]); for pure states the
/// report also carries the expectation-value form
///   4 theta^2 / (sqrt(2) pi^2 sqrt(DH^2 + <Gamma^2> + <Gamma>^2 + i<[H, Gamma]>)).
inline BoundReport non_hermitian_bound(const CMatrix& h, const CMatrix& gamma_op,
                                       const DensityMatrix& rho0, double theta) {
  require_theta(theta, "non_hermitian_bound");
  require_hermitian(h, "non_hermitian_bound H");
  require_hermitian(gamma_op, "non_hermitian_bound Gamma");
  require_operator_dim(h, rho0, "non_hermitian_bound H");
  require_operator_dim(gamma_op, rho0, "non_hermitian_bound Gamma");
  const CMatrix& rho = rho0.matrix();
  const CMatrix x = kI * commutator(h, rho) - anticommutator(gamma_op, rho);
  const double sq = checked_real(trace_product(x, x), "non_hermitian_bound");
  const double v = std::sqrt(std::max(sq, 0.0));
  const double purity = rho0.purity();
  BoundReport r = bound_from_speed("non_hermitian", v, purity, theta);
  if (std::abs(purity - 1.0) <= 1e-9) {
    const double dh2 = variance(h, rho0);
    const double g2 = checked_real(expectation(gamma_op * gamma_op, rho0), "<Gamma^2>");
    const double g1 = checked_real(expectation(gamma_op, rho0), "<Gamma>");
    const cplx comm = expectation(commutator(h, gamma_op), rho0);
    const double q = checked_real(dh2 + g2 + g1 * g1 + kI * comm, "pure-state speed");
    r.add("delta_h_sq", dh2);
    r.add("gamma_sq_mean", g2);
    r.add("gamma_mean_sq", g1 * g1);
    r.add("i_commutator_mean", (kI * comm).real());
    r.add("tau_pure_form", 4.0 * theta * theta /
                               (std::sqrt(2.0) * std::numbers::pi * std::numbers::pi *
                                std::sqrt(q)));
  }
  return r;
}

/// Mandelstam-Tamm: tau >= (pi/2)/DH. For pure states the report also holds
/// the open-system values 1/(sqrt(2) DH) and the Kraus-route 1/(2 DH).
inline BoundReport mt_unitary(const CMatrix& h, const DensityMatrix& rho0) {
  require_hermitian(h, "mt_unitary");
  const double dh = std::sqrt(variance(h, rho0));
  if (!(dh > kStationarySpeed)) throw StationaryError("mt_unitary: energy variance is zero");
  BoundReport r;
  r.bound_name = "mt_unitary";
  r.theta = std::numbers::pi / 2.0;
  r.tau_lower = r.tau_weak = (std::numbers::pi / 2.0) / dh;
  r.speed_v = dh;
  r.trace_purity = rho0.purity();
  r.add("delta_h", dh);
  if (std::abs(r.trace_purity - 1.0) <= 1e-9) {
    r.add("open_bound_pi_2", 1.0 / (std::sqrt(2.0) * dh));
    r.add("kraus_route_pi_2", 1.0 / (2.0 * dh));
  }
  r.note = "orthogonalization measured by fidelity; the relative-purity bound is 1/(sqrt(2) DH)";
  return r;
}

/// Margolus-Levitin: tau >= (pi/2)/(<H> - E0), spectrum shifted so E0 = 0.
inline BoundReport ml_unitary(const CMatrix& h, const DensityMatrix& rho0) {
  require_hermitian(h, "ml_unitary");
  require_operator_dim(h, rho0, "ml_unitary");
  const double purity = rho0.purity();
  if (std::abs(purity - 1.0) > 1e-9) throw ValidationError("ml_unitary: requires a pure state");
  const double ground = herm_eig(h).values.minCoeff();
  const double mean = checked_real(expectation(h, rho0), "ml_unitary <H>") - ground;
  if (!(mean > kStationarySpeed)) throw StationaryError("ml_unitary: <H> - E0 is zero");
  BoundReport r;
  r.bound_name = "ml_unitary";
  r.theta = std::numbers::pi / 2.0;
  r.tau_lower = r.tau_weak = (std::numbers::pi / 2.0) / mean;
  r.speed_v = mean;
  r.trace_purity = purity;
  r.add("ground_energy_shift", ground);
  r.add("mean_energy_above_ground", mean);
  return r;
}

}  // namespace qsl
