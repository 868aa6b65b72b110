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

// Time-parametrized Kraus families rho_t = sum_a K_a(t) rho0 K_a(t)^dagger,
// their derivatives, and complete-positivity / trace-preservation checks.

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qslopen/lindblad.hpp"
#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

using KrausList = std::vector<CMatrix>;

class KrausChannel {
 public:
  using Family = std::function<KrausList(double)>;

  /// `derivative` may be empty, in which case derivatives are taken by finite
  /// differences of `kraus`.
  KrausChannel(std::string name, Index dim, Family kraus, Family derivative = {},
               bool tabulated = false)
      : name_(std::move(name)),
        dim_(dim),
        kraus_(std::move(kraus)),
        derivative_(std::move(derivative)),
        tabulated_(tabulated) {
    if (dim_ < 1) throw ValidationError("KrausChannel: dimension must be positive");
    if (!kraus_) throw ValidationError("KrausChannel: empty Kraus family");
  }

  const std::string& name() const { return name_; }
  Index dim() const { return dim_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }
  bool tabulated() const { return tabulated_; }

  KrausList kraus(double t) const { return checked(kraus_(t), t, "Kraus operators"); }

  std::optional<KrausList> analytic_derivative(double t) const {
    if (!derivative_) return std::nullopt;
    return checked(derivative_(t), t, "Kraus derivatives");
  }

 private:
  KrausList checked(KrausList ops, double t, const char* what) const {
    if (ops.empty()) {
      std::ostringstream os;
      os << name_ << ": no " << what << " at t=" << t;
      throw ValidationError(os.str());
    }
    for (const CMatrix& k : ops) {
      if (k.rows() != dim_ || k.cols() != dim_) {
        std::ostringstream os;
        os << name_ << ": " << what << " at t=" << t << " have shape " << k.rows() << "x"
           << k.cols() << ", expected " << dim_;
        throw ValidationError(os.str());
      }
    }
    return ops;
  }

  std::string name_;
  Index dim_;
  Family kraus_;
  Family derivative_;
  bool tabulated_;
};

/// Passing thresholds for certify_cpt.
inline constexpr double kCptTol = 1e-8;

struct CptReport {
  double t = 0.0;
  /// max |sum_a K_a^dagger K_a - I| over entries.
  double tp_deviation = 0.0;
  /// Smallest eigenvalue of the unnormalized Choi matrix
  /// C = sum_a vec(K_a) vec(K_a)^dagger (row-major vec; tr C = d for a
  /// trace-preserving map, divide by d for the unit-trace convention).
  double choi_min_eigenvalue = 0.0;
  bool passed = false;
  std::string choi_convention =
      "C = sum_a vec(K_a) vec(K_a)^dagger, row-major vec, unnormalized (tr C = d)";
};

inline CptReport certify_cpt(const KrausChannel& ch, double t) {
  if (!(t >= 0.0)) throw ValidationError("certify_cpt: t must be nonnegative");
  const KrausList ops = ch.kraus(t);
  const Index d = ch.dim();
  CMatrix completeness = CMatrix::Zero(d, d);
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : ops) {
    completeness += k.adjoint() * k;
    const CVector v = vec(k);
    choi += v * v.adjoint();
  }
  CptReport report;
  report.t = t;
  report.tp_deviation = (completeness - identity(d)).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (choi + choi.adjoint()),
                                                Eigen::EigenvaluesOnly);
  report.choi_min_eigenvalue = solver.eigenvalues().minCoeff();
  report.passed = std::isfinite(report.tp_deviation) && report.tp_deviation <= kCptTol &&
                  report.choi_min_eigenvalue >= -kCptTol;
  return report;
}

/// sum_a K_a(t) rho0 K_a(t)^dagger, after certifying the family at t.
inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho0, double t) {
  if (rho0.dim() != ch.dim()) throw ValidationError("apply_channel: dimension mismatch");
  const CptReport cert = certify_cpt(ch, t);
  if (!cert.passed) {
    std::ostringstream os;
    os << ch.name() << ": CPT certification failed at t=" << t << " (trace deviation "
       << cert.tp_deviation << ", Choi min eigenvalue " << cert.choi_min_eigenvalue << ")";
    throw NumericalError(os.str());
  }
  CMatrix out = CMatrix::Zero(ch.dim(), ch.dim());
  for (const CMatrix& k : ch.kraus(t)) out += k * rho0.matrix() * k.adjoint();
  return DensityMatrix(std::move(out));
}

/// Default finite-difference step h = 1e-6 max(1, t).
inline double default_derivative_step(double t) { return 1e-6 * std::max(1.0, t); }

/// dK_a/dt at t: the analytic derivative when the family supplies one,
/// otherwise a central difference (second-order forward difference for t < h).
inline KrausList kraus_derivative(const KrausChannel& ch, double t,
                                  std::optional<double> h = std::nullopt) {
  if (!(t >= 0.0)) throw ValidationError("kraus_derivative: t must be nonnegative");
  if (auto analytic = ch.analytic_derivative(t)) return *std::move(analytic);
  if (ch.tabulated()) {
    throw ValidationError(ch.name() +
                          ": derivative unavailable (tabulated family without derivatives)");
  }
  const double step = h.value_or(default_derivative_step(t));
  if (!(step > 0.0)) throw ValidationError("kraus_derivative: h must be positive");

  auto require_same_count = [&](const KrausList& a, const KrausList& b) {
    if (a.size() != b.size()) {
      std::ostringstream os;
      os << ch.name() << ": Kraus list length changes near t=" << t << " (" << a.size()
         << " vs " << b.size() << ")";
      throw ValidationError(os.str());
    }
  };

  KrausList out;
  if (t >= step) {
    const KrausList plus = ch.kraus(t + step);
    const KrausList minus = ch.kraus(t - step);
    require_same_count(plus, minus);
    require_same_count(plus, ch.kraus(t));
    for (std::size_t a = 0; a < plus.size(); ++a) {
      out.push_back((plus[a] - minus[a]) / (2.0 * step));
    }
  } else {
    const KrausList k0 = ch.kraus(t);
    const KrausList k1 = ch.kraus(t + step);
    const KrausList k2 = ch.kraus(t + 2.0 * step);
    require_same_count(k0, k1);
    require_same_count(k0, k2);
    for (std::size_t a = 0; a < k0.size(); ++a) {
      out.push_back((-3.0 * k0[a] + 4.0 * k1[a] - k2[a]) / (2.0 * step));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shipped families.

inline KrausChannel identity_channel(Index d) {
  return KrausChannel(
      "identity", d, [d](double) { return KrausList{identity(d)}; },
      [d](double) { return KrausList{CMatrix::Zero(d, d)}; });
}

namespace detail {

/// Single-qubit dephasing Kraus pair for coherence factor s.
inline KrausList dephasing_kraus(double s) {
  return {std::sqrt((1.0 + s) / 2.0) * identity(2),
          std::sqrt(std::max(0.0, (1.0 - s) / 2.0)) * pauli(Axis::z)};
}

inline KrausList dephasing_kraus_derivative(double s, double ds) {
  // d/dt sqrt(g) = g' / (2 sqrt(g)); diverges at s = 1 for the sigma_z term.
  return {ds / (4.0 * std::sqrt((1.0 + s) / 2.0)) * identity(2),
          -ds / (4.0 * std::sqrt((1.0 - s) / 2.0)) * pauli(Axis::z)};
}

}  // namespace detail

/// Kraus form of drho/dt = -gamma rho + gamma sigma_z rho sigma_z:
/// K1 = sqrt((1+s)/2) I, K2 = sqrt((1-s)/2) sigma_z with s = exp(-2 gamma t).
inline KrausChannel dephasing_channel(double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("dephasing_channel: gamma must be >= 0");
  return KrausChannel(
      "dephasing", 2,
      [gamma](double t) { return detail::dephasing_kraus(std::exp(-2.0 * gamma * t)); },
      [gamma](double t) {
        const double s = std::exp(-2.0 * gamma * t);
        return detail::dephasing_kraus_derivative(s, -2.0 * gamma * s);
      });
}

/// Dephasing with a time-dependent rate gamma(t); `integrated_rate(t)` must
/// return the integral of gamma over [0, t].
inline KrausChannel dephasing_channel_td(std::function<double(double)> rate,
                                         std::function<double(double)> integrated_rate) {
  if (!rate || !integrated_rate) {
    throw ValidationError("dephasing_channel_td: rate functions required");
  }
  return KrausChannel(
      "dephasing_td", 2,
      [integrated_rate](double t) {
        return detail::dephasing_kraus(std::exp(-2.0 * integrated_rate(t)));
      },
      [rate, integrated_rate](double t) {
        const double s = std::exp(-2.0 * integrated_rate(t));
        return detail::dephasing_kraus_derivative(s, -2.0 * rate(t) * s);
      });
}

/// Kraus form of the isotropic depolarizing semigroup with Bloch contraction
/// s = exp(-8 gamma t): K0 = sqrt((1+3s)/4) I, K_i = sqrt((1-s)/4) sigma_i.
inline KrausChannel isotropic_channel(double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("isotropic_channel: gamma must be >= 0");
  return KrausChannel(
      "isotropic", 2,
      [gamma](double t) {
        const double s = std::exp(-8.0 * gamma * t);
        const double side = std::sqrt(std::max(0.0, (1.0 - s) / 4.0));
        return KrausList{std::sqrt((1.0 + 3.0 * s) / 4.0) * identity(2),
                         side * pauli(Axis::x), side * pauli(Axis::y),
                         side * pauli(Axis::z)};
      },
      [gamma](double t) {
        const double s = std::exp(-8.0 * gamma * t);
        const double ds = -8.0 * gamma * s;
        const double side = -ds / (8.0 * std::sqrt((1.0 - s) / 4.0));
        return KrausList{3.0 * ds / (8.0 * std::sqrt((1.0 + 3.0 * s) / 4.0)) * identity(2),
                         side * pauli(Axis::x), side * pauli(Axis::y),
                         side * pauli(Axis::z)};
      });
}

/// Single-operator unitary family K = exp(-i (H - energy_shift) t).
inline KrausChannel unitary_channel(const CMatrix& hamiltonian, double energy_shift = 0.0) {
  require_hermitian(hamiltonian, "unitary_channel");
  const Index d = hamiltonian.rows();
  const CMatrix shifted = hamiltonian - energy_shift * identity(d);
  const HermitianEigen eig = herm_eig(shifted);
  auto propagator = [eig](double t) {
    const CVector phases = (-kI * t * eig.values.cast<cplx>()).array().exp();
    return CMatrix(eig.vectors * phases.asDiagonal() * eig.vectors.adjoint());
  };
  return KrausChannel(
      "unitary", d, [propagator](double t) { return KrausList{propagator(t)}; },
      [propagator, shifted](double t) {
        return KrausList{CMatrix(-kI * shifted * propagator(t))};
      });
}

/// Family given only at tabulated times. Queries at any other time throw;
/// no interpolation is performed. Derivatives, if any, must be tabulated too.
inline KrausChannel tabulated_channel(std::string name, Index dim,
                                      std::map<double, KrausList> kraus,
                                      std::map<double, KrausList> derivatives = {}) {
  auto lookup = [name](const std::map<double, KrausList>& table, double t) {
    const auto it = table.find(t);
    if (it == table.end()) {
      std::ostringstream os;
      os << name << ": time " << t << " is not tabulated (interpolation is not supported)";
      throw ValidationError(os.str());
    }
    return it->second;
  };
  KrausChannel::Family deriv;
  if (!derivatives.empty()) {
    deriv = [lookup, derivatives](double t) { return lookup(derivatives, t); };
  }
  return KrausChannel(
      std::move(name), dim, [lookup, kraus](double t) { return lookup(kraus, t); },
      std::move(deriv), /*tabulated=*/true);
}

}  // namespace qsl
