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

// Exactly solvable models: isotropic decoherence of a qubit, local pure
// dephasing of N qubits, unitary reference dynamics and the nonlinear
// gain/loss equation. Also the ModelSpec record that binds them to model
// files.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qslopen/bounds.hpp"
#include "qslopen/channels.hpp"
#include "qslopen/lindblad.hpp"
#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

inline void require_rate(double gamma, std::string_view what) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    std::ostringstream os;
    os << what << ": gamma=" << gamma << " must be positive";
    throw ValidationError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Isotropic environment: d_t rho = -gamma sum_i [sigma_i, [sigma_i, rho]].

/// The double commutator equals sum_i 2 gamma (sigma_i rho sigma_i - rho),
/// i.e. jump operators sqrt(2 gamma) sigma_i and no Hamiltonian.
inline Lindbladian isotropic_model(double gamma) {
  require_rate(gamma, "isotropic_model");
  const double amp = std::sqrt(2.0 * gamma);
  return Lindbladian(CMatrix::Zero(2, 2),
                     {amp * pauli(Axis::x), amp * pauli(Axis::y), amp * pauli(Axis::z)});
}

/// Closed-form solution of the isotropic model. The Bloch vector contracts as
/// s(t) = exp(-8 gamma t).
class IsotropicEnvironment {
 public:
  explicit IsotropicEnvironment(double gamma) : gamma_(gamma) {
    require_rate(gamma, "IsotropicEnvironment");
  }

  double gamma() const { return gamma_; }
  Lindbladian lindbladian() const { return isotropic_model(gamma_); }
  KrausChannel channel() const { return isotropic_channel(gamma_); }

  double decay(double t) const { return std::exp(-8.0 * gamma_ * t); }

  DensityMatrix closed_form(double t, const BlochState& b) const {
    require_valid_bloch(b);
    const double s = decay(t);
    return bloch_to_density({s * b.r1, s * b.r2, s * b.r3});
  }

  /// f(t) = (1 + s(t) |r|^2) / (1 + |r|^2).
  double f_closed(double t, const BlochState& b) const {
    require_valid_bloch(b);
    const double r2 = b.norm_squared();
    return (1.0 + decay(t) * r2) / (1.0 + r2);
  }

  /// f(infinity) = 1 / (2 tr rho0^2) = 1 / (1 + |r|^2).
  static double f_infinity(const BlochState& b) { return 1.0 / (1.0 + b.norm_squared()); }

  /// Largest reachable theta, arccos f(infinity) (pi/3 for pure states).
  static double max_theta(const BlochState& b) { return std::acos(f_infinity(b)); }

  /// tau = -(1/(8 gamma)) log[(cos(theta)(1 + |r|^2) - 1) / |r|^2]; empty when
  /// the target lies at or beyond the asymptote f(infinity), up to rounding.
  std::optional<double> tau_exact(double theta, const BlochState& b) const {
    require_theta(theta, "tau_exact");
    require_valid_bloch(b);
    const double r2 = b.norm_squared();
    if (r2 <= 0.0) return std::nullopt;
    const double arg = (std::cos(theta) * (1.0 + r2) - 1.0) / r2;
    if (!(arg > 4.0 * std::numeric_limits<double>::epsilon())) return std::nullopt;
    return -std::log(arg) / (8.0 * gamma_);
  }

  /// tau_B = theta^2 tr rho0^2 / (pi^2 gamma sqrt(2 |r|^2)).
  double tau_B(double theta, const BlochState& b) const {
    require_theta(theta, "tau_B");
    require_valid_bloch(b);
    const double r2 = b.norm_squared();
    if (r2 <= 0.0) throw StationaryError("tau_B: maximally mixed state");
    const double purity = 0.5 * (1.0 + r2);
    return theta * theta * purity /
           (std::numbers::pi * std::numbers::pi * gamma_ * std::sqrt(2.0 * r2));
  }

 private:
  double gamma_;
};

// ---------------------------------------------------------------------------
// Local pure dephasing: jumps sqrt(gamma) sigma_z^(k), k = 1..N.

inline Lindbladian dephasing_model(int n_qubits, double gamma) {
  require_qubit_count(n_qubits, "dephasing_model");
  require_rate(gamma, "dephasing_model");
  const Index d = Index{1} << n_qubits;
  std::vector<CMatrix> jumps;
  jumps.reserve(static_cast<std::size_t>(n_qubits));
  for (int k = 0; k < n_qubits; ++k) {
    jumps.push_back(std::sqrt(gamma) * sigma_on(n_qubits, k, Axis::z));
  }
  return Lindbladian(CMatrix::Zero(d, d), std::move(jumps));
}

/// Single-qubit dephasing with time-dependent rate gamma(t) >= 0.
inline TimeDependentLindbladian dephasing_model_td(std::function<double(double)> rate) {
  if (!rate) throw ValidationError("dephasing_model_td: rate function required");
  return {[rate = std::move(rate)](double t) {
    const double g = rate(t);
    if (!(g >= 0.0)) throw ValidationError("dephasing_model_td: negative rate");
    return Lindbladian(CMatrix::Zero(2, 2), {std::sqrt(g) * pauli(Axis::z)});
  }};
}

/// Relative purity of GHZ(N) under local dephasing: (1 + exp(-2 N gamma t))/2.
inline double ghz_dephasing_f(int n, double gamma, double t) {
  return 0.5 * (1.0 + std::exp(-2.0 * n * gamma * t));
}

/// Relative purity of |+>^N under local dephasing: ((1 + exp(-2 gamma t))/2)^N.
inline double product_plus_dephasing_f(int n, double gamma, double t) {
  return std::pow(0.5 * (1.0 + std::exp(-2.0 * gamma * t)), n);
}

// ---------------------------------------------------------------------------
// Gain/loss dynamics: d_t rho = -i[H, rho] - {Gamma, rho} + 2 tr(rho Gamma) rho.

inline void require_gain_loss_inputs(const CMatrix& h, const CMatrix& gamma_op,
                                     const DensityMatrix& rho0, std::string_view what) {
  require_hermitian(h, std::string(what) + " H");
  require_hermitian(gamma_op, std::string(what) + " Gamma");
  require_operator_dim(h, rho0, what);
  require_operator_dim(gamma_op, rho0, what);
}

/// Fixed-step RK4 integration of the nonlinear gain/loss equation.
inline std::vector<TrajectorySample> gain_loss_evolve(const CMatrix& h, const CMatrix& gamma_op,
                                                      const DensityMatrix& rho0, double t_end,
                                                      double dt) {
  require_gain_loss_inputs(h, gamma_op, rho0, "gain_loss_evolve");
  auto rhs = [&](double, const CMatrix& rho) -> CMatrix {
    const cplx loss = trace_product(rho, gamma_op);
    return -kI * commutator(h, rho) - anticommutator(gamma_op, rho) + 2.0 * loss * rho;
  };
  return detail::integrate_rk4(rhs, rho0, t_end, dt, "gain_loss_evolve");
}

/// Initial speed sqrt(tr[(L_c^dagger rho0)^2]) of the linearized generator
/// L_c rho = -i[H, rho] - {Gamma - <Gamma>_0, rho}.
inline double gain_loss_speed0(const CMatrix& h, const CMatrix& gamma_op,
                               const DensityMatrix& rho0) {
  require_gain_loss_inputs(h, gamma_op, rho0, "gain_loss_speed0");
  const double mean = checked_real(expectation(gamma_op, rho0), "<Gamma>");
  const CMatrix shifted = gamma_op - mean * identity(rho0.dim());
  const CMatrix& rho = rho0.matrix();
  const CMatrix x = kI * commutator(h, rho) - anticommutator(shifted, rho);
  const double sq = checked_real(trace_product(x, x), "gain_loss_speed0");
  return std::sqrt(std::max(sq, 0.0));
}

/// Pure-state speed sqrt(2 (DH^2 + DGamma^2 - i<[Gamma, H]>)).
inline double gain_loss_speed0_pure(const CMatrix& h, const CMatrix& gamma_op,
                                    const DensityMatrix& rho0) {
  require_gain_loss_inputs(h, gamma_op, rho0, "gain_loss_speed0_pure");
  if (std::abs(rho0.purity() - 1.0) > 1e-9) {
    throw ValidationError("gain_loss_speed0_pure: requires a pure state");
  }
  const cplx comm = expectation(commutator(gamma_op, h), rho0);
  const double sq = checked_real(
      2.0 * (variance(h, rho0) + variance(gamma_op, rho0) - kI * comm), "gain-loss speed");
  return std::sqrt(std::max(sq, 0.0));
}

// ---------------------------------------------------------------------------
// Model specifications.

enum class ModelKind { isotropic, dephasing_local, unitary, gain_loss, custom };

inline std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::isotropic:
      return "isotropic";
    case ModelKind::dephasing_local:
      return "dephasing_local";
    case ModelKind::unitary:
      return "unitary";
    case ModelKind::gain_loss:
      return "gain_loss";
    case ModelKind::custom:
      return "custom";
  }
  return "unknown";
}

inline std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::isotropic, ModelKind::dephasing_local, ModelKind::unitary,
                      ModelKind::gain_loss, ModelKind::custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

/// Named constructor ("plus", "ghz", ...) or an explicit density matrix.
using InitialState = std::variant<std::monostate, std::string, CMatrix>;

struct ModelSpec {
  ModelKind kind = ModelKind::custom;
  std::optional<double> gamma;
  std::optional<int> n_qubits;
  std::optional<BlochState> bloch;
  std::optional<CMatrix> hamiltonian;
  std::optional<CMatrix> gamma_op;
  std::vector<CMatrix> jumps;
  InitialState initial_state;
};

/// A model ready for evaluation. Which members are set depends on the kind.
struct LoadedModel {
  LoadedModel(ModelKind k, std::string desc, DensityMatrix state)
      : kind(k), description(std::move(desc)), rho0(std::move(state)) {}

  ModelKind kind;
  std::string description;
  DensityMatrix rho0;
  std::optional<Lindbladian> lindbladian;
  std::optional<KrausChannel> channel;
  std::optional<IsotropicEnvironment> isotropic;
  std::optional<BlochState> bloch;
  /// Closed-form relative purity f(t), when the model has one.
  std::function<double(double)> f_closed;
  /// Gain/loss operators (the flow is nonlinear, so there is no Lindbladian).
  std::optional<CMatrix> gain_loss_h;
  std::optional<CMatrix> gain_loss_gamma;
  /// Characteristic rate (inverse time) for default time windows.
  double rate_scale = 1.0;
};

namespace detail {

inline int qubits_for_dim(Index d) {
  int n = 0;
  while ((Index{1} << n) < d) ++n;
  return (Index{1} << n) == d ? n : -1;
}

inline DensityMatrix named_state(const std::string& name, Index dim,
                                 const std::optional<BlochState>& bloch) {
  if (name == "bloch") {
    if (!bloch) throw ValidationError("initial_state \"bloch\" requires a bloch field");
    if (dim != 2) throw ValidationError("initial_state \"bloch\" requires a qubit model");
    return bloch_to_density(*bloch);
  }
  if (name == "maximally_mixed") return maximally_mixed(dim);
  const int n = qubits_for_dim(dim);
  if (n < 1) {
    throw ValidationError("initial_state \"" + name + "\" requires a qubit-register dimension");
  }
  if (name == "plus" || name == "product_plus") return product_plus(n);
  if (name == "ghz") return ghz(n);
  if (name == "zero") return basis_state(n, 0);
  if (name == "one") return basis_state(n, dim - 1);
  throw ValidationError("unknown initial_state name \"" + name + "\"");
}

inline DensityMatrix resolve_initial_state(const ModelSpec& spec, Index dim,
                                           const std::string& fallback) {
  if (const auto* name = std::get_if<std::string>(&spec.initial_state)) {
    return named_state(*name, dim, spec.bloch);
  }
  if (const auto* m = std::get_if<CMatrix>(&spec.initial_state)) {
    if (m->rows() != dim || m->cols() != dim) {
      std::ostringstream os;
      os << "initial_state matrix is " << m->rows() << "x" << m->cols() << ", model dim "
         << dim;
      throw ValidationError(os.str());
    }
    return DensityMatrix::from_user(*m);
  }
  if (fallback.empty()) throw ValidationError("initial_state is required for this model");
  return named_state(fallback, dim, spec.bloch);
}

inline double require_gamma(const ModelSpec& spec) {
  if (!spec.gamma) {
    throw ValidationError(std::string(to_string(spec.kind)) + " model requires gamma");
  }
  require_rate(*spec.gamma, to_string(spec.kind));
  return *spec.gamma;
}

inline BlochState bloch_of(const DensityMatrix& rho) {
  return {expectation(pauli(Axis::x), rho).real(), expectation(pauli(Axis::y), rho).real(),
          expectation(pauli(Axis::z), rho).real()};
}

inline double generator_scale(const Lindbladian& lind) {
  double scale = hs_norm(lind.hamiltonian());
  for (const CMatrix& f : lind.jumps()) scale += f.squaredNorm();
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace detail

/// Builds the generator, channel and closed forms for a validated spec.
inline LoadedModel load_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::isotropic: {
      const double gamma = detail::require_gamma(spec);
      IsotropicEnvironment env(gamma);
      DensityMatrix rho0 = spec.bloch && std::holds_alternative<std::monostate>(spec.initial_state)
                               ? bloch_to_density(*spec.bloch)
                               : detail::resolve_initial_state(spec, 2, "");
      const BlochState b = detail::bloch_of(rho0);
      LoadedModel m{ModelKind::isotropic, "isotropic decoherence", std::move(rho0)};
      m.lindbladian = env.lindbladian();
      m.channel = env.channel();
      m.isotropic = env;
      m.bloch = b;
      m.f_closed = [env, b](double t) { return env.f_closed(t, b); };
      m.rate_scale = 8.0 * gamma;
      return m;
    }
    case ModelKind::dephasing_local: {
      const double gamma = detail::require_gamma(spec);
      const int n = spec.n_qubits.value_or(1);
      require_qubit_count(n, "dephasing_local");
      const Index dim = Index{1} << n;
      DensityMatrix rho0 = detail::resolve_initial_state(spec, dim, n == 1 ? "plus" : "ghz");
      LoadedModel m{ModelKind::dephasing_local, "local pure dephasing", std::move(rho0)};
      m.lindbladian = dephasing_model(n, gamma);
      if (n == 1) m.channel = dephasing_channel(gamma);
      if (const auto* name = std::get_if<std::string>(&spec.initial_state);
          name == nullptr || *name == "plus" || *name == "product_plus" || *name == "ghz") {
        const bool is_ghz = (name == nullptr && n > 1) || (name != nullptr && *name == "ghz");
        if (is_ghz) {
          m.f_closed = [n, gamma](double t) { return ghz_dephasing_f(n, gamma, t); };
        } else {
          m.f_closed = [n, gamma](double t) { return product_plus_dephasing_f(n, gamma, t); };
        }
      }
      m.rate_scale = 2.0 * gamma * n;
      return m;
    }
    case ModelKind::unitary: {
      if (!spec.hamiltonian) throw ValidationError("unitary model requires hamiltonian");
      Lindbladian lind(*spec.hamiltonian);
      DensityMatrix rho0 =
          detail::resolve_initial_state(spec, lind.dim(), lind.dim() == 2 ? "plus" : "");
      const double shift = checked_real(expectation(lind.hamiltonian(), rho0), "<H>");
      LoadedModel m{ModelKind::unitary, "unitary dynamics", std::move(rho0)};
      m.channel = unitary_channel(lind.hamiltonian(), shift);
      m.rate_scale = detail::generator_scale(lind);
      m.lindbladian = std::move(lind);
      return m;
    }
    case ModelKind::gain_loss: {
      if (!spec.hamiltonian || !spec.gamma_op) {
        throw ValidationError("gain_loss model requires hamiltonian and gamma_op");
      }
      require_hermitian(*spec.hamiltonian, "gain_loss hamiltonian");
      require_hermitian(*spec.gamma_op, "gain_loss gamma_op");
      if (spec.gamma_op->rows() != spec.hamiltonian->rows()) {
        throw ValidationError("gain_loss: hamiltonian and gamma_op dimensions differ");
      }
      const Index dim = spec.hamiltonian->rows();
      DensityMatrix rho0 = detail::resolve_initial_state(spec, dim, dim == 2 ? "plus" : "");
      LoadedModel m{ModelKind::gain_loss, "gain/loss dynamics", std::move(rho0)};
      m.gain_loss_h = *spec.hamiltonian;
      m.gain_loss_gamma = *spec.gamma_op;
      const double scale = hs_norm(*spec.hamiltonian) + hs_norm(*spec.gamma_op);
      m.rate_scale = scale > 0.0 ? scale : 1.0;
      return m;
    }
    case ModelKind::custom: {
      Index dim = 0;
      if (spec.hamiltonian) {
        dim = spec.hamiltonian->rows();
      } else if (!spec.jumps.empty()) {
        dim = spec.jumps.front().rows();
      } else {
        throw ValidationError("custom model requires a hamiltonian or jumps");
      }
      Lindbladian lind(spec.hamiltonian.value_or(CMatrix::Zero(dim, dim)), spec.jumps);
      DensityMatrix rho0 = detail::resolve_initial_state(spec, dim, "");
      LoadedModel m{ModelKind::custom, "custom Lindbladian", std::move(rho0)};
      m.rate_scale = detail::generator_scale(lind);
      m.lindbladian = std::move(lind);
      return m;
    }
  }
  throw ValidationError("unknown model kind");
}

}  // namespace qsl
