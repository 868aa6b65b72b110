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

// Lindblad generators, their Hilbert-Schmidt adjoints, Liouvillian matrices
// and time evolution.
//
// Vectorization is row-major: vec(rho)[i*d + j] = rho(i, j), so that
// vec(A rho B) = (A (x) B^T) vec(rho). Rates are absorbed into the jump
// operators, F_k = sqrt(gamma_k) A_k.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

class Lindbladian {
 public:
  Lindbladian(CMatrix hamiltonian, std::vector<CMatrix> jumps = {})
      : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
    require_finite(hamiltonian_, "Lindbladian hamiltonian");
    require_hermitian(hamiltonian_, "Lindbladian hamiltonian");
    const Index d = hamiltonian_.rows();
    decay_ = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      const CMatrix& f = jumps_[k];
      if (f.rows() != d || f.cols() != d) {
        std::ostringstream os;
        os << "Lindbladian: jump operator " << k << " is " << f.rows() << "x" << f.cols()
           << ", expected " << d << "x" << d;
        throw ValidationError(os.str());
      }
      require_finite(f, "Lindbladian jump operator");
      decay_ += f.adjoint() * f;
    }
  }

  static Lindbladian zero(Index d) { return Lindbladian(CMatrix::Zero(d, d)); }

  Index dim() const { return hamiltonian_.rows(); }
  const CMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<CMatrix>& jumps() const { return jumps_; }

  /// sum_k F_k^dagger F_k.
  const CMatrix& decay_operator() const { return decay_; }

  /// L rho = -i[H, rho] + sum_k (F_k rho F_k^dagger - {F_k^dagger F_k, rho}/2).
  CMatrix apply(const CMatrix& rho) const {
    require_shape(rho, "apply_generator");
    CMatrix out = -kI * commutator(hamiltonian_, rho) - 0.5 * anticommutator(decay_, rho);
    for (const CMatrix& f : jumps_) out += f * rho * f.adjoint();
    return out;
  }

  /// L^dagger a = i[H, a] + sum_k (F_k^dagger a F_k - {F_k^dagger F_k, a}/2).
  CMatrix apply_adjoint(const CMatrix& a) const {
    require_shape(a, "apply_adjoint");
    CMatrix out = kI * commutator(hamiltonian_, a) - 0.5 * anticommutator(decay_, a);
    for (const CMatrix& f : jumps_) out += f.adjoint() * a * f;
    return out;
  }

 private:
  void require_shape(const CMatrix& m, const char* what) const {
    if (m.rows() != dim() || m.cols() != dim()) {
      std::ostringstream os;
      os << what << ": operand is " << m.rows() << "x" << m.cols() << ", generator dim "
         << dim();
      throw ValidationError(os.str());
    }
  }

  CMatrix hamiltonian_;
  std::vector<CMatrix> jumps_;
  CMatrix decay_;
};

inline CMatrix apply_generator(const Lindbladian& lind, const DensityMatrix& rho) {
  return lind.apply(rho.matrix());
}

inline CMatrix apply_adjoint(const Lindbladian& lind, const DensityMatrix& rho) {
  return lind.apply_adjoint(rho.matrix());
}

/// Row-major vectorization.
inline CVector vec(const CMatrix& m) {
  const Index r = m.rows();
  const Index c = m.cols();
  CVector out(r * c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) out(i * c + j) = m(i, j);
  }
  return out;
}

inline CMatrix unvec(const CVector& v, Index d) {
  if (v.size() != d * d) throw ValidationError("unvec: length is not d^2");
  CMatrix out(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out(i, j) = v(i * d + j);
  }
  return out;
}

/// d^2 x d^2 matrix M with M vec(rho) = vec(L rho).
inline CMatrix liouvillian_matrix(const Lindbladian& lind, Index cap = kDefaultDimensionCap) {
  const Index d = lind.dim();
  if (d * d > cap) {
    std::ostringstream os;
    os << "Liouvillian of a " << d << "-level system has " << d * d
       << " rows, cap is " << cap;
    throw DimensionError(os.str());
  }
  const CMatrix id = identity(d);
  const CMatrix& h = lind.hamiltonian();
  const CMatrix& g = lind.decay_operator();
  CMatrix m = -kI * (kron(h, id, cap) - kron(id, h.transpose(), cap));
  m -= 0.5 * (kron(g, id, cap) + kron(id, g.transpose(), cap));
  for (const CMatrix& f : lind.jumps()) m += kron(f, f.conjugate(), cap);
  return m;
}

struct TrajectorySample {
  double t;
  DensityMatrix rho;
  double f;  // relative purity against the initial state
};

inline void require_ascending_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || !std::isfinite(times[k])) {
      throw ValidationError("evolve: times must be finite and nonnegative");
    }
    if (k > 0 && times[k] < times[k - 1]) {
      throw ValidationError("evolve: times must be ascending");
    }
  }
}

/// rho_t = unvec(expm(t M) vec(rho0)) at each requested time. The
/// exponential is recomputed per time point so errors do not accumulate.
inline std::vector<TrajectorySample> evolve(const Lindbladian& lind, const DensityMatrix& rho0,
                                            std::span<const double> times) {
  if (lind.dim() != rho0.dim()) throw ValidationError("evolve: dimension mismatch");
  require_ascending_times(times);
  const CMatrix m = liouvillian_matrix(lind);
  const CVector v0 = vec(rho0.matrix());
  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  for (const double t : times) {
    CMatrix rho_t = unvec(expm(t * m) * v0, rho0.dim());
    DensityMatrix rho(std::move(rho_t));
    const double f = relative_purity(rho0, rho);
    out.push_back({t, std::move(rho), f});
  }
  return out;
}

struct TimeDependentLindbladian {
  /// Generator at time t; assumed piecewise continuous in t.
  std::function<Lindbladian(double)> generator_at;
};

/// Trace and Hermiticity tolerance enforced on every integrator step.
inline constexpr double kIntegratorTol = 1e-8;

namespace detail {

/// One classical fourth-order Runge-Kutta step of drho/dt = rhs(t, rho).
template <typename Rhs>
CMatrix rk4_step(const Rhs& rhs, double t, const CMatrix& rho, double h) {
  const CMatrix k1 = rhs(t, rho);
  const CMatrix k2 = rhs(t + 0.5 * h, rho + (0.5 * h) * k1);
  const CMatrix k3 = rhs(t + 0.5 * h, rho + (0.5 * h) * k2);
  const CMatrix k4 = rhs(t + h, rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline void check_step(const CMatrix& rho, double t, double dt, const char* what) {
  const std::string problem = DensityMatrix::invariant_violation(rho, kIntegratorTol);
  if (!problem.empty()) {
    std::ostringstream os;
    os << what << ": step size dt=" << dt << " rejected at t=" << t << " (" << problem
       << "); reduce dt";
    throw NumericalError(os.str());
  }
}

/// Uniform step count covering [0, t_end] with steps no longer than dt.
inline long step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be nonnegative");
  }
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

/// Fixed-step RK4 from 0 to t_end, recording every step. The step is
/// t_end / ceil(t_end / dt), i.e. dt shrunk just enough to land on t_end.
template <typename Rhs>
std::vector<TrajectorySample> integrate_rk4(const Rhs& rhs, const DensityMatrix& rho0,
                                            double t_end, double dt, const char* what) {
  const long n = step_count(t_end, dt);
  const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back({0.0, rho0, 1.0});
  CMatrix rho = rho0.matrix();
  for (long k = 0; k < n; ++k) {
    const double t = h * static_cast<double>(k);
    rho = rk4_step(rhs, t, rho, h);
    const double t_next = (k + 1 == n) ? t_end : h * static_cast<double>(k + 1);
    check_step(rho, t_next, h, what);
    DensityMatrix state(rho, kIntegratorTol);
    const double f = relative_purity(rho0, state);
    out.push_back({t_next, std::move(state), f});
  }
  return out;
}

}  // namespace detail

/// Fixed-step RK4 integration of drho/dt = L(t) rho on [0, t_end]; one
/// sample per step, including t = 0 and t = t_end.
inline std::vector<TrajectorySample> evolve_td(const TimeDependentLindbladian& tdl,
                                               const DensityMatrix& rho0, double t_end,
                                               double dt) {
  if (!tdl.generator_at) throw ValidationError("evolve_td: empty generator");
  auto rhs = [&tdl](double t, const CMatrix& rho) { return tdl.generator_at(t).apply(rho); };
  return detail::integrate_rk4(rhs, rho0, t_end, dt, "evolve_td");
}

}  // namespace qsl
