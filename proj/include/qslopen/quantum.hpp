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

// States, qubit operators and the scalar functionals evaluated on them.
// Units: hbar = 1 throughout.

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>

#include "qslopen/linalg.hpp"

namespace qsl {

/// Default tolerance for the density-matrix invariants.
inline constexpr double kStateTol = 1e-10;

/// Largest register accepted by the qubit constructors.
inline constexpr int kMaxQubits = 12;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Validates all invariants against `tol`; throws NumericalError on
  /// violation (validation of user-supplied matrices goes through
  /// `from_user`, which throws ValidationError instead).
  explicit DensityMatrix(CMatrix m, double tol = kStateTol) : m_(std::move(m)) {
    if (const std::string problem = invariant_violation(m_, tol); !problem.empty()) {
      throw NumericalError("invalid density matrix: " + problem);
    }
  }

  static DensityMatrix from_user(CMatrix m, double tol = kStateTol) {
    if (const std::string problem = invariant_violation(m, tol); !problem.empty()) {
      throw ValidationError("invalid density matrix: " + problem);
    }
    return DensityMatrix(std::move(m), Trusted{});
  }

  /// |psi><psi| for a normalized state vector (normalized here if needed).
  static DensityMatrix from_pure(const CVector& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0) || !psi.allFinite()) {
      throw ValidationError("from_pure: state vector must be finite and nonzero");
    }
    const CVector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint(), Trusted{});
  }

  /// Human-readable description of the first violated invariant, or "".
  static std::string invariant_violation(const CMatrix& m, double tol) {
    std::ostringstream os;
    if (m.rows() != m.cols() || m.rows() == 0) {
      os << "shape " << m.rows() << "x" << m.cols() << " is not square";
      return os.str();
    }
    if (!m.allFinite()) return "non-finite entries";
    if (const double dev = hermitian_deviation(m); dev > tol) {
      os << "not Hermitian (deviation " << dev << ")";
      return os.str();
    }
    const cplx tr = m.trace();
    if (std::abs(tr - 1.0) > tol) {
      os << "trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i != 1";
      return os.str();
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return "eigensolver failure";
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol) {
      os << "negative eigenvalue " << min_eig;
      return os.str();
    }
    const double purity = solver.eigenvalues().squaredNorm();
    const double d = static_cast<double>(m.rows());
    if (purity < 1.0 / d - tol || purity > 1.0 + tol) {
      os << "purity " << purity << " outside [1/d, 1]";
      return os.str();
    }
    return {};
  }

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

  /// tr rho^2.
  double purity() const { return checked_real(trace_product(m_, m_), "purity"); }

 private:
  struct Trusted {};
  DensityMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

struct BlochState {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  double norm_squared() const { return r1 * r1 + r2 * r2 + r3 * r3; }
};

inline void require_valid_bloch(const BlochState& b) {
  if (!std::isfinite(b.norm_squared()) || b.norm_squared() > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "Bloch vector (" << b.r1 << ", " << b.r2 << ", " << b.r3
       << ") has norm " << std::sqrt(b.norm_squared()) << " > 1";
    throw ValidationError(os.str());
  }
}

enum class Axis { x, y, z };

inline CMatrix pauli(Axis axis) {
  CMatrix m(2, 2);
  switch (axis) {
    case Axis::x:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::y:
      m << 0.0, -kI, kI, 0.0;
      break;
    case Axis::z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

inline void require_qubit_count(int n_qubits, std::string_view what) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    std::ostringstream os;
    os << what << ": qubit count " << n_qubits << " outside [1, " << kMaxQubits << "]";
    throw ValidationError(os.str());
  }
}

/// I (x) ... (x) sigma_axis (x) ... (x) I with the Pauli on `site`
/// (site 0 is the most significant tensor factor).
inline CMatrix sigma_on(int n_qubits, int site, Axis axis) {
  require_qubit_count(n_qubits, "sigma_on");
  if (site < 0 || site >= n_qubits) {
    std::ostringstream os;
    os << "sigma_on: site " << site << " outside [0, " << n_qubits << ")";
    throw ValidationError(os.str());
  }
  CMatrix out = (site == 0) ? pauli(axis) : identity(2);
  for (int k = 1; k < n_qubits; ++k) {
    out = kron(out, k == site ? pauli(axis) : identity(2));
  }
  return out;
}

inline DensityMatrix bloch_to_density(const BlochState& b) {
  require_valid_bloch(b);
  CMatrix m(2, 2);
  m << 1.0 + b.r3, cplx(b.r1, -b.r2), cplx(b.r1, b.r2), 1.0 - b.r3;
  return DensityMatrix(0.5 * m);
}

/// Computational basis state |bits> on n qubits.
inline DensityMatrix basis_state(int n_qubits, Index bits) {
  require_qubit_count(n_qubits, "basis_state");
  const Index d = Index{1} << n_qubits;
  if (bits < 0 || bits >= d) throw ValidationError("basis_state: index out of range");
  CVector psi = CVector::Zero(d);
  psi(bits) = 1.0;
  return DensityMatrix::from_pure(psi);
}

/// |+> = (|0> + |1>)/sqrt(2).
inline DensityMatrix plus_state() {
  CVector psi(2);
  psi << 1.0, 1.0;
  return DensityMatrix::from_pure(psi);
}

/// (|0...0> + |1...1>)/sqrt(2).
inline DensityMatrix ghz(int n) {
  require_qubit_count(n, "ghz");
  const Index d = Index{1} << n;
  CVector psi = CVector::Zero(d);
  psi(0) = 1.0;
  psi(d - 1) = 1.0;
  return DensityMatrix::from_pure(psi);
}

/// |+>^{(x) n}.
inline DensityMatrix product_plus(int n) {
  require_qubit_count(n, "product_plus");
  const Index d = Index{1} << n;
  return DensityMatrix::from_pure(CVector::Ones(d));
}

inline DensityMatrix maximally_mixed(Index d) {
  if (d < 1) throw ValidationError("maximally_mixed: dimension must be positive");
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b,
                             std::string_view what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw ValidationError(os.str());
  }
}

/// f = tr[rho0 rhot] / tr[rho0^2].
inline double relative_purity(const DensityMatrix& rho0, const DensityMatrix& rhot) {
  require_same_dim(rho0, rhot, "relative_purity");
  const double overlap =
      checked_real(trace_product(rho0.matrix(), rhot.matrix()), "relative_purity");
  return overlap / rho0.purity();
}

/// Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)).
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma, "fidelity");
  const CMatrix root = sqrtm_psd(rho.matrix());
  CMatrix inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint());
  return checked_real(sqrtm_psd(inner).trace(), "fidelity");
}

inline void require_operator_dim(const CMatrix& op, const DensityMatrix& rho,
                                 std::string_view what) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    std::ostringstream os;
    os << what << ": operator is " << op.rows() << "x" << op.cols() << ", state dim "
       << rho.dim();
    throw ValidationError(os.str());
  }
}

/// <A> = tr[A rho].
inline cplx expectation(const CMatrix& op, const DensityMatrix& rho) {
  require_operator_dim(op, rho, "expectation");
  return trace_product(op, rho.matrix());
}

/// Delta A^2 = <A^2> - <A>^2 for Hermitian A.
inline double variance(const CMatrix& op, const DensityMatrix& rho) {
  require_operator_dim(op, rho, "variance");
  require_hermitian(op, "variance");
  const double mean = checked_real(expectation(op, rho), "variance <A>");
  const double second = checked_real(trace_product(op * op, rho.matrix()), "variance <A^2>");
  const double var = second - mean * mean;
  if (var < -1e-12) {
    std::ostringstream os;
    os << "variance: negative value " << var;
    throw NumericalError(os.str());
  }
  return std::max(var, 0.0);
}

}  // namespace qsl
