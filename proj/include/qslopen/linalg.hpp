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

// Dense complex linear algebra at desk scale (dimensions up to a few
// thousand). Matrices are Eigen dense matrices; all routines are pure.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "qslopen/errors.hpp"

namespace qsl {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Absolute tolerance on a - a^dagger for inputs that are analytically Hermitian.
inline constexpr double kHermitianTol = 1e-10;

/// Imaginary residue allowed on quantities that are provably real.
inline constexpr double kRealTol = 1e-10;

/// Largest row or column count any constructed operator may have. A d-level
/// Liouvillian has d^2 rows, so the default admits d <= 64.
inline constexpr Index kDefaultDimensionCap = 4096;

inline bool all_finite(const CMatrix& a) { return a.allFinite(); }

inline void require_finite(const CMatrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

inline void require_square(const CMatrix& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << a.rows() << "x"
       << a.cols();
    throw ValidationError(os.str());
  }
}

inline CMatrix identity(Index d) { return CMatrix::Identity(d, d); }

inline CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

inline cplx trace(const CMatrix& a) { return a.trace(); }

/// tr(a b) without forming the product.
inline cplx trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

/// Real part of z after checking that |Im z| is round-off.
inline double checked_real(cplx z, std::string_view what, double tol = kRealTol) {
  if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z.real()))) {
    std::ostringstream os;
    os << what << ": expected a real value, imaginary residue " << z.imag();
    throw NumericalError(os.str());
  }
  return z.real();
}

/// Max absolute entry of a - a^dagger.
inline double hermitian_deviation(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_hermitian(const CMatrix& a, std::string_view what,
                              double tol = kHermitianTol) {
  require_square(a, what);
  const double dev = hermitian_deviation(a);
  if (!(dev <= tol)) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian (max |a - a^dagger| = " << dev << ")";
    throw ValidationError(os.str());
  }
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }
inline CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

/// Hilbert-Schmidt norm sqrt(tr a^dagger a).
inline double hs_norm(const CMatrix& a) { return a.norm(); }

/// Kronecker product. Throws DimensionError when either dimension of the
/// result would exceed `cap`.
inline CMatrix kron(const CMatrix& a, const CMatrix& b, Index cap = kDefaultDimensionCap) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > cap || cols > cap) {
    std::ostringstream os;
    os << "kron result " << rows << "x" << cols << " exceeds cap " << cap;
    throw DimensionError(os.str());
  }
  CMatrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition a = V diag(values) V^dagger of a Hermitian matrix.
inline HermitianEigen herm_eig(const CMatrix& a) {
  require_hermitian(a, "herm_eig");
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct ExpmOptions {
  /// Emit a warning on std::clog when more squarings than this are needed.
  int warn_squarings = 40;
};

struct ExpmStats {
  int squarings = 0;
};

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant (Higham 2005).
inline CMatrix expm(const CMatrix& a, const ExpmOptions& options = {},
                    ExpmStats* stats = nullptr) {
  require_square(a, "expm");
  const Index n = a.rows();
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  // Induced 1-norm (max column sum).
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) {
    s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  if (stats != nullptr) stats->squarings = s;
  if (s > options.warn_squarings) {
    std::clog << "qslopen: warning: expm needed " << s
              << " squarings (norm " << norm1 << ")\n";
  }

  const CMatrix as = a / std::ldexp(1.0, s);
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = as * as;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                          b[5] * a4 + b[3] * a2 + b[1] * ident;
  const CMatrix u = as * u_inner;
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                    b[4] * a4 + b[2] * a2 + b[0] * ident;
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  if (!r.allFinite()) throw NumericalError("expm: result has non-finite entries");
  return r;
}

/// Eigenvalues below this are treated as round-off and clipped to zero.
inline constexpr double kPsdClip = 1e-10;

/// Principal square root of a positive-semidefinite Hermitian matrix.
inline CMatrix sqrtm_psd(const CMatrix& a) {
  const HermitianEigen eig = herm_eig(a);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -kPsdClip) {
    std::ostringstream os;
    os << "sqrtm_psd: matrix is not positive semidefinite (min eigenvalue "
       << eig.values.minCoeff() << ")";
    throw NumericalError(os.str());
  }
  const RVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace qsl
