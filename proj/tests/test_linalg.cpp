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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"
#include "support.hpp"

namespace qsl {
namespace {

// Taylor series summed to convergence, used as an independent reference for
// small arguments.
CMatrix taylor_expm(const CMatrix& a) {
  CMatrix term = identity(a.rows());
  CMatrix sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-18) break;
  }
  return sum;
}

CMatrix eig_expm_antihermitian(const CMatrix& h, double t) {
  const HermitianEigen e = herm_eig(h);
  CMatrix d = CMatrix::Zero(h.rows(), h.rows());
  for (Index i = 0; i < h.rows(); ++i) d(i, i) = std::exp(-kI * t * e.values(i));
  return e.vectors * d * e.vectors.adjoint();
}

TEST(Kron, PauliProductsHaveExpectedBlocks) {
  const CMatrix zx = kron(pauli(Axis::z), pauli(Axis::x));
  ASSERT_EQ(zx.rows(), 4);
  EXPECT_EQ(zx(0, 1), cplx(1.0));
  EXPECT_EQ(zx(2, 3), cplx(-1.0));
  EXPECT_EQ(zx(0, 0), cplx(0.0));
}

TEST(Kron, MixedProductProperty) {
  testing::Gen g(11);
  const CMatrix a = g.complex_matrix(2), b = g.complex_matrix(3);
  const CMatrix c = g.complex_matrix(2), d = g.complex_matrix(3);
  EXPECT_LT((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm(), 1e-12);
}

TEST(Kron, CapRaisesDimensionError) {
  EXPECT_THROW(kron(identity(64), identity(128), 4096), DimensionError);
  EXPECT_NO_THROW(kron(identity(64), identity(64), 4096));
}

TEST(Commutators, PauliAlgebra) {
  const CMatrix c = commutator(pauli(Axis::x), pauli(Axis::y));
  EXPECT_LT((c - 2.0 * kI * pauli(Axis::z)).norm(), 1e-15);
  EXPECT_LT(anticommutator(pauli(Axis::x), pauli(Axis::y)).norm(), 1e-15);
}

TEST(Expm, ZeroGivesIdentity) {
  EXPECT_LT((expm(CMatrix::Zero(5, 5)) - identity(5)).norm(), 1e-15);
}

TEST(Expm, PauliRotationClosedForm) {
  for (const double t : {0.1, 1.0, 7.3, 40.0}) {
    const CMatrix u = expm(-kI * t * pauli(Axis::x));
    const CMatrix expected = std::cos(t) * identity(2) - kI * std::sin(t) * pauli(Axis::x);
    EXPECT_LT((u - expected).norm(), 1e-12) << "t=" << t;
  }
}

TEST(Expm, AgreesWithTaylorForSmallArguments) {
  testing::Gen g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = 0.3 * g.complex_matrix(4);
    EXPECT_LT((expm(a) - taylor_expm(a)).norm(), 1e-12);
  }
}

TEST(Expm, AgreesWithEigendecompositionForUnitaries) {
  testing::Gen g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = g.hermitian(6);
    const double t = g.uniform(0.1, 20.0);
    EXPECT_LT((expm(-kI * t * h) - eig_expm_antihermitian(h, t)).norm(), 1e-10);
  }
}

TEST(Expm, SemigroupProperty) {
  testing::Gen g(8);
  const CMatrix a = g.complex_matrix(5);
  EXPECT_LT((expm(a) * expm(a) - expm(2.0 * a)).norm() / expm(2.0 * a).norm(), 1e-12);
}

TEST(Expm, ReportsSquarings) {
  ExpmStats stats;
  expm(cplx(0.0, 1e3) * pauli(Axis::z), {}, &stats);
  EXPECT_GT(stats.squarings, 0);
  ExpmStats small;
  expm(1e-3 * pauli(Axis::z), {}, &small);
  EXPECT_EQ(small.squarings, 0);
}

TEST(HermEig, ReconstructsMatrix) {
  testing::Gen g(9);
  const CMatrix h = g.hermitian(7);
  const HermitianEigen e = herm_eig(h);
  const CMatrix rebuilt = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT((rebuilt - h).norm(), 1e-12);
  for (Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
}

TEST(HermEig, RejectsNonHermitian) {
  CMatrix a = pauli(Axis::x);
  a(0, 1) = 2.0;
  EXPECT_THROW(herm_eig(a), ValidationError);
}

TEST(SqrtmPsd, SquaresBack) {
  testing::Gen g(12);
  const CMatrix rho = g.mixed_state(4).matrix();
  const CMatrix r = sqrtm_psd(rho);
  EXPECT_LT((r * r - rho).norm(), 1e-12);
}

TEST(Validation, CheckedRealRejectsImaginaryPart) {
  EXPECT_DOUBLE_EQ(checked_real(cplx(2.0, 1e-14), "x"), 2.0);
  EXPECT_THROW(checked_real(cplx(2.0, 1e-3), "x"), NumericalError);
}

TEST(Validation, NonFiniteEntriesRejected) {
  CMatrix a = identity(2);
  a(1, 0) = std::nan("");
  EXPECT_THROW(require_finite(a, "a"), ValidationError);
}

}  // namespace
}  // namespace qsl
