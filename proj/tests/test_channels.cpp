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
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "qslopen/channels.hpp"
#include "qslopen/lindblad.hpp"
#include "qslopen/models.hpp"
#include "support.hpp"

namespace qsl {
namespace {

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a * std::pow(b / a, i / double(n - 1)));
  return out;
}

KrausChannel corrupted_dephasing(double gamma, double scale) {
  return KrausChannel("corrupted", 2, [=](double t) {
    KrausList ks = detail::dephasing_kraus(std::exp(-2.0 * gamma * t));
    ks[1] *= scale;
    return ks;
  });
}

std::vector<KrausChannel> shipped(testing::Gen& g) {
  return {identity_channel(2), dephasing_channel(0.7), isotropic_channel(0.3),
          unitary_channel(g.hermitian(3), 0.4),
          dephasing_channel_td([](double t) { return 1.0 + t; },
                               [](double t) { return t + 0.5 * t * t; })};
}

TEST(Channel, IdentityAtTimeZero) {
  testing::Gen g(51);
  for (const KrausChannel& ch : shipped(g)) {
    const DensityMatrix rho = g.mixed_state(ch.dim());
    EXPECT_LT((apply_channel(ch, rho, 0.0).matrix() - rho.matrix()).norm(), 1e-8) << ch.name();
  }
}

TEST(Channel, DephasingOffDiagonal) {
  const double gamma = 0.45;
  for (const double t : {0.1, 0.7, 2.0}) {
    const DensityMatrix out = apply_channel(dephasing_channel(gamma), plus_state(), t);
    EXPECT_NEAR(out.matrix()(0, 1).real(), 0.5 * std::exp(-2.0 * gamma * t), 1e-12);
  }
}

TEST(Channel, IsotropicReproducesClosedForm) {
  testing::Gen g(52);
  const IsotropicEnvironment env(0.35);
  for (int trial = 0; trial < 10; ++trial) {
    const BlochState b = g.bloch();
    const double t = g.uniform(0.0, 1.0);
    const CMatrix out = apply_channel(env.channel(), bloch_to_density(b), t).matrix();
    EXPECT_LT((out - env.closed_form(t, b).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Channel, MatchesLindbladEvolution) {
  testing::Gen g(53);
  const std::vector<double> times = {0.05, 0.3, 1.1, 2.5};
  const std::vector<std::pair<KrausChannel, Lindbladian>> pairs = {
      {dephasing_channel(0.8), dephasing_model(1, 0.8)},
      {isotropic_channel(0.2), isotropic_model(0.2)}};
  for (const auto& [ch, lind] : pairs) {
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho0 = trial % 2 ? g.pure_state(2) : g.mixed_state(2);
      const auto samples = evolve(lind, rho0, times);
      for (const auto& s : samples) {
        const CMatrix kraus = apply_channel(ch, rho0, s.t).matrix();
        EXPECT_LT((kraus - s.rho.matrix()).cwiseAbs().maxCoeff(), 1e-9) << ch.name();
      }
    }
  }
}

TEST(Channel, RelativePurityStaysInUnitInterval) {
  testing::Gen g(54);
  for (const KrausChannel& ch : {dephasing_channel(1.0), isotropic_channel(1.0)}) {
    const DensityMatrix rho0 = g.mixed_state(2);
    for (const double t : logspace(1e-3, 10.0, 20)) {
      const double f = relative_purity(rho0, apply_channel(ch, rho0, t));
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0 + 1e-12);
    }
  }
}

TEST(Certify, ShippedFamiliesPassAtLogSpacedTimes) {
  testing::Gen g(55);
  for (const KrausChannel& ch : shipped(g)) {
    for (const double t : logspace(1e-3, 10.0, 20)) {
      const CptReport r = certify_cpt(ch, t);
      EXPECT_TRUE(r.passed) << ch.name() << " t=" << t;
      EXPECT_LE(r.tp_deviation, 1e-12);
    }
  }
}

TEST(Certify, IdentityChannelHasTrivialDeviations) {
  const CptReport r = certify_cpt(identity_channel(3), 1.0);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.tp_deviation, 0.0);
  EXPECT_GE(r.choi_min_eigenvalue, -1e-15);
  EXPECT_FALSE(r.choi_convention.empty());
}

TEST(Certify, CorruptedFamilyFailsWithExpectedDeviation) {
  // Scaling K2 by c changes sum K^dagger K by (c^2 - 1)(1 - s)/2 on the diagonal.
  const double gamma = 1.0;
  const double c = 1.01;
  for (const double t : {0.5, 2.0, 10.0}) {
    const CptReport r = certify_cpt(corrupted_dephasing(gamma, c), t);
    const double s = std::exp(-2.0 * gamma * t);
    EXPECT_FALSE(r.passed);
    EXPECT_NEAR(r.tp_deviation, (c * c - 1.0) * (1.0 - s) / 2.0, 1e-14);
  }
  EXPECT_THROW(apply_channel(corrupted_dephasing(gamma, c), plus_state(), 1.0), NumericalError);
}

TEST(Certify, OvercompleteFamilyFails) {
  const KrausChannel bad("scaled", 2, [](double) { return KrausList{std::sqrt(2.0) * identity(2)}; });
  const CptReport r = certify_cpt(bad, 0.3);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.tp_deviation, 1.0, 1e-14);
  EXPECT_GE(r.choi_min_eigenvalue, -1e-14);
}

TEST(Derivative, ConstantChannelIsZero) {
  const KrausChannel constant("constant", 2, [](double) {
    return detail::dephasing_kraus(0.3);
  });
  for (const CMatrix& dk : kraus_derivative(constant, 0.7)) EXPECT_LT(dk.norm(), 1e-9);
}

TEST(Derivative, DephasingAnalyticMatchesCalculusAndFiniteDifference) {
  const double gamma = 0.9;
  const KrausChannel ch = dephasing_channel(gamma);
  const KrausChannel fd("dephasing_fd", 2, [gamma](double t) {
    return detail::dephasing_kraus(std::exp(-2.0 * gamma * t));
  });
  for (const double t : {0.2, 1.0, 3.0}) {
    const double s = std::exp(-2.0 * gamma * t);
    const CMatrix expected = gamma * s / std::sqrt(2.0 * (1.0 - s)) * pauli(Axis::z);
    EXPECT_LT((kraus_derivative(ch, t)[1] - expected).norm(), 1e-12);
    EXPECT_LT((kraus_derivative(fd, t)[1] - expected).norm(), 1e-6);
  }
}

TEST(Derivative, UnitaryFamily) {
  testing::Gen g(56);
  const CMatrix h = g.hermitian(3);
  const KrausChannel ch = unitary_channel(h);
  const KrausChannel fd("unitary_fd", 3, [&](double t) { return ch.kraus(t); });
  for (const double t : {0.0, 0.4, 2.0}) {
    const CMatrix k = ch.kraus(t)[0];
    EXPECT_LT((kraus_derivative(ch, t)[0] + kI * h * k).norm(), 1e-12);
    EXPECT_LT((kraus_derivative(fd, t)[0] + kI * h * k).norm(), 1e-8);
  }
}

TEST(Derivative, CentralDifferenceIsSecondOrder) {
  const double gamma = 0.9;
  const KrausChannel fd("dephasing_fd", 2, [gamma](double t) {
    return detail::dephasing_kraus(std::exp(-2.0 * gamma * t));
  });
  const double t = 0.8;
  const CMatrix exact = dephasing_channel(gamma).analytic_derivative(t)->at(1);
  const double h = 1e-2;
  const double e1 = (kraus_derivative(fd, t, h)[1] - exact).norm();
  const double e2 = (kraus_derivative(fd, t, h / 2.0)[1] - exact).norm();
  EXPECT_LE(e2, e1 / 4.0 * 1.125);
  EXPECT_GE(e2, e1 / 4.0 / 1.125);
}

TEST(Derivative, OneSidedNearZero) {
  const double gamma = 0.5;
  const KrausChannel fd("isotropic_fd", 2, [gamma](double t) {
    return isotropic_channel(gamma).kraus(t);
  });
  const double t = 1e-7;
  const CMatrix exact = isotropic_channel(gamma).analytic_derivative(t)->at(0);
  EXPECT_LT((kraus_derivative(fd, t)[0] - exact).norm(), 1e-5);
}

TEST(Derivative, LengthChangeRejected) {
  const KrausChannel bad("bad", 2, [](double t) {
    return t > 1.0 ? KrausList{identity(2)} : KrausList{identity(2), CMatrix::Zero(2, 2)};
  });
  EXPECT_THROW(kraus_derivative(bad, 1.0), ValidationError);
}

TEST(Tabulated, ExactLookupOnly) {
  std::map<double, KrausList> table = {{0.0, {identity(2)}}, {1.0, {pauli(Axis::x)}}};
  const KrausChannel ch = tabulated_channel("table", 2, table);
  EXPECT_LT((ch.kraus(1.0)[0] - pauli(Axis::x)).norm(), 0.0 + 1e-15);
  EXPECT_THROW(ch.kraus(0.5), ValidationError);
  EXPECT_THROW(kraus_derivative(ch, 1.0), ValidationError);
  const KrausChannel with_deriv = tabulated_channel(
      "table", 2, table, {{1.0, {CMatrix::Zero(2, 2)}}});
  EXPECT_EQ(kraus_derivative(with_deriv, 1.0)[0].norm(), 0.0);
}

}  // namespace
}  // namespace qsl
