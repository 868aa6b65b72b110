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
#include <vector>

#include <gtest/gtest.h>

#include "qslopen/bounds.hpp"
#include "qslopen/models.hpp"
#include "support.hpp"

namespace qsl {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / static_cast<double>(n - 1);
  return out;
}

TEST(Isotropic, DecayRate) {
  const IsotropicEnvironment env(0.5);
  EXPECT_NEAR(env.decay(1.0), std::exp(-4.0), 1e-16);
  const DensityMatrix rho = env.closed_form(0.3, {0.2, 0.1, 0.6});
  const double s = std::exp(-8.0 * 0.5 * 0.3);
  EXPECT_NEAR(rho.matrix()(0, 1).real(), 0.5 * s * 0.2, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.5 * (1.0 + s * 0.6), 1e-15);
}

TEST(Isotropic, PureStateMaximumTheta) {
  EXPECT_NEAR(IsotropicEnvironment::max_theta({0, 0, 1}), kPi / 3.0, 1e-15);
  const IsotropicEnvironment env(1.0);
  EXPECT_FALSE(env.tau_exact(kPi / 3.0, {0, 0, 1}).has_value());
  EXPECT_TRUE(env.tau_exact(kPi / 3.0 - 1e-6, {0, 0, 1}).has_value());
}

TEST(Isotropic, MixedStateReachableRangeDependsOnPurity) {
  const BlochState b{0.0, 0.3, 0.4};
  EXPECT_NEAR(IsotropicEnvironment::max_theta(b), std::acos(1.0 / 1.25), 1e-15);
  EXPECT_LT(IsotropicEnvironment::max_theta(b), kPi / 3.0);
}

TEST(Isotropic, TauExactMatchesFClosed) {
  testing::Gen g(71);
  const IsotropicEnvironment env(0.8);
  for (int trial = 0; trial < 20; ++trial) {
    const BlochState b = g.bloch();
    const double theta = 0.9 * IsotropicEnvironment::max_theta(b);
    const double tau = *env.tau_exact(theta, b);
    EXPECT_NEAR(env.f_closed(tau, b), std::cos(theta), 1e-12);
  }
}

TEST(Isotropic, SimulatedOverlapMatchesClosedForm) {
  testing::Gen g(72);
  const double gamma = 0.5;
  const IsotropicEnvironment env(gamma);
  const auto times = linspace(0.0, 2.0 / gamma, 64);
  for (int trial = 0; trial < 5; ++trial) {
    const BlochState b = g.bloch();
    for (const auto& s : evolve(env.lindbladian(), bloch_to_density(b), times)) {
      EXPECT_NEAR(s.f, env.f_closed(s.t, b), 1e-8);
    }
  }
}

TEST(Isotropic, RatioCurveFiniteAboveOneAndDivergent) {
  const IsotropicEnvironment env(1.0);
  const BlochState b{0, 0, 1};
  double previous = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double theta = (kPi / 3.0 - 1e-6) * i / 50.0;
    const double ratio = *env.tau_exact(theta, b) / env.tau_B(theta, b);
    EXPECT_TRUE(std::isfinite(ratio));
    EXPECT_GE(ratio, 1.0);
    EXPECT_GE(ratio, previous - 1e-12);
    previous = ratio;
  }
  const double at_pi_6 = *env.tau_exact(kPi / 6.0, b) / env.tau_B(kPi / 6.0, b);
  EXPECT_GT(previous, 10.0 * at_pi_6);
}

TEST(Isotropic, RatioAtPiOverFour) {
  const IsotropicEnvironment env(1.0);
  const BlochState b{0, 0, 1};
  EXPECT_NEAR(*env.tau_exact(kPi / 4.0, b), -std::log(std::sqrt(2.0) - 1.0) / 8.0, 1e-15);
  EXPECT_NEAR(env.tau_B(kPi / 4.0, b), 1.0 / (16.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(*env.tau_exact(kPi / 4.0, b) / env.tau_B(kPi / 4.0, b), 2.4929, 1e-3);
}

TEST(Isotropic, SmallThetaRatioLimit) {
  // tau_exact ~ theta^2 (1+R)/(16 gamma R), tau_B ~ theta^2 (1+R)/(2 pi^2 gamma sqrt(2R)),
  // so the ratio tends to pi^2 sqrt(2R) / (8 R); pure state: pi^2 sqrt(2)/8.
  const IsotropicEnvironment env(1.0);
  const BlochState b{0, 0, 1};
  const double theta = 1e-3;
  const double ratio = *env.tau_exact(theta, b) / env.tau_B(theta, b);
  EXPECT_NEAR(ratio, kPi * kPi * std::sqrt(2.0) / 8.0, 1e-5);
}

TEST(Isotropic, RateBoundOnBlochNorm) {
  testing::Gen g(73);
  const IsotropicEnvironment env(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const BlochState b = g.bloch();
    for (const double t : linspace(0.0, 3.0, 31)) {
      EXPECT_LE(std::sqrt(b.norm_squared()) * env.decay(t), std::sqrt(2.0));
    }
  }
}

TEST(Isotropic, MaximallyMixedHasNoBound) {
  const IsotropicEnvironment env(1.0);
  EXPECT_THROW(env.tau_B(0.1, {0, 0, 0}), StationaryError);
  EXPECT_FALSE(env.tau_exact(0.1, {0, 0, 0}).has_value());
}

TEST(Dephasing, JumpCountAndClosedForms) {
  const Lindbladian lind = dephasing_model(3, 0.4);
  EXPECT_EQ(lind.jumps().size(), 3u);
  EXPECT_EQ(lind.dim(), 8);
  const auto times = linspace(0.0, 2.0 / 0.4, 64);
  for (const auto& s : evolve(lind, ghz(3), times)) {
    EXPECT_NEAR(s.f, ghz_dephasing_f(3, 0.4, s.t), 1e-8);
  }
  for (const auto& s : evolve(lind, product_plus(3), times)) {
    EXPECT_NEAR(s.f, product_plus_dephasing_f(3, 0.4, s.t), 1e-8);
  }
  EXPECT_THROW(dephasing_model(0, 1.0), ValidationError);
  EXPECT_THROW(dephasing_model(13, 1.0), ValidationError);
  EXPECT_THROW(dephasing_model(2, 0.0), ValidationError);
}

TEST(Dephasing, SpeedOfProductAndGhzStates) {
  const double gamma = 0.3;
  for (int n = 1; n <= 4; ++n) {
    const Lindbladian lind = dephasing_model(n, gamma);
    EXPECT_NEAR(speed_v(lind, ghz(n)), std::sqrt(2.0) * gamma * n, 1e-12);
    EXPECT_NEAR(speed_v(lind, product_plus(n)), gamma * std::sqrt(double(n) * (n + 1)), 1e-12);
  }
}

TEST(Dephasing, BoundsBelowExactOnShippedModels) {
  const double gamma = 1.0;
  for (int n = 1; n <= 3; ++n) {
    for (const DensityMatrix& rho : {ghz(n), product_plus(n)}) {
      for (const double theta : {kPi / 6.0, kPi / 4.0}) {
        const PassageResult p = passage_time(dephasing_model(n, gamma), rho, theta, 20.0);
        if (!p.reached()) continue;
        EXPECT_GE(*p.tau_exact, mt_open_bound(dephasing_model(n, gamma), rho, theta).tau_lower);
      }
    }
  }
}

TEST(GainLoss, UnitaryLimitMatchesLiouvillian) {
  testing::Gen g(74);
  const CMatrix h = g.hermitian(3);
  const DensityMatrix rho0 = g.pure_state(3);
  const auto traj = gain_loss_evolve(h, CMatrix::Zero(3, 3), rho0, 1.0, 1e-3);
  const std::vector<double> t = {1.0};
  const auto exact = evolve(Lindbladian(h), rho0, t);
  EXPECT_LT((traj.back().rho.matrix() - exact[0].rho.matrix()).norm(), 1e-8);
  EXPECT_NEAR(gain_loss_speed0(h, CMatrix::Zero(3, 3), rho0),
              std::sqrt(2.0 * variance(h, rho0)), 1e-12);
}

TEST(GainLoss, SpeedIdentityOnQubitExample) {
  // Independent 2x2 oracle: H = sigma_z, Gamma = sigma_x / 2 on |0>.
  const CMatrix h = pauli(Axis::z);
  const CMatrix gam = 0.5 * pauli(Axis::x);
  const DensityMatrix rho0 = basis_state(1, 0);
  // DH^2 = 0, DGamma^2 = 1/4, [Gamma, H] = (1/2)[sigma_x, sigma_z] = -i sigma_y, <sigma_y> = 0.
  const double direct = 2.0 * (0.0 + 0.25 + 0.0);
  const double v = gain_loss_speed0(h, gam, rho0);
  EXPECT_NEAR(v * v, direct, 1e-12);
  EXPECT_NEAR(gain_loss_speed0_pure(h, gam, rho0), v, 1e-12);
}

TEST(GainLoss, SpeedIdentityOnRandomPureStates) {
  testing::Gen g(75);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = g.integer(2, 4);
    const CMatrix h = g.hermitian(d);
    const CMatrix gam = g.hermitian(d);
    const DensityMatrix rho0 = g.pure_state(d);
    EXPECT_NEAR(gain_loss_speed0(h, gam, rho0), gain_loss_speed0_pure(h, gam, rho0), 1e-9);
  }
}

TEST(GainLoss, PureStateStaysPureAndNormalized) {
  testing::Gen g(76);
  const CMatrix h = g.hermitian(3);
  const CMatrix gam = g.hermitian(3, 0.5);
  for (const auto& s : gain_loss_evolve(h, gam, g.pure_state(3), 2.0, 1e-3)) {
    EXPECT_NEAR(s.rho.purity(), 1.0, 1e-7);
    EXPECT_NEAR(s.rho.matrix().trace().real(), 1.0, 1e-8);
  }
}

TEST(GainLoss, RejectsNonHermitian) {
  EXPECT_THROW(gain_loss_speed0(kI * pauli(Axis::x), pauli(Axis::z), plus_state()),
               ValidationError);
}

TEST(LoadModel, Isotropic) {
  ModelSpec spec;
  spec.kind = ModelKind::isotropic;
  spec.gamma = 1.0;
  spec.bloch = BlochState{0, 0, 1};
  const LoadedModel m = load_model(spec);
  ASSERT_TRUE(m.lindbladian && m.channel && m.isotropic && m.f_closed);
  EXPECT_NEAR(m.f_closed(0.1), (1.0 + std::exp(-0.8)) / 2.0, 1e-15);
}

TEST(LoadModel, DephasingThreeQubits) {
  ModelSpec spec;
  spec.kind = ModelKind::dephasing_local;
  spec.gamma = 1.0;
  spec.n_qubits = 3;
  const LoadedModel m = load_model(spec);
  EXPECT_EQ(m.lindbladian->jumps().size(), 3u);
  EXPECT_NEAR(m.rho0.matrix()(0, 7).real(), 0.5, 1e-15);
  EXPECT_FALSE(m.channel.has_value());
}

TEST(LoadModel, CustomRejectsNonHermitianHamiltonian) {
  ModelSpec spec;
  spec.kind = ModelKind::custom;
  CMatrix h = pauli(Axis::x);
  h(0, 1) = 2.0;
  spec.hamiltonian = h;
  spec.initial_state = std::string("plus");
  EXPECT_THROW(load_model(spec), ValidationError);
}

TEST(LoadModel, MissingParametersRejected) {
  ModelSpec iso;
  iso.kind = ModelKind::isotropic;
  EXPECT_THROW(load_model(iso), ValidationError);
  ModelSpec gl;
  gl.kind = ModelKind::gain_loss;
  gl.hamiltonian = pauli(Axis::z);
  EXPECT_THROW(load_model(gl), ValidationError);
  ModelSpec bad_state;
  bad_state.kind = ModelKind::dephasing_local;
  bad_state.gamma = 1.0;
  bad_state.initial_state = std::string("wavy");
  EXPECT_THROW(load_model(bad_state), ValidationError);
}

TEST(LoadModel, ExplicitInitialMatrix) {
  ModelSpec spec;
  spec.kind = ModelKind::unitary;
  spec.hamiltonian = pauli(Axis::z);
  spec.initial_state = maximally_mixed(2).matrix();
  const LoadedModel m = load_model(spec);
  EXPECT_NEAR(m.rho0.purity(), 0.5, 1e-15);
  ASSERT_TRUE(m.channel.has_value());
}

}  // namespace
}  // namespace qsl
