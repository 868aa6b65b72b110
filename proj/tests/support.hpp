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

// Seeded generators for property tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qslopen/lindblad.hpp"
#include "qslopen/linalg.hpp"
#include "qslopen/quantum.hpp"

namespace qsl::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  CMatrix complex_matrix(Index d) {
    CMatrix m(d, d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) m(i, j) = cplx(normal(), normal());
    }
    return m;
  }

  CMatrix hermitian(Index d, double scale = 1.0) {
    const CMatrix a = complex_matrix(d);
    return 0.5 * scale * (a + a.adjoint());
  }

  CVector vector(Index d) {
    CVector v(d);
    for (Index i = 0; i < d; ++i) v(i) = cplx(normal(), normal());
    return v;
  }

  DensityMatrix pure_state(Index d) { return DensityMatrix::from_pure(vector(d)); }

  /// Full-rank mixed state A A^dagger / tr(A A^dagger).
  DensityMatrix mixed_state(Index d) {
    const CMatrix a = complex_matrix(d);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho);
  }

  BlochState bloch() {
    double x = normal();
    double y = normal();
    double z = normal();
    const double r = uniform(0.05, 1.0) / std::sqrt(x * x + y * y + z * z);
    return {r * x, r * y, r * z};
  }

  /// H plus up to `max_jumps` random jump operators of modest norm.
  Lindbladian lindbladian(Index d, int max_jumps) {
    std::vector<CMatrix> jumps;
    const int count = integer(1, max_jumps);
    for (int k = 0; k < count; ++k) jumps.push_back(0.5 * complex_matrix(d) / std::sqrt(double(d)));
    return Lindbladian(hermitian(d, 0.5), std::move(jumps));
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qsl::testing
