// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LANGEVIN_TESTS_TEST_UTIL_HPP_
#define LANGEVIN_TESTS_TEST_UTIL_HPP_

#include <langevin/model.hpp>
#include <langevin/rng.hpp>

namespace langevin::testing {

inline Vector random_vector(RngStream& rng, Eigen::Index d, double scale = 1.0) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = scale * rng.normal();
  return v;
}

/// A A' + shift I for a random Gaussian A.
inline Matrix random_spd(RngStream& rng, Eigen::Index d, double shift = 0.1) {
  Matrix A(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) A(i, j) = rng.normal();
  Matrix S = A * A.transpose() / static_cast<double>(d);
  S.diagonal().array() += shift;
  return 0.5 * (S + S.transpose());
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace langevin::testing

#endif  // LANGEVIN_TESTS_TEST_UTIL_HPP_
