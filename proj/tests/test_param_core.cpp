/*
 * Copyright 2026 The shfl-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "shfl/param_vector.hpp"
#include "shfl/rng.hpp"

using shfl::ParamVector;
using shfl::Rng;

namespace {

ParamVector random_vec(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return ParamVector(std::move(v));
}

// Naive left-to-right oracle, independent of the blocked kernels.
double naive_norm(const ParamVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double naive_distance(const ParamVector& a, const ParamVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("construction rejects non-finite entries") {
  CHECK_THROWS_AS(ParamVector({1.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParamVector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_NOTHROW(ParamVector({0.0, -1e300, 1e300}));
}

TEST_CASE("l2_norm") {
  CHECK(shfl::l2_norm(ParamVector::zeros(17)) == 0.0);
  CHECK(shfl::l2_norm(ParamVector({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));

  Rng rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    const ParamVector v = random_vec(1000, rng);
    const double expect = naive_norm(v);
    CHECK(shfl::l2_norm(v) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("l2_distance") {
  Rng rng(102);
  const ParamVector a = random_vec(64, rng);
  CHECK(shfl::l2_distance(a, a) == 0.0);
  CHECK(shfl::l2_distance(ParamVector({1.0, 0.0}), ParamVector({0.0, 1.0})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(shfl::l2_distance(ParamVector({1.0}), ParamVector({1.0, 2.0})),
                  std::invalid_argument);

  for (int rep = 0; rep < 20; ++rep) {
    const ParamVector x = random_vec(777, rng);
    const ParamVector y = random_vec(777, rng);
    CHECK(shfl::l2_distance(x, y) == doctest::Approx(naive_distance(x, y)).epsilon(1e-12));
    CHECK(shfl::l2_distance(x, y) == shfl::l2_distance(y, x));
  }
}

TEST_CASE("weighted_sum") {
  const ParamVector v1({1.0, 2.0});
  const ParamVector v2({3.0, 4.0});

  SUBCASE("single vector, weight 1") {
    const std::vector<ParamVector> vs{v1};
    const std::vector<double> w{1.0};
    CHECK(shfl::weighted_sum(vs, w) == v1);
  }
  SUBCASE("two identical vectors, convex weights") {
    const std::vector<ParamVector> vs{v2, v2};
    const std::vector<double> w{0.3, 0.7};
    const ParamVector out = shfl::weighted_sum(vs, w);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] == doctest::Approx(v2[i]).epsilon(1e-15));
    }
  }
  SUBCASE("hand-evaluated combination") {
    const std::vector<ParamVector> vs{v1, v2};
    const std::vector<double> w{0.5, 0.5};
    const ParamVector out = shfl::weighted_sum(vs, w);
    CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(shfl::weighted_sum({}, {}), std::invalid_argument);
    const std::vector<ParamVector> mismatched{v1, ParamVector({1.0, 2.0, 3.0})};
    const std::vector<double> w{0.5, 0.5};
    CHECK_THROWS_AS(shfl::weighted_sum(mismatched, w), std::invalid_argument);
    const std::vector<ParamVector> vs{v1};
    CHECK_THROWS_AS(shfl::weighted_sum(vs, w), std::invalid_argument);
  }
}

TEST_CASE("scale_to_norm") {
  const ParamVector v({3.0, 4.0});
  const ParamVector scaled = shfl::scale_to_norm(v, 10.0);
  CHECK(scaled[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(scaled[1] == doctest::Approx(8.0).epsilon(1e-15));

  CHECK(shfl::scale_to_norm(v, 0.0) == ParamVector::zeros(2));
  CHECK_THROWS_AS(shfl::scale_to_norm(ParamVector::zeros(3), 1.0), std::invalid_argument);

  Rng rng(103);
  for (int rep = 0; rep < 20; ++rep) {
    const ParamVector a = random_vec(321, rng);
    const double target = shfl::l2_norm(random_vec(321, rng));
    const ParamVector out = shfl::scale_to_norm(a, target);
    CHECK(shfl::l2_norm(out) == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("property: triangle inequality") {
  Rng rng(104);
  for (int rep = 0; rep < 100; ++rep) {
    const ParamVector a = random_vec(50, rng);
    const ParamVector b = random_vec(50, rng);
    const ParamVector c = random_vec(50, rng);
    CHECK(shfl::l2_distance(a, c) <=
          shfl::l2_distance(a, b) + shfl::l2_distance(b, c) + 1e-9);
  }
}

TEST_CASE("property: norm homogeneity") {
  Rng rng(105);
  for (int rep = 0; rep < 100; ++rep) {
    const ParamVector v = random_vec(80, rng);
    const double k = rng.uniform(-5.0, 5.0);
    std::vector<double> kv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) kv[i] = k * v[i];
    CHECK(shfl::l2_norm(ParamVector(std::move(kv))) ==
          doctest::Approx(std::abs(k) * shfl::l2_norm(v)).epsilon(1e-12));
  }
}

TEST_CASE("property: convex weights on copies reproduce the vector") {
  Rng rng(106);
  for (int rep = 0; rep < 50; ++rep) {
    const ParamVector v = random_vec(40, rng);
    const int count = 2 + static_cast<int>(rng.below(5));
    std::vector<double> w(count);
    double sum = 0.0;
    for (double& x : w) {
      x = rng.uniform(0.01, 1.0);
      sum += x;
    }
    for (double& x : w) x /= sum;
    const std::vector<ParamVector> vs(count, v);
    const ParamVector out = shfl::weighted_sum(vs, w);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(out[i] == doctest::Approx(v[i]).epsilon(1e-12));
    }
  }
}
