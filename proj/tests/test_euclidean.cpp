// Copyright 2026 The DSH Toolkit Authors
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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dsh/cpf_lab.hpp"
#include "dsh/euclidean.hpp"

using namespace dsh;

TEST_CASE("shift k >= 1 separates identical points") {
  auto f = e2dsh_family({1.0, 2, 4});
  const auto [x, y] = euclid_pair(4, 0.0, 1);
  for (std::uint64_t s = 0; s < 200; ++s) {
    CHECK_FALSE(collide(*sample_pair(*f, s), x, x));
  }
  CHECK(e2dsh_cpf(1.0, 2, 0.0) == 0.0);
}

TEST_CASE("shift zero is an ordinary bucket hash") {
  CHECK(e2dsh_cpf(1.0, 0, 0.0) == doctest::Approx(1.0));
  CHECK(e2dsh_cpf(1.0, 0, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e2dsh_cpf(1.0, 0, 1.0) < e2dsh_cpf(1.0, 0, 0.5));
}

TEST_CASE("closed form against direct quadrature") {
  // f(delta) = int_0^w (1/w) Pr[N(0, delta^2) in [k w - b, (k+1) w - b)] db
  auto direct = [](double w, unsigned k, double delta) {
    const int steps = 200000;
    double s = 0;
    for (int i = 0; i < steps; ++i) {
      const double b = (i + 0.5) * w / steps;
      const double lo = (k * w - b) / delta;
      const double hi = ((k + 1) * w - b) / delta;
      s += 0.5 * (std::erfc(lo / std::numbers::sqrt2) -
                  std::erfc(hi / std::numbers::sqrt2));
    }
    return s / steps;
  };
  CHECK(e2dsh_cpf(3.0, 1, 2.0) == doctest::Approx(direct(3.0, 1, 2.0)).epsilon(1e-8));
  CHECK(e2dsh_cpf(1.0, 3, 2.5) == doctest::Approx(direct(1.0, 3, 2.5)).epsilon(1e-8));
  CHECK(std::exp(e2dsh_log_cpf(1.0, 3, 2.5)) ==
        doctest::Approx(e2dsh_cpf(1.0, 3, 2.5)).epsilon(1e-12));
}

TEST_CASE("Monte Carlo agrees with the closed form") {
  auto f = e2dsh_family({1.0, 3, 4});
  for (double delta : {1.0, 4.0}) {
    CHECK(within_sigmas(estimate_cpf(*f, delta, 100000, 5),
                        e2dsh_cpf(1.0, 3, delta)));
  }
}

TEST_CASE("bucket width choice") {
  CHECK(choose_w_k(2.0, 8) == doctest::Approx(0.62666).epsilon(1e-4));
  CHECK(choose_w_k(4.0, 8) == doctest::Approx(0.31333).epsilon(1e-4));
  CHECK_THROWS_AS(choose_w_k(0.0, 8), InvalidArgument);
}

TEST_CASE("rho minus approaches 1/c^2") {
  const double w = choose_w_k(2.0, 0);
  CHECK(rho_minus(w, 8, 1.0, 1.0) == doctest::Approx(1.0));
  const double r4 = rho_minus(w, 4, 1.0, 2.0) * 4;
  const double r16 = rho_minus(w, 16, 1.0, 2.0) * 4;
  CHECK(std::abs(r16 - 1) < std::abs(r4 - 1));
}

TEST_CASE("analytic bounds at 1/c and 1") {
  for (double c : {1.5, 2.0}) {
    for (unsigned k : {3u, 8u}) {
      const double w = choose_w_k(c, k);
      CHECK(e2dsh_cpf(w, k, 1 / c) <= e2dsh_upper_bound(w, k, c));
      CHECK(e2dsh_cpf(w, k, 1.0) >= e2dsh_lower_bound(w, k));
    }
  }
}

TEST_CASE("pair generator is exact") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [x, y] = euclid_pair(5, 2.5, s);
    double d2 = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      d2 += (x.coords[i] - y.coords[i]) * (x.coords[i] - y.coords[i]);
    }
    CHECK(std::abs(std::sqrt(d2) - 2.5) <= 1e-12);
  }
}
