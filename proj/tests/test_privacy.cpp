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

#include "dsh/cpf_lab.hpp"
#include "dsh/hamming.hpp"
#include "dsh/privacy.hpp"

using namespace dsh;

TEST_CASE("protocol parameters") {
  const auto p = protocol_params(0.1, 2.0, 0.05, 0.01, 0.5);
  CHECK(p.t == 100);
  CHECK(protocol_params(0.1, 2.0, 0.05, 1 - 1e-13, 0.5).t == 1);
  const auto e = protocol_params(0.1, 2.0, std::exp(-1.0), 0.01, 0.5, 3.0);
  CHECK(e.n == 300);
  CHECK_THROWS_AS(protocol_params(0.1, 2.0, 0.05, 0.01, 1.0), InvalidArgument);
  CHECK_THROWS_AS(protocol_params(0.1, 1.0, 0.05, 0.01, 0.5), InvalidArgument);
}

TEST_CASE("empty sketches say no") {
  auto p = protocol_params(0.1, 2.0, 0.05, 0.05, 0.5, 0.0);
  REQUIRE(p.n == 0);
  auto f = bit_sampling_family(16);
  Rng rng(1);
  auto [x, y] = correlated_bits(16, 1.0, 1);
  const auto a = make_sketch(x, f, p, Side::data, 7);
  const auto b = make_sketch(x, f, p, Side::query, 7);
  CHECK(a.tokens.empty());
  CHECK(decide_close(a, b) == Decision::no);
  CHECK(leakage_estimate(a, b) == 0.0);
}

TEST_CASE("sketch mismatches are rejected") {
  auto p = protocol_params(0.1, 2.0, 0.05, 0.05, 0.5);
  auto f = bit_sampling_family(16);
  auto [x, y] = correlated_bits(16, 0.5, 2);
  const auto a = make_sketch(x, f, p, Side::data, 1);
  CHECK_THROWS_AS(decide_close(a, make_sketch(y, f, p, Side::query, 2)),
                  InvalidArgument);
  CHECK_THROWS_AS(decide_close(a, make_sketch(y, f, p, Side::data, 1)),
                  InvalidArgument);
  auto narrow = p;
  narrow.token_bits = 8;
  CHECK_THROWS_AS(decide_close(a, make_sketch(y, f, narrow, Side::query, 1)),
                  InvalidArgument);
}

TEST_CASE("decisions are symmetric under a side swap") {
  auto p = protocol_params(0.1, 2.0, 0.05, 0.05, 0.5);
  p.token_bits = 64;
  auto f = bit_sampling_family(32);
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto [x, y] = correlated_bits(32, 0.2, i);
    SketchContext ctx(f, p, derive_seed(3, i));
    const auto d1 =
        decide_close(ctx.sketch(x, Side::data), ctx.sketch(y, Side::query));
    const auto d2 =
        decide_close(ctx.sketch(y, Side::data), ctx.sketch(x, Side::query));
    CHECK(d1 == d2);
  }
}

TEST_CASE("identical points collide on every component of a symmetric family") {
  auto p = protocol_params(0.1, 2.0, 0.05, 0.05, 0.5);
  auto f = bit_sampling_family(16);
  auto [x, y] = correlated_bits(16, 0.0, 4);
  const auto a = make_sketch(x, f, p, Side::data, 5);
  const auto b = make_sketch(x, f, p, Side::query, 5);
  CHECK(leakage_estimate(a, b) ==
        doctest::Approx(static_cast<double>(p.n) * p.token_bits));
  CHECK(decide_close(a, b) == Decision::yes);
}

TEST_CASE("token truncation adds few spurious collisions") {
  // Anti bit sampling never collides at distance 0, so every hit comes from
  // truncation.
  auto p = protocol_params(0.1, 2.0, 0.05, 0.05, 0.5, 200.0);
  p.token_bits = 6;
  auto f = anti_bit_sampling_family(16);
  auto [x, y] = correlated_bits(16, 1.0, 6);
  const auto a = make_sketch(x, f, p, Side::data, 9);
  const auto b = make_sketch(x, f, p, Side::query, 9);
  const double hits = leakage_estimate(a, b) / p.token_bits;
  const double n = static_cast<double>(p.n);
  CHECK(hits <= n / 64 + 3 * std::sqrt(n / 64));
}

TEST_CASE("step family") {
  const auto s = choose_step_family(128, 0.1, 2.0, 0.05, 0.05);
  CHECK(s.k >= 1);
  CHECK(s.plateau_min > s.far_max);
  CHECK(s.rho > 0);
  CHECK(s.rho < 1);
  const double close = s.family->cpf()(s.worst_close / 128.0);
  CHECK(close == doctest::Approx(s.plateau_min));
  // The two ends of the plateau match by construction.
  CHECK(s.family->cpf()(0.0) ==
        doctest::Approx(s.family->cpf()(12.0 / 128)).epsilon(1e-9));
  for (double t : {0.0, 6.0 / 128, 12.0 / 128}) {
    CHECK(within_sigmas(estimate_cpf(*s.family, t, 100000, 2),
                        s.family->cpf()(t)));
  }
}
