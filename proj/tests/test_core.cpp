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
#include <set>

#include "dsh/combinators.hpp"
#include "dsh/core.hpp"
#include "dsh/cpf_lab.hpp"
#include "dsh/gaussian.hpp"
#include "dsh/hamming.hpp"
#include "dsh/random.hpp"

using namespace dsh;

namespace {

Point bits(std::initializer_list<int> b) {
  std::vector<std::uint8_t> v;
  for (int x : b) v.push_back(static_cast<std::uint8_t>(x));
  return Point::hamming(std::move(v));
}

}  // namespace

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs |= x != c();
  }
  CHECK(differs);
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("below stays in range") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("identical seed gives identical hashes") {
  auto fam = concat({bit_sampling_family(16), anti_bit_sampling_family(16)});
  Rng probe(9);
  std::vector<Point> pts;
  for (int i = 0; i < 32; ++i) {
    std::vector<std::uint8_t> b(16);
    for (auto& v : b) v = static_cast<std::uint8_t>(probe.below(2));
    pts.push_back(Point::hamming(b));
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto p1 = sample_pair(*fam, s);
    auto p2 = sample_pair(*fam, s);
    for (const auto& x : pts) {
      CHECK(p1->h(x) == p2->h(x));
      CHECK(p1->g(x) == p2->g(x));
    }
  }
}

TEST_CASE("bit sampling never collides on complementary vectors") {
  auto fam = bit_sampling_family(4);
  const Point x = bits({0, 0, 0, 0});
  const Point y = bits({1, 1, 1, 1});
  for (std::uint64_t s = 0; s < 200; ++s) {
    CHECK_FALSE(collide(*sample_pair(*fam, s), x, y));
    CHECK(collide(*sample_pair(*fam, s), x, x));
  }
}

TEST_CASE("anti bit sampling never collides with itself") {
  auto fam = anti_bit_sampling_family(8);
  const Point x = bits({0, 1, 1, 0, 1, 0, 0, 1});
  for (std::uint64_t s = 0; s < 200; ++s) {
    CHECK_FALSE(collide(*sample_pair(*fam, s), x, x));
  }
  auto one = anti_bit_sampling_family(1);
  CHECK(collide(*sample_pair(*one, 5), bits({0}), bits({1})));
}

TEST_CASE("collide rejects foreign points") {
  auto fam = bit_sampling_family(4);
  auto pair = sample_pair(*fam, 1);
  CHECK_THROWS_AS(collide(*pair, bits({0, 1}), bits({0, 1})), DomainMismatch);
  const Point e = Point::euclidean({0, 0, 0, 0});
  CHECK_THROWS_AS(collide(*pair, e, e), DomainMismatch);
}

TEST_CASE("point constructors validate") {
  CHECK_THROWS_AS(Point::unit({1.0, 1.0}), InvalidArgument);
  CHECK_NOTHROW(Point::unit({0.6, 0.8}));
  CHECK(norm(Point::normalized({3.0, 4.0}).coords) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(Point::hamming({0, 2}));
}

TEST_CASE("normal tails") {
  for (double x : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double want = 0.5 * std::erfc(x / std::numbers::sqrt2);
    CHECK(normal_sf(x) == doctest::Approx(want).epsilon(1e-13));
    CHECK(normal_cdf(x) + normal_sf(x) == doctest::Approx(1.0));
  }
  CHECK(log_normal_sf(40.0) < -800.0);
  CHECK(std::isfinite(log_normal_sf(40.0)));
}

TEST_CASE("univariate tail bounds at t = 1") {
  const Interval b = normal_tail_bounds(1.0);
  const double lower = 0.5 * std::exp(-0.5) / std::sqrt(2 * std::numbers::pi);
  CHECK(b.lower == doctest::Approx(lower).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(2 * lower).epsilon(1e-12));
  CHECK(lower == doctest::Approx(0.12099).epsilon(1e-4));
  const double exact = normal_sf(1.0);
  CHECK(exact == doctest::Approx(0.15866).epsilon(1e-4));
  CHECK(exact >= b.lower);
  CHECK(exact <= b.upper);
}

TEST_CASE("tail bound ratio tightens") {
  const Interval b = normal_tail_bounds(10.0);
  CHECK(b.lower / b.upper >= 10.0 / 11.0 - 1e-12);
}

TEST_CASE("upper orthant probabilities") {
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(bivariate_upper_orthant(t, 0.0) ==
          doctest::Approx(normal_sf(t) * normal_sf(t)).epsilon(1e-9));
  }
  for (double a : {-0.5, 0.0, 0.3, 0.8}) {
    const double want = 0.25 + std::asin(a) / (2 * std::numbers::pi);
    CHECK(bivariate_upper_orthant(0.0, a) == doctest::Approx(want).epsilon(1e-9));
  }
  for (double t : {1.0, 2.0}) {
    for (double a : {-0.5, 0.0, 0.5}) {
      const Interval b = bivariate_tail_bounds(t, a);
      const double p = bivariate_upper_orthant(t, a);
      CHECK(p >= b.lower);
      CHECK(p <= b.upper);
    }
  }
}

TEST_CASE("power and concat") {
  auto p3 = power(bit_sampling_family(8), 3);
  CHECK(p3->cpf()(0.5) == doctest::Approx(0.125));
  CHECK_THROWS_AS(power(bit_sampling_family(8), 0), InvalidArgument);
  auto aa = concat({anti_bit_sampling_family(8), anti_bit_sampling_family(8)});
  auto a2 = power(anti_bit_sampling_family(8), 2);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(aa->cpf()(t) == doctest::Approx(t * t));
    CHECK(a2->cpf()(t) == doctest::Approx(t * t));
  }
  auto ba = concat({bit_sampling_family(8), anti_bit_sampling_family(8)});
  CHECK(ba->cpf()(0.5) == doctest::Approx(0.25));
  CHECK(ba->cpf()(0.25) < ba->cpf()(0.5));
  CHECK(ba->cpf()(0.75) < ba->cpf()(0.5));
  CHECK(power(anti_bit_sampling_family(8), 1)->cpf()(0.3) ==
        doctest::Approx(0.3));
  CHECK_THROWS_AS(concat({bit_sampling_family(8), bit_sampling_family(9)}),
                  DomainMismatch);
}

TEST_CASE("concat of anti pairs matches t squared") {
  auto aa = concat({anti_bit_sampling_family(16), anti_bit_sampling_family(16)});
  const auto r = estimate_cpf(*aa, 0.5, 100000, 11);
  CHECK(within_sigmas(r, 0.25));
}

TEST_CASE("mixture") {
  auto m = mixture({bit_sampling_family(8), anti_bit_sampling_family(8)},
                   {0.5, 0.5});
  for (double t : {0.0, 0.25, 1.0}) CHECK(m->cpf()(t) == doctest::Approx(0.5));
  CHECK(mixture({anti_bit_sampling_family(8)}, {1.0})->cpf()(0.375) ==
        doctest::Approx(0.375));
  CHECK_THROWS_AS(mixture({bit_sampling_family(8)}, {0.5}), InvalidArgument);
  CHECK_THROWS_AS(
      mixture({bit_sampling_family(8), bit_sampling_family(8)}, {1.5, -0.5}),
      InvalidArgument);
}

TEST_CASE("mixture tokens carry the component index") {
  // Both components always collide, so h from one pair matches g from
  // another exactly when the two pairs chose the same component.
  auto m = mixture({constant_family(4, 1.0), constant_family(4, 1.0)},
                   {0.5, 0.5});
  const Point x = bits({0, 1, 0, 1});
  std::uint64_t same = 0;
  const std::uint64_t n = 10000;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto a = sample_pair(*m, derive_seed(1, i));
    auto b = sample_pair(*m, derive_seed(2, i));
    CHECK(a->h(x) == a->g(x));
    if (a->h(x) == b->g(x)) ++same;
  }
  const double rate = static_cast<double>(same) / n;
  CHECK(std::abs(rate - 0.5) < 3 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("token audit sees no mixing collisions") {
  token_audit_reset();
  set_token_audit(true);
  auto fam = concat({bit_sampling_family(8), anti_bit_sampling_family(8),
                     bit_sampling_family(8)});
  Rng probe(5);
  for (std::uint64_t s = 0; s < 500; ++s) {
    auto pair = sample_pair(*fam, s);
    std::vector<std::uint8_t> b(8);
    for (auto& v : b) v = static_cast<std::uint8_t>(probe.below(2));
    pair->h(Point::hamming(b));
    pair->g(Point::hamming(b));
  }
  set_token_audit(false);
  CHECK(token_audit_size() > 0);
  CHECK(token_audit_collisions() == 0);
  token_audit_reset();
}

TEST_CASE("results do not depend on the worker count") {
  auto fam = power(bit_sampling_family(32), 2);
  set_thread_override(1);
  const auto a = estimate_cpf(*fam, 0.25, 20000, 77);
  set_thread_override(4);
  const auto b = estimate_cpf(*fam, 0.25, 20000, 77);
  set_thread_override(0);
  CHECK(a.hits == b.hits);
}
