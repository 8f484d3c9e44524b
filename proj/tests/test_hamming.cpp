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
#include "dsh/polynomial.hpp"

using namespace dsh;

TEST_CASE("bit and anti bit sampling") {
  CHECK(bit_sampling_family(4)->cpf()(0.25) == doctest::Approx(0.75));
  CHECK(anti_bit_sampling_family(4)->cpf()(0.25) == doctest::Approx(0.25));
  CHECK_THROWS_AS(bit_sampling_family(0), InvalidArgument);
}

TEST_CASE("scaled and biased variants") {
  CHECK(scaled_biased_anti_family(8, 1, 1)->cpf()(1.0) == doctest::Approx(1.0));
  CHECK(scaled_biased_anti_family(8, 0, 0)->cpf()(0.7) == doctest::Approx(0.0));
  CHECK(scaled_biased_anti_family(8, 1, 0)->cpf()(0.5) == doctest::Approx(0.25));
  CHECK(scaled_bit_sampling_family(8, 0)->cpf()(0.5) == doctest::Approx(1.0));
  CHECK(scaled_bit_sampling_family(8, 0.5)->cpf()(0.5) ==
        doctest::Approx(0.75));
  auto full = scaled_bit_sampling_family(8, 1);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(full->cpf()(t) == doctest::Approx(1 - t));
  }
  CHECK_THROWS_AS(scaled_bit_sampling_family(8, 1.5), InvalidArgument);
  CHECK_THROWS_AS(constant_family(8, -0.1), InvalidArgument);
}

TEST_CASE("product family peaks where the exponents say") {
  auto f = bit_anti_product_family(64, 3, 1);
  const double peak = 1.0 / 4;
  CHECK(f->cpf()(peak) > f->cpf()(peak - 1.0 / 64));
  CHECK(f->cpf()(peak) > f->cpf()(peak + 1.0 / 64));
  CHECK(f->cpf()(0.5) == doctest::Approx(std::pow(0.5, 4)));
}

TEST_CASE("Monte Carlo agrees with the closed forms") {
  const std::size_t d = 16;
  for (const auto& fam :
       {bit_sampling_family(d), anti_bit_sampling_family(d),
        scaled_biased_anti_family(d, 0.5, 0.3), damped_anti_family(d, 0.6)}) {
    for (double t : {0.25, 0.5}) {
      const auto r = estimate_cpf(*fam, t, 100000, 3);
      CHECK_MESSAGE(within_sigmas(r, fam->cpf()(t)), fam->name(), " t=", t);
    }
  }
}

TEST_CASE("polynomial roots") {
  const Polynomial p({2.0, -3.0, 1.0});  // (t-1)(t-2)
  REQUIRE(p.roots().size() == 2);
  double lo = std::min(p.roots()[0].real(), p.roots()[1].real());
  double hi = std::max(p.roots()[0].real(), p.roots()[1].real());
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(2.0));
  const Polynomial z({0.0, 0.0, 1.0});
  CHECK(z.zero_root_multiplicity() == 2);
  const Polynomial c({1.0, 0.0, 1.0});  // roots +-i
  CHECK(c.roots()[0].imag() > 0);
  CHECK(c.roots()[1] == std::conj(c.roots()[0]));
}

TEST_CASE("polynomial families") {
  SUBCASE("t squared") {
    auto pf = polynomial_family(Polynomial({0, 0, 1}), 16);
    CHECK(pf.delta == doctest::Approx(1.0));
    CHECK(assembly_exact_cpf(pf.assembly, 0.5) == doctest::Approx(0.25));
  }
  SUBCASE("t + 1") {
    auto pf = polynomial_family(Polynomial({1, 1}), 16);
    REQUIRE(pf.assembly.components.size() == 1);
    CHECK(pf.assembly.components[0].tag == SchemeTag::S2);
    CHECK(pf.delta == doctest::Approx(2.0));
    CHECK(assembly_exact_cpf(pf.assembly, 0.0) == doctest::Approx(0.5));
  }
  SUBCASE("1 - t") {
    auto pf = polynomial_family(Polynomial({1, -1}), 16);
    REQUIRE(pf.assembly.components.size() == 1);
    CHECK(pf.assembly.components[0].tag == SchemeTag::S3);
    CHECK(pf.delta == doctest::Approx(1.0));
  }
  SUBCASE("empty assembly") {
    CHECK(assembly_exact_cpf(SchemeAssembly{}, 0.3) == doctest::Approx(1.0));
  }
  SUBCASE("root inside the unit interval is rejected") {
    CHECK_THROWS_AS(polynomial_family(Polynomial({-0.5, 1}), 16),
                    ConstructionError);
    CHECK_THROWS_AS(polynomial_family(Polynomial({0.5, -1, 1}), 16),
                    ConstructionError);
    CHECK_THROWS_AS(polynomial_family(Polynomial({3}), 16), InvalidArgument);
  }
}

TEST_CASE("assembly times delta reproduces the polynomial") {
  const std::vector<std::vector<double>> cases = {
      {0, 0, 1},      {1, 1},         {1, -1},     {2.5, 7, 4.5, 1},
      {1, 0, 1},      {5, -4, 1},     {2, 2, 1},   {0, 1, 3, 2},
  };
  for (const auto& c : cases) {
    const Polynomial p(c);
    auto pf = polynomial_family(p, 16);
    CHECK(pf.delta >= std::abs(p.leading()) - 1e-12);
    for (int i = 0; i < 32; ++i) {
      const double t = i / 31.0;
      const double want = p(t);
      const double got = assembly_exact_cpf(pf.assembly, t) * pf.delta;
      CHECK_MESSAGE(std::abs(got - want) <=
                        1e-8 * std::max(std::abs(want), 1e-12),
                    "t=", t);
    }
  }
}

TEST_CASE("polynomial family sampling matches P / delta") {
  auto pf = polynomial_family(Polynomial({2.5, 7, 4.5, 1}), 16);
  for (double t : {0.0, 0.5, 1.0}) {
    const auto r = estimate_cpf(*pf.family, t, 100000, 21);
    CHECK(within_sigmas(r, assembly_exact_cpf(pf.assembly, t)));
  }
}
