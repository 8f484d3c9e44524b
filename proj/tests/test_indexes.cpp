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
#include <set>

#include "dsh/hamming.hpp"
#include "dsh/indexes.hpp"
#include "dsh/sphere.hpp"

using namespace dsh;

namespace {

Point flip(const Point& p, std::size_t count) {
  auto b = p.bits;
  for (std::size_t i = 0; i < count; ++i) b[i] ^= 1;
  return Point::hamming(b);
}

}  // namespace

TEST_CASE("empty index answers nothing") {
  auto f = bit_anti_product_family(32, 10, 1);
  const auto idx = build_annulus_index({}, f, {0.0, 3.0 / 32, 10.0 / 32}, 1);
  CHECK(idx.size() == 0);
  Rng rng(1);
  const auto res = annulus_query(idx, random_point(Domain::hamming, 32, rng));
  CHECK_FALSE(res.id.has_value());
  CHECK(res.candidates == 0);
}

TEST_CASE("table count follows the guaranteed probability") {
  auto f = bit_anti_product_family(32, 10, 1);
  Rng rng(2);
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(random_point(Domain::hamming, 32, rng));
  const auto idx = build_annulus_index(pts, f, {0.0, 3.0 / 32, 10.0 / 32}, 3);
  const double want = std::ceil(std::exp(1.0) / idx.guaranteed_probability());
  CHECK(static_cast<double>(idx.tables()) == want);
  CHECK(idx.candidate_cutoff() == 8 * idx.tables());
  CHECK(idx.guaranteed_probability() > idx.outside_probability());
}

TEST_CASE("single point index") {
  auto f = bit_anti_product_family(32, 10, 1);
  Rng rng(4);
  const Point p = random_point(Domain::hamming, 32, rng);
  const auto idx = build_annulus_index({p}, f, {0.0, 3.0 / 32, 10.0 / 32}, 5);
  int hits = 0;
  for (int i = 0; i < 50; ++i) {
    Rng qr(derive_seed(6, i));
    const Point q = point_at_distance(p, 3.0 / 32, qr);
    CHECK(hamming_distance(p, q) == 3);
    const auto res = annulus_query(idx, q);
    if (res.id) {
      CHECK(*res.id == 0);
      ++hits;
    }
    CHECK(res.candidates <= idx.candidate_cutoff() + res.final_bucket_size);
  }
  CHECK(hits >= 25);
}

TEST_CASE("annulus search on a planted instance") {
  const std::size_t d = 32;
  auto data = random_dataset(Domain::hamming, d, 2000, 7);
  auto f = bit_anti_product_family(d, 10, 1);
  const AnnulusQueryParams params{0.0, 3.0 / 32, 10.0 / 32};
  const auto idx = build_annulus_index(data.points, f, params, 8);
  int found = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(derive_seed(9, i));
    const Point& base = data.points[rng.below(data.points.size())];
    const Point q = point_at_distance(base, params.r, rng);
    const auto res = annulus_query(idx, q);
    if (res.id) {
      const double dist = index_distance(data.points[*res.id], q);
      CHECK(dist >= params.r_minus - 1e-12);
      CHECK(dist <= params.r_plus + 1e-12);
      ++found;
    }
  }
  CHECK(found >= 50);
}

TEST_CASE("annulus construction checks") {
  auto bit = bit_sampling_family(32);
  CHECK_THROWS_AS(build_annulus_index({}, bit, {0.1, 0.2, 0.3}, 1),
                  ConstructionError);
  auto f = bit_anti_product_family(32, 10, 1);
  CHECK_THROWS_AS(build_annulus_index({}, f, {0.3, 0.2, 0.1}, 1),
                  InvalidArgument);
  Rng rng(1);
  std::vector<Point> sphere_pts{random_point(Domain::sphere, 32, rng)};
  CHECK_THROWS_AS(build_annulus_index(sphere_pts, f, {0.0, 0.1, 0.3}, 1),
                  DomainMismatch);
}

TEST_CASE("range reporting returns a stored query point") {
  const std::size_t d = 32;
  auto data = random_dataset(Domain::hamming, d, 500, 10);
  const auto idx =
      build_range_index(data.points, bit_sampling_family(d), 2.0 / 32, 8.0 / 32, 11);
  int hits = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const Point& q = data.points[i];
    const auto res = range_report(idx, q);
    std::set<std::size_t> seen(res.ids.begin(), res.ids.end());
    CHECK(seen.size() == res.ids.size());
    for (auto id : res.ids) CHECK(index_distance(data.points[id], q) <= 8.0 / 32);
    hits += seen.count(i) ? 1 : 0;
    CHECK(res.retrieved >= res.ids.size());
  }
  CHECK(hits > 25);
}

TEST_CASE("range reporting finds planted neighbours") {
  const std::size_t d = 32;
  auto data = random_dataset(Domain::hamming, d, 500, 12);
  Rng rng(13);
  const Point q = random_point(Domain::hamming, d, rng);
  data.points.push_back(flip(q, 1));
  data.points.push_back(flip(q, 2));
  const auto idx =
      build_range_index(data.points, bit_sampling_family(d), 2.0 / 32, 8.0 / 32, 14);
  const auto res = range_report(idx, q);
  for (auto id : res.ids) CHECK(index_distance(data.points[id], q) <= 8.0 / 32);
}

TEST_CASE("sphere distances") {
  Rng rng(3);
  const Point p = random_point(Domain::sphere, 16, rng);
  const Point q = point_at_distance(p, 0.5, rng);
  CHECK(index_distance(p, q) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(cpf_argument(Domain::sphere, 0.5) == doctest::Approx(1 - 0.125));
  CHECK(cpf_argument(Domain::hamming, 0.25) == 0.25);
}

TEST_CASE("dataset text round trip") {
  for (Domain dom : {Domain::hamming, Domain::sphere, Domain::euclidean}) {
    const auto data = random_dataset(dom, 5, 20, 15);
    const std::string text = format_dataset(data);
    const auto back = parse_dataset(text);
    CHECK(back.domain == dom);
    CHECK(back.dim == 5);
    REQUIRE(back.points.size() == 20);
    if (dom == Domain::hamming) {
      CHECK(format_dataset(back) == text);
      CHECK(back.points[3].bits == data.points[3].bits);
    } else {
      // Sphere points are renormalized on input, which may move the last bit.
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(back.points[3].coords[j] ==
              doctest::Approx(data.points[3].coords[j]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("dataset parse errors") {
  CHECK_THROWS_AS(parse_dataset(""), ParseError);
  CHECK_THROWS_AS(parse_dataset("hamming 4\n0102\n"), ParseError);
  CHECK_THROWS_AS(parse_dataset("hamming 4\n010\n"), ParseError);
  CHECK_THROWS_AS(parse_dataset("torus 4\n"), ParseError);
  CHECK_THROWS_AS(parse_dataset("sphere 2\n1 1\n"), ParseError);
  const auto ok = parse_dataset("# comment\nhamming 4\n0101\n\n1111\n");
  CHECK(ok.points.size() == 2);
  CHECK(parse_dataset("hamming 4\n").points.empty());
}
