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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsh/core.hpp"

namespace dsh {

// Index distances: relative Hamming distance, chord length sqrt(2 - 2 alpha)
// on the sphere, Euclidean distance in R^d.
double index_distance(const Point& x, const Point& y);

/// CPF argument corresponding to an index distance.
double cpf_argument(Domain domain, double distance);

/// A point at exactly `distance` from p (Hamming distances are rounded to a
/// multiple of 1/d).
Point point_at_distance(const Point& p, double distance, Rng& rng);

/// Uniform point: random bits, uniform on the sphere, or standard Gaussian.
Point random_point(Domain domain, std::size_t d, Rng& rng);

struct AnnulusQueryParams {
  double r_minus = 0.0;
  double r = 0.0;
  double r_plus = 0.0;
};

/// Cap on the number of tables an index may allocate.
inline constexpr std::uint64_t kMaxTables = 1u << 16;

class DshIndex {
 public:
  DshIndex();
  DshIndex(DshIndex&&) noexcept;
  DshIndex& operator=(DshIndex&&) noexcept;
  ~DshIndex();

  std::size_t size() const { return points_.size(); }
  std::size_t tables() const { return tables_.size(); }
  std::uint64_t candidate_cutoff() const { return 8 * tables_.size(); }
  unsigned power() const { return power_; }
  /// Collision probability of the powered family at the guaranteed
  /// distance (f(r)^k, or f_min^k for range indexes).
  double guaranteed_probability() const { return p_good_; }
  /// Largest powered collision probability outside the target range.
  double outside_probability() const { return p_bad_; }
  const FamilyPtr& family() const { return family_; }
  const std::vector<Point>& points() const { return points_; }
  const AnnulusQueryParams& params() const { return params_; }
  Domain domain() const { return domain_; }

 private:
  friend struct IndexAccess;

  struct Table;
  Domain domain_ = Domain::hamming;
  std::size_t dim_ = 0;
  std::vector<Point> points_;
  FamilyPtr family_;
  unsigned power_ = 1;
  double p_good_ = 0.0;
  double p_bad_ = 0.0;
  AnnulusQueryParams params_;
  std::vector<std::unique_ptr<Table>> tables_;
};

/// Powers the family so that f(r_minus), f(r_plus) <= 1/n and stores every
/// point in L = ceil(e / f(r)^k) tables keyed by h.
DshIndex build_annulus_index(std::vector<Point> points, FamilyPtr family,
                             const AnnulusQueryParams& params,
                             std::uint64_t seed);

struct AnnulusResult {
  std::optional<std::size_t> id;
  std::uint64_t candidates = 0;
  std::uint64_t final_bucket_size = 0;
  std::uint64_t tables_probed = 0;
};

/// Scans the buckets g_j(q) table by table, checking exact distances. Stops
/// at the first point with distance in [r_minus, r_plus], or after the
/// bucket that pushes the candidate count past 8L.
AnnulusResult annulus_query(const DshIndex& index, const Point& q);

/// Powers the family so that f(r') <= 1/n for r' >= r_plus and builds
/// L = ceil(e / f_min^k) tables, f_min = min of f over [0, r].
DshIndex build_range_index(std::vector<Point> points, FamilyPtr family,
                           double r, double r_plus, std::uint64_t seed);

struct RangeResult {
  /// Distinct points within r_plus, in first-retrieval order.
  std::vector<std::size_t> ids;
  /// Bucket entries examined, duplicates included.
  std::uint64_t retrieved = 0;
};

RangeResult range_report(const DshIndex& index, const Point& q);

struct Dataset {
  Domain domain = Domain::hamming;
  std::size_t dim = 0;
  std::vector<Point> points;
};

/// Header line "<domain> <dimension>", then one whitespace-separated point
/// per line. Blank lines and lines starting with '#' are skipped.
Dataset parse_dataset(std::string_view text);
std::string format_dataset(const Dataset& data);

/// n uniform points (see random_point).
Dataset random_dataset(Domain domain, std::size_t d, std::size_t n,
                       std::uint64_t seed);

}  // namespace dsh
