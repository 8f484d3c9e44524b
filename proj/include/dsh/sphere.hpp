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
#include <functional>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/polynomial.hpp"

namespace dsh {

// All sphere CPFs take the inner product alpha in [-1, 1].

enum class Sign { plus, minus };

/// Random hyperplane: h = g = [<a, x> >= 0]. CPF 1 - acos(alpha)/pi.
FamilyPtr simhash_family(std::size_t d);

/// Nearest signed basis vector after multiplying by a d x d Gaussian
/// matrix. Ties go to the lowest index, +e before -e. The minus variant
/// hashes the query as h(-y). CPF is empirical.
FamilyPtr crosspolytope_family(std::size_t d, Sign sign);

/// Largest projection count a filter family may use.
inline constexpr std::uint64_t kFilterMaxProjections = std::uint64_t{1} << 22;

struct FilterParams {
  double t = 2.0;
  /// 0 selects the default ceil(2 t^3 / p') with p' the lower Gaussian tail
  /// bound at t.
  std::uint64_t m = 0;
  Sign sign = Sign::plus;
};

std::uint64_t default_filter_m(double t);

/// h(x) = first i <= m with <z_i, x> >= t, else m + 1. g uses the same
/// projections with sentinel m + 2; the minus variant applies g to -y.
///
/// Projections are drawn from a per-pair counter-seeded normal stream and
/// regenerated on every evaluation, so memory stays O(d) for any m.
FamilyPtr filter_family(std::size_t d, FilterParams params);

/// Exact CPF of the plus family, p_b (1 - (1 - p_e)^m) / p_e with p_b the
/// bivariate orthant probability and p_e = 2 Q(t) - p_b.
double filter_cpf(double t, std::uint64_t m, Sign sign, double alpha);

/// Sandwich of f_+(alpha) for the default m. The minus family is evaluated
/// at -alpha. The lower end is clamped at 0.
Interval filter_cpf_bounds(double t, double alpha, Sign sign = Sign::plus);

/// Lower end without the factor 1/2. The exact CPF falls below it (t = 2,
/// alpha = 0), so it is kept for reporting only.
double filter_lower_bound_unhalved(double t, double alpha);

struct AnnulusFamilyParams {
  double alpha_max = 0.0;
  double t_plus = 2.0;
  double s = 2.0;

  double t_minus() const {
    return (1 - alpha_max) / (1 + alpha_max) * t_plus;
  }
};

/// Product of independent plus (threshold t_plus) and minus (threshold
/// t_minus) filter families.
FamilyPtr annulus_family(std::size_t d, const AnnulusFamilyParams& params);

/// Interval [alpha_-, alpha_+] of inner products whose odds ratio
/// (1 - a)/(1 + a) is within a factor s of that of alpha_max.
Interval annulus_interval(const AnnulusFamilyParams& params);

enum class EmbedSide { data, query };

/// Maximum embedded dimension sum_i d^i.
inline constexpr std::size_t kEmbedMaxDimension = std::size_t{1} << 20;

std::size_t valiant_dimension(const Polynomial& p, std::size_t d);

/// Concatenation of the blocks c_i x^(i), i = 0..k, where x^(i) is the i-fold
/// tensor power in row-major order, c_i = sqrt|a_i| on the data side and
/// a_i / sqrt|a_i| on the query side. Requires sum |a_i| = 1.
std::vector<double> valiant_embed(const Polynomial& p,
                                  std::span<const double> x, EmbedSide side);

using SphereFamilyFactory = std::function<FamilyPtr(std::size_t)>;

/// h = base.h(embed_data(x)), g = base.g(embed_query(y)). CPF base(P(alpha)).
FamilyPtr polynomial_sphere_family(
    const Polynomial& p, std::size_t d,
    const SphereFamilyFactory& base = simhash_family);

}  // namespace dsh
