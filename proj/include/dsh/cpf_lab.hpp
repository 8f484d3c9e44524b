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
#include <utility>
#include <vector>

#include "dsh/core.hpp"

namespace dsh {

struct EstimateReport {
  double argument = 0.0;
  double estimate = 0.0;
  /// sqrt(estimate (1 - estimate) / n).
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
};

enum class RhoKind { rho_plus, rho_minus };

struct RhoReport {
  double rho = 0.0;
  double numerator_prob = 0.0;
  double denominator_prob = 0.0;
  RhoKind kind = RhoKind::rho_plus;
};

/// ln(1/numerator) / ln(1/denominator); both must lie in (0, 1).
RhoReport make_rho_report(double numerator_prob, double denominator_prob,
                          RhoKind kind);

// Pair generators. The Rng overloads fill caller-owned buffers so hot loops
// avoid reallocation; the seed overloads are conveniences.

/// x uniform; y_i = x_i with probability (1 + alpha)/2, independently.
void correlated_bits(std::size_t d, double alpha, Rng& rng, Point& x,
                     Point& y);
std::pair<Point, Point> correlated_bits(std::size_t d, double alpha,
                                        std::uint64_t seed);

/// x uniform; y differs from x in exactly `dist` uniformly chosen positions.
void hamming_pair(std::size_t d, std::size_t dist, Rng& rng, Point& x,
                  Point& y);

/// x uniform on the sphere, y = alpha x + sqrt(1 - alpha^2) z with z uniform
/// on the unit sphere orthogonal to x.
void sphere_pair(std::size_t d, double alpha, Rng& rng, Point& x, Point& y);
std::pair<Point, Point> sphere_pair(std::size_t d, double alpha,
                                    std::uint64_t seed);

/// x standard Gaussian, y = x + delta u with u uniform on the unit sphere.
void euclid_pair(std::size_t d, double delta, Rng& rng, Point& x, Point& y);
std::pair<Point, Point> euclid_pair(std::size_t d, double delta,
                                    std::uint64_t seed);

using PairSampler = std::function<void(Rng&, Point&, Point&)>;

/// Pairs at exactly the given argument: relative Hamming distance (snapped
/// to a multiple of 1/d), inner product, or Euclidean distance.
PairSampler exact_pair_sampler(Domain domain, std::size_t d, double argument);

/// Randomly alpha-correlated bit pairs.
PairSampler correlated_sampler(std::size_t d, double alpha);

/// Fraction of n trials with h(x) = g(y), where trial i draws a fresh pair
/// (h, g) and then a fresh point pair from an Rng seeded with
/// derive_seed(seed, i). Trials are split across thread_count() workers;
/// the result does not depend on the split.
EstimateReport estimate_cpf(const DshFamily& family, const PairSampler& sampler,
                            double argument, std::uint64_t n,
                            std::uint64_t seed);

/// estimate_cpf with exact_pair_sampler. For Hamming families the argument
/// is snapped and the report carries the snapped value.
EstimateReport estimate_cpf(const DshFamily& family, double argument,
                            std::uint64_t n, std::uint64_t seed);

/// Standard error used for 3-sigma comparisons against a reference value:
/// the larger of the plug-in error and the error implied by the reference.
/// A zero-count estimate of a tiny positive probability otherwise carries
/// a plug-in error of exactly 0.
double comparison_sigma(const EstimateReport& r, double reference);

bool within_sigmas(const EstimateReport& r, double reference, double k = 3.0);

enum class Verdict { consistent, violated, inconclusive };

const char* verdict_name(Verdict v);

struct SsseResult {
  Verdict verdict = Verdict::inconclusive;
  EstimateReport at_zero;
  EstimateReport at_alpha;
  double exponent = 1.0;
};

/// Checks f(alpha) >= f(0)^((1+alpha)/(1-alpha)) on alpha-correlated pairs.
/// Violated only if f(alpha) + 3 sigma < (f(0) - 3 sigma)^e; consistent if
/// f(alpha) - 3 sigma >= (f(0) + 3 sigma)^e; inconclusive otherwise.
SsseResult check_reverse_ssse(const DshFamily& family, double alpha,
                              std::uint64_t n, std::uint64_t seed);

/// Checks f(alpha) <= f(0)^((1-alpha)/(1+alpha)), mirrored.
SsseResult check_forward_ssse(const DshFamily& family, double alpha,
                              std::uint64_t n, std::uint64_t seed);

/// Both checks sharing the two estimates.
std::pair<SsseResult, SsseResult> check_ssse(const DshFamily& family,
                                             double alpha, std::uint64_t n,
                                             std::uint64_t seed);

struct JensenValues {
  double lhs;  ///< sum_i (p_i q_i)^c
  double rhs;  ///< (sum_i p_i q_i)^(2c - 1)
};

JensenValues jensen_values(const std::vector<double>& p,
                           const std::vector<double>& q, double c);

/// lhs >= rhs - 1e-12 for c >= 1 and lhs <= rhs + 1e-12 for c <= 1.
bool check_jensen_chain(const std::vector<double>& p,
                        const std::vector<double>& q, double c);

/// Monte Carlo Pr[Z >= t].
EstimateReport estimate_normal_tail(double t, std::uint64_t n,
                                    std::uint64_t seed);

/// Monte Carlo Pr[X1 >= t and X2 >= t], X2 = alpha X1 + sqrt(1-alpha^2) Z2.
EstimateReport estimate_bivariate_tail(double t, double alpha,
                                       std::uint64_t n, std::uint64_t seed);

}  // namespace dsh
