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

#include "dsh/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace dsh {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2 pi)
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)

// Continued fraction tail c(x) = 1/(x + 2/(x + 3/(x + ...))), evaluated
// bottom-up. Then R(x) = 1/(x + c(x)) and 1 - x R(x) = R(x) c(x).
double cf_tail(double x) {
  double acc = 0.0;
  for (int j = 300; j >= 2; --j) acc = j / (x + acc);
  return 1.0 / (x + acc);
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) {
  return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) {
  return 0.5 * boost::math::erfc(x / std::numbers::sqrt2);
}

double log_normal_sf(double x) {
  if (x < 5.0) return std::log(normal_sf(x));
  return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(x));
}

double mills_ratio(double x) {
  if (x < 5.0) return normal_sf(x) / normal_pdf(x);
  return 1.0 / (x + cf_tail(x));
}

double psi(double x) {
  if (x < 5.0) return normal_pdf(x) - x * normal_sf(x);
  return std::exp(log_psi(x));
}

double log_psi(double x) {
  if (x < 5.0) return std::log(psi(x));
  const double c = cf_tail(x);
  const double r = 1.0 / (x + c);
  return -0.5 * x * x - kLogSqrt2Pi + std::log(r * c);
}

Interval normal_tail_bounds(double t) {
  if (t < 0) throw InvalidArgument("tail bounds need t >= 0");
  const double e = kInvSqrt2Pi * std::exp(-0.5 * t * t);
  return {e / (t + 1.0), t > 0 ? e / t : 1.0};
}

Interval bivariate_tail_bounds(double t, double alpha) {
  if (!(t > 0) || !(alpha > -1 && alpha < 1)) {
    throw InvalidArgument("bivariate bounds need t > 0 and alpha in (-1, 1)");
  }
  const double upper = 1.0 / (2.0 * std::numbers::pi * t * t) *
                       (1 + alpha) * (1 + alpha) /
                       std::sqrt(1 - alpha * alpha) *
                       std::exp(-t * t / (1 + alpha));
  const double pre =
      1.0 - (2.0 - alpha) * (1.0 + alpha) / (1.0 - alpha) / (t * t);
  return {std::max(0.0, pre) * upper, upper};
}

double bivariate_upper_orthant(double t, double alpha) {
  if (!(alpha > -1 && alpha < 1)) {
    throw InvalidArgument("correlation must lie in (-1, 1)");
  }
  const double s = std::sqrt(1 - alpha * alpha);
  auto f = [&](double x) { return normal_pdf(x) * normal_sf((t - alpha * x) / s); };
  using boost::math::quadrature::gauss_kronrod;
  // The integrand is below 1e-300 past t + 40 for any t >= 0; for negative t
  // the lower end still carries all the mass.
  const double lo = t;
  const double hi = std::max(t, 0.0) + 40.0;
  double err = 0.0;
  double mid = std::max(lo, std::min(hi, 0.0));
  double v = 0.0;
  if (mid > lo) {
    v += gauss_kronrod<double, 61>::integrate(f, lo, mid, 20, 1e-15, &err);
  }
  v += gauss_kronrod<double, 61>::integrate(f, mid, hi, 20, 1e-15, &err);
  return v;
}

}  // namespace dsh
