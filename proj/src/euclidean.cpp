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

#include "dsh/euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dsh/gaussian.hpp"

namespace dsh {

namespace {

class ShiftedPair final : public FunctionPair {
 public:
  ShiftedPair(std::size_t d, std::vector<double> a, double b, double w,
              unsigned k)
      : FunctionPair(Domain::euclidean, d), a_(std::move(a)), b_(b), w_(w),
        k_(k) {}
  HashToken h(const Point& x) const override {
    return static_cast<HashToken>(bucket(x));
  }
  HashToken g(const Point& y) const override {
    return static_cast<HashToken>(bucket(y) + static_cast<std::int64_t>(k_));
  }

 private:
  std::int64_t bucket(const Point& x) const {
    return static_cast<std::int64_t>(
        std::floor((dot(a_, x.coords) + b_) / w_));
  }

  std::vector<double> a_;
  double b_;
  double w_;
  unsigned k_;
};

class ShiftedFamily final : public DshFamily {
 public:
  ShiftedFamily(const ShiftedBucketParams& p, Cpf cpf, std::string name)
      : DshFamily(Domain::euclidean, p.d, std::move(cpf), std::move(name)),
        w_(p.w), k_(p.k) {}
  PairPtr sample(Rng& rng) const override {
    std::vector<double> a(dimension());
    for (auto& v : a) v = rng.normal();
    const double b = rng.uniform() * w_;
    return std::make_unique<ShiftedPair>(dimension(), std::move(a), b, w_, k_);
  }

 private:
  double w_;
  unsigned k_;
};

void check_w(double w) {
  if (!(w > 0) || !std::isfinite(w)) {
    throw InvalidArgument("bucket width must be positive");
  }
}

}  // namespace

double e2dsh_cpf(double w, unsigned k, double delta) {
  check_w(w);
  if (!(delta >= 0)) throw InvalidArgument("distance must be nonnegative");
  if (delta == 0) return k == 0 ? 1.0 : 0.0;
  const double s = delta / w;
  const double kk = k;
  const double lo = (kk - 1) / s;
  if (lo < 5.0) {
    const double v = s * (psi(lo) - 2 * psi(kk / s) + psi((kk + 1) / s));
    return std::clamp(v, 0.0, 1.0);
  }
  return std::exp(e2dsh_log_cpf(w, k, delta));
}

double e2dsh_log_cpf(double w, unsigned k, double delta) {
  check_w(w);
  if (!(delta >= 0)) throw InvalidArgument("distance must be nonnegative");
  if (delta == 0) {
    return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double s = delta / w;
  const double kk = k;
  const double lo = (kk - 1) / s;
  if (lo < 5.0) return std::log(e2dsh_cpf(w, k, delta));
  // All three arguments are large: factor out psi(lo); the remaining ratios
  // are at most 1 and decay quickly, so there is no cancellation.
  const double la = log_psi(lo);
  const double lb = log_psi(kk / s);
  const double lc = log_psi((kk + 1) / s);
  const double rest = 1.0 - 2.0 * std::exp(lb - la) + std::exp(lc - la);
  return std::log(s) + la + std::log(rest);
}

FamilyPtr e2dsh_family(const ShiftedBucketParams& params) {
  check_w(params.w);
  if (params.d == 0) throw InvalidArgument("dimension must be at least 1");
  const double w = params.w;
  const unsigned k = params.k;
  Cpf cpf(
      CpfKind::closed_form, Argument::euclidean_distance,
      [w, k](double x) { return e2dsh_cpf(w, k, x); },
      [w, k](double x) { return e2dsh_log_cpf(w, k, x); });
  char buf[64];
  std::snprintf(buf, sizeof buf, "e2dsh(w=%.6g,k=%u)", w, k);
  return std::make_shared<ShiftedFamily>(params, std::move(cpf), buf);
}

double choose_w_k(double c, unsigned k) {
  if (!(c > 1)) throw InvalidArgument("approximation factor must exceed 1");
  (void)k;
  return std::sqrt(2 * std::numbers::pi) / (2 * c);
}

double rho_minus(double w, unsigned k, double r, double c) {
  if (!(r > 0)) throw InvalidArgument("r must be positive");
  if (!(c >= 1)) throw InvalidArgument("c must be at least 1");
  const double num = e2dsh_log_cpf(w, k, r);
  const double den = e2dsh_log_cpf(w, k, r / c);
  if (!(num < 0) || !(den < 0) || !std::isfinite(num) || !std::isfinite(den)) {
    throw InvalidArgument("f(r) and f(r/c) must lie strictly inside (0, 1)");
  }
  return num / den;
}

double e2dsh_upper_bound(double w, unsigned k, double c) {
  const double z = c * (static_cast<double>(k) - 1) * w;
  return 2 * w * c / std::sqrt(2 * std::numbers::pi) * std::exp(-z * z / 2);
}

double e2dsh_lower_bound(double w, unsigned k) {
  const double z = (static_cast<double>(k) + 0.5) * w;
  return w / (4 * std::sqrt(2 * std::numbers::pi)) * std::exp(-z * z / 2);
}

}  // namespace dsh
