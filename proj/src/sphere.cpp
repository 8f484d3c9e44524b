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

#include "dsh/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dsh/combinators.hpp"
#include "dsh/gaussian.hpp"

namespace dsh {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_dim(std::size_t d) {
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
}

class SimHashPair final : public FunctionPair {
 public:
  SimHashPair(std::size_t d, std::vector<double> a)
      : FunctionPair(Domain::sphere, d), a_(std::move(a)) {}
  HashToken h(const Point& x) const override {
    return dot(a_, x.coords) >= 0.0 ? 1 : 0;
  }
  HashToken g(const Point& y) const override { return h(y); }

 private:
  std::vector<double> a_;
};

class SimHashFamily final : public DshFamily {
 public:
  explicit SimHashFamily(std::size_t d)
      : DshFamily(Domain::sphere, d,
                  Cpf(CpfKind::closed_form, Argument::inner_product,
                      [](double a) {
                        return 1.0 - std::acos(std::clamp(a, -1.0, 1.0)) /
                                         std::numbers::pi;
                      }),
                  "simhash") {}
  PairPtr sample(Rng& rng) const override {
    std::vector<double> a(dimension());
    for (auto& v : a) v = rng.normal();
    return std::make_unique<SimHashPair>(dimension(), std::move(a));
  }
};

class CrossPolytopePair final : public FunctionPair {
 public:
  CrossPolytopePair(std::size_t d, std::vector<double> g, bool minus)
      : FunctionPair(Domain::sphere, d), g_(std::move(g)), minus_(minus) {}
  HashToken h(const Point& x) const override { return hash(x.coords, false); }
  HashToken g(const Point& y) const override { return hash(y.coords, minus_); }

 private:
  HashToken hash(const std::vector<double>& x, bool negate) const {
    const std::size_t d = dimension();
    HashToken best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
      double v = 0.0;
      const double* row = g_.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) v += row[j] * x[j];
      if (negate) v = -v;
      if (v > best_v) {
        best_v = v;
        best = 2 * i;
      }
      if (-v > best_v) {
        best_v = -v;
        best = 2 * i + 1;
      }
    }
    return best;
  }

  std::vector<double> g_;
  bool minus_;
};

class CrossPolytopeFamily final : public DshFamily {
 public:
  CrossPolytopeFamily(std::size_t d, Sign sign)
      : DshFamily(Domain::sphere, d, Cpf::empirical(Argument::inner_product),
                  sign == Sign::plus ? "cp(sign=plus)" : "cp(sign=minus)"),
        minus_(sign == Sign::minus) {}
  PairPtr sample(Rng& rng) const override {
    const std::size_t d = dimension();
    std::vector<double> g(d * d);
    for (auto& v : g) v = rng.normal();
    return std::make_unique<CrossPolytopePair>(d, std::move(g), minus_);
  }

 private:
  bool minus_;
};

class FilterPair final : public FunctionPair {
 public:
  FilterPair(std::size_t d, std::uint64_t seed, double t, std::uint64_t m,
             bool minus)
      : FunctionPair(Domain::sphere, d), seed_(seed), t_(t), m_(m),
        minus_(minus) {}

  HashToken h(const Point& x) const override {
    return first_capture(x.coords, false, m_ + 1);
  }
  HashToken g(const Point& y) const override {
    return first_capture(y.coords, minus_, m_ + 2);
  }
  bool collides(const Point& x, const Point& y) const override {
    Rng r(seed_);
    const std::size_t d = dimension();
    for (std::uint64_t i = 0; i < m_; ++i) {
      double px = 0.0;
      double py = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double z = r.normal();
        px += z * x.coords[j];
        py += z * y.coords[j];
      }
      if (minus_) py = -py;
      const bool cx = px >= t_;
      const bool cy = py >= t_;
      if (cx || cy) return cx && cy;
    }
    return false;
  }

 private:
  HashToken first_capture(const std::vector<double>& x, bool negate,
                          HashToken sentinel) const {
    Rng r(seed_);
    const std::size_t d = dimension();
    for (std::uint64_t i = 0; i < m_; ++i) {
      double p = 0.0;
      for (std::size_t j = 0; j < d; ++j) p += r.normal() * x[j];
      if (negate) p = -p;
      if (p >= t_) return i + 1;
    }
    return sentinel;
  }

  std::uint64_t seed_;
  double t_;
  std::uint64_t m_;
  bool minus_;
};

class FilterFamily final : public DshFamily {
 public:
  FilterFamily(std::size_t d, double t, std::uint64_t m, Sign sign, Cpf cpf,
               std::string name)
      : DshFamily(Domain::sphere, d, std::move(cpf), std::move(name)), t_(t),
        m_(m), minus_(sign == Sign::minus) {}
  PairPtr sample(Rng& rng) const override {
    return std::make_unique<FilterPair>(dimension(), rng(), t_, m_, minus_);
  }

 private:
  double t_;
  std::uint64_t m_;
  bool minus_;
};

double filter_upper_plus(double t, double a) {
  return 1.0 / std::sqrt(2 * std::numbers::pi) * (t + 1) / (t * t) *
         (1 + a) * (1 + a) / std::sqrt(1 - a * a) *
         std::exp(-(1 - a) / (1 + a) * t * t / 2);
}

double filter_prefactor(double t, double a) {
  return 1.0 - (2.0 - a) * (1.0 + a) / (1.0 - a) / (t * t);
}

class EmbeddedPair final : public FunctionPair {
 public:
  EmbeddedPair(std::size_t d, std::shared_ptr<const Polynomial> p,
               PairPtr base)
      : FunctionPair(Domain::sphere, d), p_(std::move(p)),
        base_(std::move(base)) {}
  HashToken h(const Point& x) const override {
    return base_->h(embed(x, EmbedSide::data));
  }
  HashToken g(const Point& y) const override {
    return base_->g(embed(y, EmbedSide::query));
  }
  bool collides(const Point& x, const Point& y) const override {
    return base_->collides(embed(x, EmbedSide::data),
                           embed(y, EmbedSide::query));
  }

 private:
  Point embed(const Point& x, EmbedSide side) const {
    Point e;
    e.domain = Domain::sphere;
    e.coords = valiant_embed(*p_, x.coords, side);
    return e;
  }

  std::shared_ptr<const Polynomial> p_;
  PairPtr base_;
};

class EmbeddedFamily final : public DshFamily {
 public:
  EmbeddedFamily(std::size_t d, std::shared_ptr<const Polynomial> p,
                 FamilyPtr base, Cpf cpf, std::string name)
      : DshFamily(Domain::sphere, d, std::move(cpf), std::move(name)),
        p_(std::move(p)), base_(std::move(base)) {}
  PairPtr sample(Rng& rng) const override {
    return std::make_unique<EmbeddedPair>(dimension(), p_,
                                          base_->sample(rng));
  }

 private:
  std::shared_ptr<const Polynomial> p_;
  FamilyPtr base_;
};

}  // namespace

FamilyPtr simhash_family(std::size_t d) {
  check_dim(d);
  return std::make_shared<SimHashFamily>(d);
}

FamilyPtr crosspolytope_family(std::size_t d, Sign sign) {
  check_dim(d);
  return std::make_shared<CrossPolytopeFamily>(d, sign);
}

std::uint64_t default_filter_m(double t) {
  if (!(t > 0)) throw InvalidArgument("filter threshold must be positive");
  const double p_lower = normal_tail_bounds(t).lower;
  const double m = std::ceil(2 * t * t * t / p_lower);
  if (!(m <= static_cast<double>(kFilterMaxProjections))) {
    throw BudgetExceeded("default projection count " + fmt(m) +
                         " exceeds the cap of 2^22");
  }
  return static_cast<std::uint64_t>(std::max(1.0, m));
}

double filter_cpf(double t, std::uint64_t m, Sign sign, double alpha) {
  double a = sign == Sign::plus ? alpha : -alpha;
  a = std::clamp(a, -1.0, 1.0);
  const double q = normal_sf(t);
  double pb;
  if (a >= 1.0) {
    pb = q;
  } else if (a <= -1.0) {
    pb = 0.0;
  } else {
    pb = bivariate_upper_orthant(t, a);
  }
  if (pb <= 0.0) return 0.0;
  const double pe = 2 * q - pb;
  const double capture = -std::expm1(static_cast<double>(m) * std::log1p(-pe));
  return pb * capture / pe;
}

Interval filter_cpf_bounds(double t, double alpha, Sign sign) {
  if (!(t > 0)) throw InvalidArgument("filter threshold must be positive");
  if (!(alpha > -1 && alpha < 1)) {
    throw InvalidArgument("filter bounds need alpha in (-1, 1)");
  }
  const double a = sign == Sign::plus ? alpha : -alpha;
  const double upper = filter_upper_plus(t, a);
  const double lower = std::max(0.0, filter_prefactor(t, a)) * t / (t + 1) *
                           upper / 2 -
                       2 * std::exp(-t * t * t);
  return {std::max(0.0, lower), upper};
}

double filter_lower_bound_unhalved(double t, double alpha) {
  const double upper = filter_upper_plus(t, alpha);
  return std::max(0.0, std::max(0.0, filter_prefactor(t, alpha)) * t /
                               (t + 1) * upper -
                           2 * std::exp(-t * t * t));
}

FamilyPtr filter_family(std::size_t d, FilterParams params) {
  check_dim(d);
  if (!(params.t > 0)) throw InvalidArgument("filter threshold must be > 0");
  const std::uint64_t m = params.m == 0 ? default_filter_m(params.t) : params.m;
  if (m > kFilterMaxProjections) {
    throw BudgetExceeded("projection count exceeds the cap of 2^22");
  }
  const double t = params.t;
  const Sign sign = params.sign;
  const bool default_m = m == default_filter_m(t);
  Cpf::BoundsFn bounds;
  if (default_m) {
    bounds = [t, sign](double a) {
      if (a <= -1 || a >= 1) {
        const double v = filter_cpf(t, default_filter_m(t), sign, a);
        return Interval{v, v};
      }
      return filter_cpf_bounds(t, a, sign);
    };
  }
  Cpf cpf(CpfKind::bounded, Argument::inner_product,
          [t, m, sign](double a) { return filter_cpf(t, m, sign, a); }, {},
          bounds);
  std::string name = "filter(t=" + fmt(t) + ",m=" + std::to_string(m) +
                     ",sign=" + (sign == Sign::plus ? "plus" : "minus") + ")";
  return std::make_shared<FilterFamily>(d, t, m, sign, std::move(cpf),
                                        std::move(name));
}

FamilyPtr annulus_family(std::size_t d, const AnnulusFamilyParams& params) {
  if (!(params.alpha_max > -1 && params.alpha_max < 1)) {
    throw InvalidArgument("alpha_max must lie in (-1, 1)");
  }
  if (!(params.t_plus > 0)) throw InvalidArgument("t must be positive");
  FamilyPtr plus = filter_family(d, {params.t_plus, 0, Sign::plus});
  FamilyPtr minus = filter_family(d, {params.t_minus(), 0, Sign::minus});
  return renamed(concat({plus, minus}),
                 "annulus(alpha_max=" + fmt(params.alpha_max) +
                     ",t=" + fmt(params.t_plus) + ")");
}

Interval annulus_interval(const AnnulusFamilyParams& params) {
  if (!(params.s > 1)) throw InvalidArgument("s must exceed 1");
  const double a = (1 - params.alpha_max) / (1 + params.alpha_max);
  auto inv = [](double odds) { return (1 - odds) / (1 + odds); };
  return {inv(params.s * a), inv(a / params.s)};
}

std::size_t valiant_dimension(const Polynomial& p, std::size_t d) {
  std::size_t total = 0;
  std::size_t block = 1;
  for (int i = 0; i <= p.degree(); ++i) {
    total += block;
    if (total > kEmbedMaxDimension) {
      throw BudgetExceeded("embedded dimension exceeds 2^20");
    }
    if (i < p.degree()) {
      if (block > kEmbedMaxDimension / std::max<std::size_t>(d, 1)) {
        throw BudgetExceeded("embedded dimension exceeds 2^20");
      }
      block *= d;
    }
  }
  return total;
}

std::vector<double> valiant_embed(const Polynomial& p,
                                  std::span<const double> x, EmbedSide side) {
  if (std::abs(p.abs_sum() - 1.0) > 1e-12) {
    throw InvalidArgument("embedding needs sum |a_i| = 1");
  }
  if (std::abs(norm(x) - 1.0) > 1e-9) {
    throw InvalidArgument("embedding needs a unit vector");
  }
  const std::size_t d = x.size();
  std::vector<double> out;
  out.reserve(valiant_dimension(p, d));
  std::vector<double> block{1.0};
  std::vector<double> next;
  const auto& a = p.coefficients();
  for (int i = 0; i <= p.degree(); ++i) {
    double c = 0.0;
    if (a[i] != 0.0) {
      const double root = std::sqrt(std::abs(a[i]));
      c = side == EmbedSide::data ? root : a[i] / root;
    }
    for (double v : block) out.push_back(c * v);
    if (i == p.degree()) break;
    next.resize(block.size() * d);
    for (std::size_t u = 0; u < block.size(); ++u) {
      for (std::size_t j = 0; j < d; ++j) next[u * d + j] = block[u] * x[j];
    }
    block.swap(next);
  }
  return out;
}

FamilyPtr polynomial_sphere_family(const Polynomial& p, std::size_t d,
                                   const SphereFamilyFactory& base) {
  check_dim(d);
  if (std::abs(p.abs_sum() - 1.0) > 1e-12) {
    throw InvalidArgument("embedding needs sum |a_i| = 1");
  }
  const std::size_t big = valiant_dimension(p, d);
  FamilyPtr b = base(big);
  if (!b || b->domain() != Domain::sphere || b->dimension() != big) {
    throw InvalidArgument("base family must be a sphere family of dimension " +
                          std::to_string(big));
  }
  auto poly = std::make_shared<const Polynomial>(p);
  Cpf cpf = Cpf::empirical(Argument::inner_product);
  if (b->cpf().has_value()) {
    cpf = Cpf(b->cpf().kind(), Argument::inner_product,
              [poly, b](double a) { return b->cpf()((*poly)(a)); });
  }
  std::string name = "valiant(coef=[";
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
    if (i) name += ",";
    name += fmt(p.coefficients()[i]);
  }
  name += "]," + b->name() + ")";
  return std::make_shared<EmbeddedFamily>(d, poly, b, std::move(cpf),
                                          std::move(name));
}

}  // namespace dsh
