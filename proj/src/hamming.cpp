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

#include "dsh/hamming.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "dsh/combinators.hpp"

namespace dsh {

namespace {

constexpr double kRootTol = 1e-9;

class BitPair final : public FunctionPair {
 public:
  BitPair(std::size_t d, std::size_t i, bool anti)
      : FunctionPair(Domain::hamming, d), i_(i), anti_(anti) {}
  HashToken h(const Point& x) const override { return x.bits[i_]; }
  HashToken g(const Point& y) const override {
    return anti_ ? 1u - y.bits[i_] : y.bits[i_];
  }

 private:
  std::size_t i_;
  bool anti_;
};

class ConstPair final : public FunctionPair {
 public:
  ConstPair(std::size_t d, HashToken hv, HashToken gv)
      : FunctionPair(Domain::hamming, d), hv_(hv), gv_(gv) {}
  HashToken h(const Point&) const override { return hv_; }
  HashToken g(const Point&) const override { return gv_; }

 private:
  HashToken hv_;
  HashToken gv_;
};

class ProductPair final : public FunctionPair {
 public:
  ProductPair(std::size_t d, std::vector<std::uint32_t> idx, unsigned k1)
      : FunctionPair(Domain::hamming, d), idx_(std::move(idx)), k1_(k1) {}

  HashToken h(const Point& x) const override { return fold(x, false); }
  HashToken g(const Point& y) const override { return fold(y, true); }
  bool collides(const Point& x, const Point& y) const override {
    for (std::size_t j = 0; j < idx_.size(); ++j) {
      const bool same = x.bits[idx_[j]] == y.bits[idx_[j]];
      if (same != (j < k1_)) return false;
    }
    return true;
  }

 private:
  // Bits are packed 64 per word and each word folded with combine_tokens,
  // which is a bijection in its second argument, so distinct tuples of up
  // to 64 bits never share a token.
  HashToken fold(const Point& p, bool query) const {
    HashToken acc = kTupleSeed;
    std::uint64_t word = 0;
    unsigned fill = 0;
    for (std::size_t j = 0; j < idx_.size(); ++j) {
      std::uint64_t b = p.bits[idx_[j]];
      if (query && j >= k1_) b ^= 1u;
      word |= b << fill;
      if (++fill == 64) {
        acc = combine_tokens(acc, word);
        word = 0;
        fill = 0;
      }
    }
    if (fill || idx_.empty()) acc = combine_tokens(acc, word);
    return acc;
  }

  std::vector<std::uint32_t> idx_;
  unsigned k1_;
};

class LambdaFamily final : public DshFamily {
 public:
  using Sampler = std::function<PairPtr(Rng&)>;
  LambdaFamily(std::size_t d, Cpf cpf, std::string name, Sampler s)
      : DshFamily(Domain::hamming, d, std::move(cpf), std::move(name)),
        sampler_(std::move(s)) {}
  PairPtr sample(Rng& rng) const override { return sampler_(rng); }

 private:
  Sampler sampler_;
};

void check_dim(std::size_t d) {
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Cpf hamming_cpf(std::function<double(double)> f) {
  return Cpf(CpfKind::closed_form, Argument::relative_hamming, std::move(f));
}

}  // namespace

FamilyPtr bit_sampling_family(std::size_t d) {
  check_dim(d);
  return std::make_shared<LambdaFamily>(
      d, hamming_cpf([](double t) { return 1.0 - t; }), "bit",
      [d](Rng& rng) -> PairPtr {
        return std::make_unique<BitPair>(d, rng.below(d), false);
      });
}

FamilyPtr anti_bit_sampling_family(std::size_t d) {
  check_dim(d);
  return std::make_shared<LambdaFamily>(
      d, hamming_cpf([](double t) { return t; }), "anti",
      [d](Rng& rng) -> PairPtr {
        return std::make_unique<BitPair>(d, rng.below(d), true);
      });
}

FamilyPtr scaled_bit_sampling_family(std::size_t d, double alpha) {
  check_dim(d);
  check_unit(alpha, "alpha");
  return std::make_shared<LambdaFamily>(
      d, hamming_cpf([alpha](double t) { return 1.0 - alpha * t; }),
      "sbit(alpha=" + fmt(alpha) + ")", [d, alpha](Rng& rng) -> PairPtr {
        const std::size_t i = rng.below(d);
        if (rng.bernoulli(alpha)) return std::make_unique<BitPair>(d, i, false);
        return std::make_unique<ConstPair>(d, 0, 0);
      });
}

FamilyPtr damped_anti_family(std::size_t d, double alpha) {
  check_dim(d);
  check_unit(alpha, "alpha");
  return std::make_shared<LambdaFamily>(
      d, hamming_cpf([alpha](double t) { return alpha * t; }),
      "danti(alpha=" + fmt(alpha) + ")", [d, alpha](Rng& rng) -> PairPtr {
        const std::size_t i = rng.below(d);
        if (rng.bernoulli(alpha)) return std::make_unique<BitPair>(d, i, true);
        // Bit forced to 0 on both sides: h = 0, g = 1 - 0.
        return std::make_unique<ConstPair>(d, 0, 1);
      });
}

FamilyPtr constant_family(std::size_t d, double p) {
  check_dim(d);
  check_unit(p, "collision probability");
  return std::make_shared<LambdaFamily>(
      d, hamming_cpf([p](double) { return p; }), "const(p=" + fmt(p) + ")",
      [d, p](Rng& rng) -> PairPtr {
        return std::make_unique<ConstPair>(d, 0, rng.bernoulli(p) ? 0 : 1);
      });
}

FamilyPtr scaled_biased_anti_family(std::size_t d, double alpha, double beta) {
  check_dim(d);
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  return std::make_shared<LambdaFamily>(
      d,
      hamming_cpf([alpha, beta](double t) { return beta / 2 + alpha * t / 2; }),
      "santi(alpha=" + fmt(alpha) + ",beta=" + fmt(beta) + ")",
      [d, alpha, beta](Rng& rng) -> PairPtr {
        if (rng.bernoulli(0.5)) {
          return std::make_unique<ConstPair>(d, 0, rng.bernoulli(beta) ? 0 : 1);
        }
        const std::size_t i = rng.below(d);
        if (rng.bernoulli(alpha)) return std::make_unique<BitPair>(d, i, true);
        return std::make_unique<ConstPair>(d, 0, 1);
      });
}

FamilyPtr bit_anti_product_family(std::size_t d, unsigned k1, unsigned k2) {
  check_dim(d);
  if (k1 + k2 == 0) throw InvalidArgument("product needs k1 + k2 >= 1");
  const double a = k1;
  const double b = k2;
  Cpf cpf(
      CpfKind::closed_form, Argument::relative_hamming,
      [a, b](double t) { return std::pow(1.0 - t, a) * std::pow(t, b); },
      [a, b](double t) {
        const double l1 = a > 0 ? a * std::log1p(-t) : 0.0;
        const double l2 = b > 0 ? b * std::log(t) : 0.0;
        return l1 + l2;
      });
  return std::make_shared<LambdaFamily>(
      d, std::move(cpf),
      "concat(pow(bit," + std::to_string(k1) + "),pow(anti," +
          std::to_string(k2) + "))",
      [d, k1, k2](Rng& rng) -> PairPtr {
        std::vector<std::uint32_t> idx(k1 + k2);
        for (auto& i : idx) i = static_cast<std::uint32_t>(rng.below(d));
        return std::make_unique<ProductPair>(d, std::move(idx), k1);
      });
}

const char* scheme_tag_name(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::S1:
      return "S1";
    case SchemeTag::S2:
      return "S2";
    case SchemeTag::S3:
      return "S3";
    case SchemeTag::S4:
      return "S4";
    case SchemeTag::S5:
      return "S5";
    case SchemeTag::S6:
      return "S6";
    case SchemeTag::S7:
      return "S7";
    case SchemeTag::zero_root:
      return "zero_root";
  }
  return "unknown";
}

double assembly_exact_cpf(const SchemeAssembly& assembly, double t) {
  double s = 1.0;
  for (const auto& c : assembly.components) {
    const double a = c.root.real();
    const double b = c.root.imag();
    const double r2 = a * a + b * b;
    const double az = std::abs(a);
    switch (c.tag) {
      case SchemeTag::zero_root:
        s *= t;
        break;
      case SchemeTag::S1:
        s *= 0.5 + t / (2 * az);
        break;
      case SchemeTag::S2:
        s *= az / 2 + t / 2;
        break;
      case SchemeTag::S3:
        s *= 1 - t / a;
        break;
      case SchemeTag::S4: {
        const double q = t / (2 * az) + 0.5;
        s *= b * b / (4 * r2) + a * a / r2 * q * q;
        break;
      }
      case SchemeTag::S5: {
        const double q = 1 - t / a;
        s *= b * b / r2 + a * a / r2 * q * q;
        break;
      }
      case SchemeTag::S6:
        s *= t * t / (4 * r2) + az * t / (2 * r2) + 0.25;
        break;
      case SchemeTag::S7:
        s *= t * t / 4 + az * t / 2 + r2 / 4;
        break;
    }
  }
  return s;
}

double snap_relative_distance(double t, std::size_t d) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("relative Hamming distance must lie in [0, 1]");
  }
  return std::round(t * static_cast<double>(d)) / static_cast<double>(d);
}

PolynomialFamily polynomial_family(const Polynomial& p, std::size_t d) {
  check_dim(d);
  if (p.degree() < 1) throw InvalidArgument("polynomial degree must be >= 1");

  SchemeAssembly as;
  as.leading_abs = std::abs(p.leading());
  std::vector<FamilyPtr> parts;
  auto add = [&](SchemeTag tag, std::complex<double> z, double norm,
                 FamilyPtr f) {
    as.components.push_back({tag, z, norm});
    parts.push_back(std::move(f));
  };

  const auto& roots = p.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto z = roots[i];
    if (z.imag() == 0.0) {
      const double x = z.real();
      if (x < 0) ++as.psi;
      if (x >= 1 - kRootTol) {
        const double zz = std::max(x, 1.0);
        add(SchemeTag::S3, {zz, 0}, zz, scaled_bit_sampling_family(d, 1 / zz));
      } else if (x > kRootTol) {
        throw ConstructionError("root " + fmt(x) +
                                " lies strictly inside (0, 1)");
      } else if (x >= 0) {
        add(SchemeTag::zero_root, {0, 0}, 1.0, anti_bit_sampling_family(d));
      } else if (x < -1) {
        add(SchemeTag::S1, z, 2 * std::abs(x),
            scaled_biased_anti_family(d, 1 / std::abs(x), 1.0));
      } else {
        add(SchemeTag::S2, z, 2.0,
            scaled_biased_anti_family(d, 1.0, std::abs(x)));
      }
      continue;
    }
    // Conjugate pair: roots[i] has Im > 0, roots[i + 1] is its partner.
    ++i;
    double a = z.real();
    const double b = z.imag();
    if (a > kRootTol && a < 1 - kRootTol) {
      throw ConstructionError("complex root with real part " + fmt(a) +
                              " inside (0, 1)");
    }
    if (a < 0) as.psi += 2;
    if (a >= 1 - kRootTol) {
      a = std::max(a, 1.0);
      const double r2 = a * a + b * b;
      add(SchemeTag::S5, {a, b}, r2,
          mixture({constant_family(d, 1.0),
                   power(scaled_bit_sampling_family(d, 1 / a), 2)},
                  {b * b / r2, a * a / r2}));
    } else if (a < -1) {
      const double r2 = a * a + b * b;
      add(SchemeTag::S4, {a, b}, 4 * r2,
          mixture({constant_family(d, 0.25),
                   power(scaled_biased_anti_family(d, 1 / std::abs(a), 1.0),
                         2)},
                  {b * b / r2, a * a / r2}));
    } else {
      a = std::min(a, 0.0);
      const double r2 = a * a + b * b;
      if (r2 >= 1) {
        const double r = std::sqrt(r2);
        add(SchemeTag::S6, {a, b}, 4 * r2,
            mixture({constant_family(d, 1.0),
                     damped_anti_family(d, std::abs(a) / r2),
                     power(damped_anti_family(d, 1 / r), 2)},
                    {0.25, 0.5, 0.25}));
      } else {
        add(SchemeTag::S7, {a, b}, 4.0,
            mixture({constant_family(d, r2), damped_anti_family(d, std::abs(a)),
                     power(anti_bit_sampling_family(d), 2)},
                    {0.25, 0.5, 0.25}));
      }
    }
  }

  as.delta = as.leading_abs;
  for (const auto& c : as.components) as.delta *= c.normalizer;

  for (int i = 1; i <= 32; ++i) {
    const double t = i / 33.0;
    const double want = p(t);
    const double got = assembly_exact_cpf(as, t) * as.delta;
    if (!(std::abs(got - want) <= 1e-8 * std::abs(want))) {
      throw ConstructionError(
          "assembled CPF does not reproduce P(t)/delta (is P positive on "
          "(0, 1)?)");
    }
  }

  FamilyPtr fam = parts.size() == 1 ? parts.front() : concat(parts);
  std::string name = "poly(coef=[";
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
    if (i) name += ",";
    name += fmt(p.coefficients()[i]);
  }
  name += "])";
  return {renamed(std::move(fam), std::move(name)), as.delta, std::move(as)};
}

}  // namespace dsh
