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

#include "dsh/combinators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dsh {

namespace {

class ConcatPair final : public FunctionPair {
 public:
  ConcatPair(Domain domain, std::size_t dim, std::vector<PairPtr> parts)
      : FunctionPair(domain, dim), parts_(std::move(parts)) {}

  HashToken h(const Point& x) const override {
    return fold([&](const FunctionPair& p) { return p.h(x); });
  }
  HashToken g(const Point& y) const override {
    return fold([&](const FunctionPair& p) { return p.g(y); });
  }
  bool collides(const Point& x, const Point& y) const override {
    for (const auto& p : parts_) {
      if (!p->collides(x, y)) return false;
    }
    return true;
  }

 private:
  template <class F>
  HashToken fold(F&& f) const {
    HashToken acc = kTupleSeed;
    if (token_audit_enabled()) {
      std::vector<HashToken> tuple;
      tuple.reserve(parts_.size());
      for (const auto& p : parts_) {
        tuple.push_back(f(*p));
        acc = combine_tokens(acc, tuple.back());
      }
      token_audit_record(acc, tuple);
      return acc;
    }
    for (const auto& p : parts_) acc = combine_tokens(acc, f(*p));
    return acc;
  }

  std::vector<PairPtr> parts_;
};

class ConcatFamily final : public DshFamily {
 public:
  ConcatFamily(std::vector<FamilyPtr> parts, Cpf cpf, std::string name)
      : DshFamily(parts.front()->domain(), parts.front()->dimension(),
                  std::move(cpf), std::move(name)),
        parts_(std::move(parts)) {}

  PairPtr sample(Rng& rng) const override {
    std::vector<PairPtr> pairs;
    pairs.reserve(parts_.size());
    for (const auto& f : parts_) pairs.push_back(f->sample(rng));
    return std::make_unique<ConcatPair>(domain(), dimension(),
                                        std::move(pairs));
  }

 private:
  std::vector<FamilyPtr> parts_;
};

class MixturePair final : public FunctionPair {
 public:
  MixturePair(Domain domain, std::size_t dim, std::uint64_t index,
              PairPtr inner)
      : FunctionPair(domain, dim), index_(index), inner_(std::move(inner)),
        prefix_(combine_tokens(kTupleSeed, index)) {}

  HashToken h(const Point& x) const override {
    return combine_tokens(prefix_, inner_->h(x));
  }
  HashToken g(const Point& y) const override {
    return combine_tokens(prefix_, inner_->g(y));
  }
  bool collides(const Point& x, const Point& y) const override {
    return inner_->collides(x, y);
  }

 private:
  std::uint64_t index_;
  PairPtr inner_;
  HashToken prefix_;
};

class MixtureFamily final : public DshFamily {
 public:
  MixtureFamily(std::vector<FamilyPtr> parts, std::vector<double> probs,
                Cpf cpf, std::string name)
      : DshFamily(parts.front()->domain(), parts.front()->dimension(),
                  std::move(cpf), std::move(name)),
        parts_(std::move(parts)), cumulative_(probs.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cumulative_[i] = acc;
    }
  }

  PairPtr sample(Rng& rng) const override {
    const double u = rng.uniform() * cumulative_.back();
    std::size_t i = 0;
    while (i + 1 < cumulative_.size() && u >= cumulative_[i]) ++i;
    // Zero-weight components are never chosen.
    while (i > 0 && cumulative_[i] == cumulative_[i - 1]) --i;
    return std::make_unique<MixturePair>(domain(), dimension(), i,
                                         parts_[i]->sample(rng));
  }

 private:
  std::vector<FamilyPtr> parts_;
  std::vector<double> cumulative_;
};

void check_compatible(const std::vector<FamilyPtr>& fs, const char* what) {
  if (fs.empty()) {
    throw InvalidArgument(std::string(what) + " needs at least one family");
  }
  for (const auto& f : fs) {
    if (!f) throw InvalidArgument(std::string(what) + ": null family");
    if (f->domain() != fs.front()->domain() ||
        f->dimension() != fs.front()->dimension()) {
      throw DomainMismatch(std::string(what) +
                           " requires matching domain and dimension");
    }
  }
}

std::string join_names(const std::vector<FamilyPtr>& fs) {
  std::string s;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) s += ",";
    s += fs[i]->name();
  }
  return s;
}

bool all_have(const std::vector<FamilyPtr>& fs, bool (Cpf::*pred)() const) {
  return std::all_of(fs.begin(), fs.end(),
                     [&](const FamilyPtr& f) { return (f->cpf().*pred)(); });
}

Interval component_bounds(const Cpf& c, double x) {
  if (c.has_bounds()) return c.bounds(x);
  const double v = c(x);
  return {v, v};
}

class RenamedFamily final : public DshFamily {
 public:
  RenamedFamily(FamilyPtr inner, std::string name)
      : DshFamily(inner->domain(), inner->dimension(), inner->cpf(),
                  std::move(name)),
        inner_(std::move(inner)) {}
  PairPtr sample(Rng& rng) const override { return inner_->sample(rng); }

 private:
  FamilyPtr inner_;
};

}  // namespace

FamilyPtr renamed(FamilyPtr family, std::string name) {
  if (!family) throw InvalidArgument("renamed: null family");
  return std::make_shared<RenamedFamily>(std::move(family), std::move(name));
}

CpfKind weakest_kind(const std::vector<FamilyPtr>& families) {
  CpfKind k = CpfKind::closed_form;
  for (const auto& f : families) {
    if (f->cpf().kind() == CpfKind::empirical) return CpfKind::empirical;
    if (f->cpf().kind() == CpfKind::bounded) k = CpfKind::bounded;
  }
  return k;
}

FamilyPtr concat(std::vector<FamilyPtr> families) {
  check_compatible(families, "concat");
  const Argument arg = families.front()->cpf().argument();
  const CpfKind kind = weakest_kind(families);
  Cpf cpf = Cpf::empirical(arg);
  if (kind != CpfKind::empirical && all_have(families, &Cpf::has_value)) {
    auto eval = [families](double x) {
      double p = 1.0;
      for (const auto& f : families) p *= f->cpf()(x);
      return p;
    };
    auto log_eval = [families](double x) {
      double s = 0.0;
      for (const auto& f : families) s += f->cpf().log(x);
      return s;
    };
    Cpf::BoundsFn bounds;
    if (kind == CpfKind::bounded) {
      bounds = [families](double x) {
        Interval b{1.0, 1.0};
        for (const auto& f : families) {
          const Interval c = component_bounds(f->cpf(), x);
          b.lower *= c.lower;
          b.upper *= c.upper;
        }
        return b;
      };
    }
    cpf = Cpf(kind, arg, eval, log_eval, bounds);
  }
  std::string name = "concat(" + join_names(families) + ")";
  return std::make_shared<ConcatFamily>(std::move(families), std::move(cpf),
                                        std::move(name));
}

FamilyPtr power(FamilyPtr family, unsigned k) {
  if (k == 0) throw InvalidArgument("power needs k >= 1");
  if (!family) throw InvalidArgument("power: null family");
  if (k == 1) return family;
  std::vector<FamilyPtr> copies(k, family);
  const Argument arg = family->cpf().argument();
  const CpfKind kind = family->cpf().kind();
  Cpf cpf = Cpf::empirical(arg);
  if (kind != CpfKind::empirical && family->cpf().has_value()) {
    const double kk = k;
    auto eval = [family, kk](double x) {
      return std::exp(kk * family->cpf().log(x));
    };
    auto log_eval = [family, kk](double x) { return kk * family->cpf().log(x); };
    Cpf::BoundsFn bounds;
    if (kind == CpfKind::bounded) {
      bounds = [family, kk](double x) {
        const Interval c = component_bounds(family->cpf(), x);
        return Interval{std::pow(c.lower, kk), std::pow(c.upper, kk)};
      };
    }
    cpf = Cpf(kind, arg, eval, log_eval, bounds);
  }
  std::string name =
      "pow(" + family->name() + "," + std::to_string(k) + ")";
  return std::make_shared<ConcatFamily>(std::move(copies), std::move(cpf),
                                        std::move(name));
}

FamilyPtr mixture(std::vector<FamilyPtr> families, std::vector<double> probs) {
  check_compatible(families, "mixture");
  if (probs.size() != families.size()) {
    throw InvalidArgument("mixture needs one probability per family");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("mixture probabilities must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidArgument("mixture probabilities must sum to 1");
  }
  const Argument arg = families.front()->cpf().argument();
  const CpfKind kind = weakest_kind(families);
  Cpf cpf = Cpf::empirical(arg);
  if (kind != CpfKind::empirical && all_have(families, &Cpf::has_value)) {
    auto eval = [families, probs](double x) {
      double s = 0.0;
      for (std::size_t i = 0; i < families.size(); ++i) {
        if (probs[i] > 0) s += probs[i] * families[i]->cpf()(x);
      }
      return s;
    };
    auto log_eval = [families, probs](double x) {
      // log-sum-exp over components with positive weight.
      double m = -std::numeric_limits<double>::infinity();
      std::vector<double> terms;
      for (std::size_t i = 0; i < families.size(); ++i) {
        if (probs[i] <= 0) continue;
        terms.push_back(std::log(probs[i]) + families[i]->cpf().log(x));
        m = std::max(m, terms.back());
      }
      if (!std::isfinite(m)) return m;
      double s = 0.0;
      for (double t : terms) s += std::exp(t - m);
      return m + std::log(s);
    };
    Cpf::BoundsFn bounds;
    if (kind == CpfKind::bounded) {
      bounds = [families, probs](double x) {
        Interval b{0.0, 0.0};
        for (std::size_t i = 0; i < families.size(); ++i) {
          if (probs[i] <= 0) continue;
          const Interval c = component_bounds(families[i]->cpf(), x);
          b.lower += probs[i] * c.lower;
          b.upper += probs[i] * c.upper;
        }
        return b;
      };
    }
    cpf = Cpf(kind, arg, eval, log_eval, bounds);
  }
  std::string name = "mix(" + join_names(families) + ",p=[";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i) name += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", probs[i]);
    name += buf;
  }
  name += "])";
  return std::make_shared<MixtureFamily>(std::move(families),
                                         std::move(probs), std::move(cpf),
                                         std::move(name));
}

}  // namespace dsh
