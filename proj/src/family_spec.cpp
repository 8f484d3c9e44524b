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

#include "dsh/family_spec.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsh/combinators.hpp"
#include "dsh/euclidean.hpp"
#include "dsh/hamming.hpp"
#include "dsh/polynomial.hpp"
#include "dsh/privacy.hpp"
#include "dsh/sphere.hpp"

namespace dsh {

namespace {

struct Value {
  std::optional<double> number;
  std::string word;
  std::vector<double> list;
  bool is_list = false;
};

struct Node {
  std::string name;
  std::vector<Node> children;
  std::vector<double> numbers;  // positional numeric arguments
  std::map<std::string, Value> named;
  std::size_t pos = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) {
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  Node parse() {
    Node n = expr();
    if (i_ != text_.size()) fail("unexpected '" + std::string(1, text_[i_]) + "'");
    return n;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("family spec, offset " + std::to_string(i_) + ": " + why);
  }

 private:
  bool at(char c) const { return i_ < text_.size() && text_[i_] == c; }
  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  bool number_start() const {
    if (i_ >= text_.size()) return false;
    const char c = text_[i_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
           c == '+' || c == '.';
  }

  std::string ident() {
    const std::size_t b = i_;
    while (i_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
            text_[i_] == '_')) {
      ++i_;
    }
    if (b == i_) fail("expected a name");
    return text_.substr(b, i_ - b);
  }

  double number() {
    const char* begin = text_.c_str() + i_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) fail("expected a number");
    i_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  Value value() {
    Value v;
    if (at('[')) {
      ++i_;
      v.is_list = true;
      if (!at(']')) {
        v.list.push_back(number());
        while (at(',')) {
          ++i_;
          v.list.push_back(number());
        }
      }
      expect(']');
    } else if (number_start()) {
      v.number = number();
    } else {
      v.word = ident();
    }
    return v;
  }

  Node expr() {
    Node n;
    n.pos = i_;
    n.name = ident();
    if (!at('(')) return n;
    ++i_;
    if (at(')')) {
      ++i_;
      return n;
    }
    while (true) {
      if (number_start()) {
        n.numbers.push_back(number());
      } else {
        const std::size_t save = i_;
        std::string id = ident();
        if (at('=')) {
          ++i_;
          if (n.named.count(id)) fail("duplicate parameter '" + id + "'");
          n.named[id] = value();
        } else {
          i_ = save;
          n.children.push_back(expr());
        }
      }
      if (at(',')) {
        ++i_;
        continue;
      }
      expect(')');
      return n;
    }
  }

  std::string text_;
  std::size_t i_ = 0;
};

class Builder {
 public:
  explicit Builder(std::size_t d) : d_(d) {}

  FamilyPtr build(Node& n) {
    const std::string& f = n.name;
    FamilyPtr out;
    if (f == "concat") {
      need_children(n, 1);
      std::vector<FamilyPtr> parts;
      for (auto& c : n.children) parts.push_back(build(c));
      out = concat(std::move(parts));
    } else if (f == "pow") {
      need_children(n, 1, 1);
      double k = n.numbers.size() == 1 ? n.numbers[0] : num(n, "k");
      if (n.numbers.size() > 1) bad(n, "pow takes one exponent");
      out = power(build(n.children[0]), count(n, k, "k"));
      n.numbers.clear();
    } else if (f == "mix") {
      need_children(n, 1);
      std::vector<FamilyPtr> parts;
      for (auto& c : n.children) parts.push_back(build(c));
      out = mixture(std::move(parts), list(n, "p"));
    } else {
      if (!n.children.empty()) bad(n, "'" + f + "' takes no sub-families");
      out = leaf(n);
    }
    if (!n.numbers.empty()) bad(n, "unexpected positional number");
    for (const auto& [key, v] : n.named) {
      if (!used_.count(&v)) bad(n, "unknown parameter '" + key + "'");
    }
    return out;
  }

 private:
  [[noreturn]] void bad(const Node& n, const std::string& why) const {
    throw ParseError("family spec, offset " + std::to_string(n.pos) + " (" +
                     n.name + "): " + why);
  }

  void need_children(const Node& n, std::size_t lo,
                     std::size_t hi = static_cast<std::size_t>(-1)) const {
    if (n.children.size() < lo || n.children.size() > hi) {
      bad(n, "wrong number of sub-families");
    }
  }

  const Value* find(const Node& n, const std::string& key) {
    auto it = n.named.find(key);
    if (it == n.named.end()) return nullptr;
    used_.insert(&it->second);
    return &it->second;
  }

  double num(const Node& n, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
    const Value* v = find(n, key);
    if (!v) {
      if (fallback) return *fallback;
      bad(n, "missing parameter '" + key + "'");
    }
    if (!v->number) bad(n, "parameter '" + key + "' must be a number");
    return *v->number;
  }

  std::vector<double> list(const Node& n, const std::string& key) {
    const Value* v = find(n, key);
    if (!v) bad(n, "missing parameter '" + key + "'");
    if (!v->is_list) bad(n, "parameter '" + key + "' must be a list");
    return v->list;
  }

  unsigned count(const Node& n, double v, const std::string& key) const {
    if (!(v >= 0 && v <= 4294967295.0) || v != std::floor(v)) {
      bad(n, "parameter '" + key + "' must be a nonnegative integer");
    }
    return static_cast<unsigned>(v);
  }

  Sign sign(const Node& n) {
    const Value* v = find(n, "sign");
    if (!v) return Sign::plus;
    if (v->word == "plus" || v->word == "p") return Sign::plus;
    if (v->word == "minus" || v->word == "m") return Sign::minus;
    bad(n, "sign must be plus or minus");
  }

  FamilyPtr leaf(const Node& n) {
    const std::string& f = n.name;
    if (f == "bit") return bit_sampling_family(d_);
    if (f == "anti") return anti_bit_sampling_family(d_);
    if (f == "sbit") return scaled_bit_sampling_family(d_, num(n, "alpha"));
    if (f == "santi") {
      return scaled_biased_anti_family(d_, num(n, "alpha"), num(n, "beta"));
    }
    if (f == "danti") return damped_anti_family(d_, num(n, "alpha"));
    if (f == "const") return constant_family(d_, num(n, "p"));
    if (f == "product") {
      return bit_anti_product_family(d_, count(n, num(n, "k1"), "k1"),
                                     count(n, num(n, "k2"), "k2"));
    }
    if (f == "poly") return polynomial_family(Polynomial(list(n, "coef")), d_).family;
    if (f == "step") {
      const double r = num(n, "r");
      const double c = num(n, "c", 2.0);
      return step_family(d_, r, c, count(n, num(n, "k"), "k")).family;
    }
    if (f == "simhash") return simhash_family(d_);
    if (f == "cp") return crosspolytope_family(d_, sign(n));
    if (f == "filter") {
      FilterParams p;
      p.t = num(n, "t", 2.0);
      p.m = count(n, num(n, "m", 0.0), "m");
      p.sign = sign(n);
      return filter_family(d_, p);
    }
    if (f == "annulus") {
      AnnulusFamilyParams p;
      p.alpha_max = num(n, "alpha_max");
      p.t_plus = num(n, "t", 2.0);
      p.s = num(n, "s", 2.0);
      return annulus_family(d_, p);
    }
    if (f == "valiant") {
      return polynomial_sphere_family(Polynomial(list(n, "coef")), d_);
    }
    if (f == "e2dsh") {
      ShiftedBucketParams p;
      p.w = num(n, "w", 1.0);
      p.k = count(n, num(n, "k", 0.0), "k");
      p.d = d_;
      return e2dsh_family(p);
    }
    bad(n, "unknown family");
  }

  std::size_t d_;
  std::set<const Value*> used_;
};

}  // namespace

FamilyPtr parse_family(std::string_view text, std::size_t d) {
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
  Parser parser(text);
  Node root = parser.parse();
  return Builder(d).build(root);
}

const char* family_grammar() {
  return R"(Family expressions (prefix notation, named parameters):
  expr  := name | name(arg, ...)
  arg   := key=value | expr | number
  value := number | word | [number, ...]
Hamming:    bit  anti  sbit(alpha=)  santi(alpha=,beta=)  danti(alpha=)
            const(p=)  product(k1=,k2=)  poly(coef=[a0,a1,...])
            step(r=,c=2,k=)
Sphere:     simhash  cp(sign=plus|minus)  filter(t=2,m=0,sign=plus)
            annulus(alpha_max=,t=2,s=2)  valiant(coef=[a0,a1,...])
Euclidean:  e2dsh(w=1,k=0)
Combinators: concat(e,e,...)  pow(e,k)  mix(e,e,...,p=[p1,p2,...])
Coefficient lists start with the constant term. m=0 picks the default
projection count.
)";
}

}  // namespace dsh
