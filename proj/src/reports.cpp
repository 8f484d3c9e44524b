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

#include "dsh/reports.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>

#include "dsh/cpf_lab.hpp"
#include "dsh/euclidean.hpp"
#include "dsh/family_spec.hpp"
#include "dsh/gaussian.hpp"
#include "dsh/hamming.hpp"
#include "dsh/polynomial.hpp"
#include "dsh/sphere.hpp"

namespace dsh {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

double parse_number(std::string_view s) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v)) {
    throw ParseError("bad grid value '" + str + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty grid");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto a = s.find(':');
    const auto b = s.find(':', a + 1);
    if (b == std::string::npos || s.find(':', b + 1) != std::string::npos) {
      throw ParseError("range grid must be start:step:stop");
    }
    const double start = parse_number(std::string_view(s).substr(0, a));
    const double step = parse_number(std::string_view(s).substr(a + 1, b - a - 1));
    const double stop = parse_number(std::string_view(s).substr(b + 1));
    if (!(step > 0) || stop < start) {
      throw ParseError("range grid needs step > 0 and stop >= start");
    }
    const double count = std::floor((stop - start) / step * (1 + 1e-9) + 1e-9);
    if (count > 1e6) throw ParseError("grid has more than 10^6 points");
    for (std::uint64_t i = 0; i <= static_cast<std::uint64_t>(count); ++i) {
      out.push_back(start + step * static_cast<double>(i));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(',', pos);
    out.push_back(parse_number(std::string_view(s).substr(
        pos, next == std::string::npos ? std::string::npos : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += csv_field(r.family) + "," + format_double(r.argument) + "," +
           format_double(r.estimate) + "," + format_double(r.std_error) + "," +
           std::to_string(r.n) + "," + opt(r.closed_form) + "," +
           opt(r.lower_bound) + "," + opt(r.upper_bound) + "\n";
  }
  return out;
}

std::vector<CsvRow> cpf_curve(const DshFamily& family,
                              const std::vector<double>& grid, std::uint64_t n,
                              std::uint64_t seed) {
  std::vector<CsvRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EstimateReport e =
        estimate_cpf(family, grid[i], n, derive_seed(seed, i));
    CsvRow row;
    row.family = family.name();
    row.argument = e.argument;
    row.estimate = e.estimate;
    row.std_error = e.std_error;
    row.n = e.n;
    if (family.cpf().has_value()) row.closed_form = family.cpf()(e.argument);
    if (family.cpf().has_bounds()) {
      const Interval b = family.cpf().bounds(e.argument);
      row.lower_bound = b.lower;
      row.upper_bound = b.upper;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::violated:
      return "violated";
    case CheckStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

unsigned SuiteReport::violations() const {
  unsigned v = 0;
  for (const auto& r : rows) v += r.status == CheckStatus::violated;
  return v;
}

std::string SuiteReport::csv() const {
  std::string out = "suite,criterion,check,argument,value,lower,upper,status\n";
  for (const auto& r : rows) {
    out += r.suite + "," + std::to_string(r.criterion) + "," +
           csv_field(r.check) + "," + format_double(r.argument) + "," +
           format_double(r.value) + "," + format_double(r.lower) + "," +
           format_double(r.upper) + "," + check_status_name(r.status) + "\n";
  }
  return out;
}

namespace {

// Suite plumbing: every check draws its seed from a running counter, so the
// order of checks fixes all randomness.
class SuiteBuilder {
 public:
  SuiteBuilder(std::string suite, const SuiteOptions& o)
      : suite_(std::move(suite)), opt_(o) {}

  std::uint64_t n(double base) const {
    return static_cast<std::uint64_t>(
        std::max(1000.0, std::round(base * opt_.scale)));
  }
  std::uint64_t seed() { return derive_seed(opt_.seed, counter_++); }

  void add(int criterion, std::string check, double argument, double value,
           double lower, double upper, CheckStatus status) {
    report_.rows.push_back({suite_, criterion, std::move(check), argument,
                            value, lower, upper, status});
  }

  /// value in [lower, upper].
  void range(int criterion, std::string check, double argument, double value,
             double lower, double upper) {
    add(criterion, std::move(check), argument, value, lower, upper,
        value >= lower && value <= upper ? CheckStatus::pass
                                         : CheckStatus::violated);
  }

  /// Estimate within 3 sigma of a reference.
  void mc(int criterion, std::string check, const EstimateReport& e,
          double reference) {
    const double s = 3 * comparison_sigma(e, reference);
    range(criterion, std::move(check), e.argument, e.estimate, reference - s,
          reference + s);
  }

  SuiteReport take() { return std::move(report_); }

 private:
  std::string suite_;
  SuiteOptions opt_;
  std::uint64_t counter_ = 0;
  SuiteReport report_;
};

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

struct NamedCpf {
  const char* spec;
  std::function<double(double)> f;
};

SuiteReport hamming_suite(const SuiteOptions& o) {
  SuiteBuilder b("hamming", o);
  constexpr std::size_t d = 64;
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<NamedCpf> families = {
      {"bit", [](double t) { return 1 - t; }},
      {"anti", [](double t) { return t; }},
      {"sbit(alpha=0.6)", [](double t) { return 1 - 0.6 * t; }},
      {"santi(alpha=0.5,beta=0.3)", [](double t) { return 0.15 + 0.25 * t; }},
      {"danti(alpha=0.7)", [](double t) { return 0.7 * t; }},
      {"const(p=0.3)", [](double) { return 0.3; }},
      {"product(k1=2,k2=1)", [](double t) { return (1 - t) * (1 - t) * t; }},
      {"concat(bit,anti)", [](double t) { return (1 - t) * t; }},
      {"pow(sbit(alpha=0.8),3)",
       [](double t) { return std::pow(1 - 0.8 * t, 3); }},
      {"mix(bit,anti,p=[0.3,0.7])",
       [](double t) { return 0.3 * (1 - t) + 0.7 * t; }},
      {"mix(pow(bit,2),concat(bit,anti),p=[0.4,0.6])",
       [](double t) { return 0.4 * (1 - t) * (1 - t) + 0.6 * (1 - t) * t; }},
  };
  for (const auto& nf : families) {
    const FamilyPtr f = parse_family(nf.spec, d);
    for (double t : grid) {
      b.mc(1, std::string("cpf:") + nf.spec,
           estimate_cpf(*f, t, b.n(1e5), b.seed()), nf.f(t));
    }
  }
  // Polynomials covering every factor case; the first four are the named
  // acceptance polynomials.
  const std::vector<std::pair<const char*, std::vector<double>>> polys = {
      {"t^2", {0, 0, 1}},
      {"t+1", {1, 1}},
      {"1-t", {1, -1}},
      {"(t+0.5)(t^2+4t+5)", {2.5, 7, 4.5, 1}},
      {"t+3", {3, 1}},
      {"2-t", {2, -1}},
      {"t^2-4t+5", {5, -4, 1}},
      {"t^2+t+1.69", {1.69, 1, 1}},
      {"t^2+0.6t+0.25", {0.25, 0.6, 1}},
      {"t^2+6t+10", {10, 6, 1}},
  };
  for (const auto& [label, coef] : polys) {
    const Polynomial p(coef);
    const PolynomialFamily pf = polynomial_family(p, d);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double t = i / 31.0;
      const double want = horner(coef, t);
      const double got = assembly_exact_cpf(pf.assembly, t) * pf.delta;
      worst = std::max(worst,
                       std::abs(got - want) / std::max(std::abs(want), 1e-12));
    }
    b.range(9, std::string("assembly_identity:") + label, pf.delta, worst, 0.0,
            1e-8);
    const int crit = std::string_view(label) == "t^2" ||
                             std::string_view(label) == "t+1" ||
                             std::string_view(label) == "1-t" ||
                             coef.size() == 4
                         ? 1
                         : 9;
    for (double t : grid) {
      b.mc(crit, std::string("poly_cpf:") + label,
           estimate_cpf(*pf.family, t, b.n(1e5), b.seed()),
           horner(coef, t) / pf.delta);
    }
  }
  return b.take();
}

SuiteReport sphere_suite(const SuiteOptions& o) {
  SuiteBuilder b("sphere", o);
  const FamilyPtr sim = simhash_family(16);
  for (double a : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    b.mc(1, "cpf:simhash", estimate_cpf(*sim, a, b.n(1e5), b.seed()),
         1 - std::acos(a) / std::numbers::pi);
  }

  const std::vector<std::vector<double>> polys = {
      {0.5, 0.5},
      {0.2, -0.3, 0.5},
      {0.1, 0.2, -0.3, 0.4},
      {0.25, 0, 0.25, -0.25, 0.25},
  };
  double norm_dev = 0.0;
  double dot_dev = 0.0;
  Rng rng(b.seed());
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 2 + i % 5;
    const Polynomial p(polys[i % polys.size()]);
    const Point x = random_point(Domain::sphere, d, rng);
    const Point y = random_point(Domain::sphere, d, rng);
    const auto ex = valiant_embed(p, x.coords, EmbedSide::data);
    const auto ey = valiant_embed(p, y.coords, EmbedSide::query);
    norm_dev = std::max({norm_dev, std::abs(norm(ex) - 1), std::abs(norm(ey) - 1)});
    double dxy = 0.0;
    for (std::size_t j = 0; j < d; ++j) dxy += x.coords[j] * y.coords[j];
    dot_dev = std::max(dot_dev,
                       std::abs(dot(ex, ey) - horner(polys[i % polys.size()], dxy)));
  }
  b.range(8, "valiant_unit_norm", 100, norm_dev, 0.0, 1e-9);
  b.range(8, "valiant_dot_identity", 100, dot_dev, 0.0, 1e-9);
  for (const std::vector<double>& coef :
       {std::vector<double>{0.2, 0.3, 0.5}, std::vector<double>{0.1, -0.4, 0.5}}) {
    const FamilyPtr f = polynomial_sphere_family(Polynomial(coef), 5);
    for (double a : {-0.6, -0.2, 0.2, 0.6, 0.9}) {
      b.mc(8, "cpf:" + f->name(), estimate_cpf(*f, a, b.n(1e5), b.seed()),
           1 - std::acos(std::clamp(horner(coef, a), -1.0, 1.0)) /
                   std::numbers::pi);
    }
  }

  // Cross-polytope: the plus variant increases with alpha, the minus
  // variant decreases.
  for (Sign s : {Sign::plus, Sign::minus}) {
    const FamilyPtr cp = crosspolytope_family(8, s);
    std::vector<EstimateReport> est;
    for (double a : {-0.5, 0.0, 0.5}) {
      est.push_back(estimate_cpf(*cp, a, b.n(2e4), b.seed()));
    }
    for (std::size_t i = 0; i + 1 < est.size(); ++i) {
      const double diff = s == Sign::plus
                              ? est[i + 1].estimate - est[i].estimate
                              : est[i].estimate - est[i + 1].estimate;
      const double sig = std::hypot(comparison_sigma(est[i], est[i].estimate),
                                    comparison_sigma(est[i + 1], est[i + 1].estimate));
      b.range(0, s == Sign::plus ? "cp_plus_increasing" : "cp_minus_decreasing",
              est[i + 1].argument, diff, -3 * sig, 1.0);
    }
  }
  return b.take();
}

double e2dsh_quadrature(double w, unsigned k, double delta) {
  if (delta == 0) return k == 0 ? 1.0 : 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double kk = k;
  auto f = [&](double z) {
    const double pdf = std::exp(-z * z / 2) / std::sqrt(2 * std::numbers::pi);
    return pdf * std::max(0.0, 1 - std::abs(delta * z / w - kk));
  };
  const double a = (kk - 1) * w / delta;
  const double m = kk * w / delta;
  const double c = (kk + 1) * w / delta;
  return gauss_kronrod<double, 61>::integrate(f, a, m, 12, 1e-13) +
         gauss_kronrod<double, 61>::integrate(f, m, c, 12, 1e-13);
}

SuiteReport euclidean_suite(const SuiteOptions& o) {
  SuiteBuilder b("euclidean", o);
  for (unsigned k : {0u, 3u}) {
    const FamilyPtr f = e2dsh_family({1.0, k, 8});
    for (double delta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      b.mc(1, "cpf:" + f->name(), estimate_cpf(*f, delta, b.n(1e5), b.seed()),
           e2dsh_cpf(1.0, k, delta));
    }
  }

  b.range(3, "e2dsh_k3_at_zero", 0.0, e2dsh_cpf(1.0, 3, 0.0), 0.0, 0.0);
  int maxima = 0;
  double argmax = 0.0;
  constexpr int kSteps = 4800;
  std::vector<double> v(kSteps + 1);
  for (int i = 0; i <= kSteps; ++i) v[i] = e2dsh_cpf(1.0, 3, 12.0 * i / kSteps);
  for (int i = 1; i < kSteps; ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
      ++maxima;
      argmax = 12.0 * i / kSteps;
    }
  }
  b.range(3, "e2dsh_k3_interior_maxima", argmax, maxima, 1, 1);
  double quad_dev = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double delta = 12.0 * i / 64;
    quad_dev = std::max(quad_dev, std::abs(e2dsh_cpf(1.0, 3, delta) -
                                           e2dsh_quadrature(1.0, 3, delta)));
  }
  b.range(3, "e2dsh_k3_vs_quadrature", 64, quad_dev, 0.0, 1e-10);

  constexpr double c = 2.0;
  double prev = std::numeric_limits<double>::infinity();
  for (unsigned k : {4u, 8u, 16u, 32u}) {
    const double w = choose_w_k(c, k);
    const double v4 = rho_minus(w, k, 1.0, c) * c * c;
    b.range(4, "rho_minus_c2", k, v4, 1.0, std::min(prev, k == 32 ? 1.35 : prev));
    prev = v4;
  }

  for (double cc : {1.5, 2.0}) {
    for (unsigned k : {3u, 8u}) {
      const double w = choose_w_k(cc, k);
      b.range(0, "e2dsh_upper_at_1/c", k, e2dsh_cpf(w, k, 1 / cc), 0.0,
              e2dsh_upper_bound(w, k, cc));
      b.range(0, "e2dsh_lower_at_1", k, e2dsh_cpf(w, k, 1.0),
              e2dsh_lower_bound(w, k), 1.0);
    }
  }
  return b.take();
}

SuiteReport bounds_suite(const SuiteOptions& o) {
  SuiteBuilder b("bounds", o);
  constexpr std::size_t d = 4;
  for (double t : {2.0, 3.0}) {
    char name[32];
    std::snprintf(name, sizeof name, "t=%g", t);
    const FamilyPtr plus = filter_family(d, {t, 0, Sign::plus});
    const FamilyPtr minus = filter_family(d, {t, 0, Sign::minus});
    const std::uint64_t m = default_filter_m(t);
    for (double a : {-0.5, 0.0, 0.25, 0.5}) {
      const EstimateReport ep = estimate_cpf(*plus, a, b.n(1e6), b.seed());
      const double exact = filter_cpf(t, m, Sign::plus, a);
      const double s = 3 * comparison_sigma(ep, exact);
      const Interval bd = filter_cpf_bounds(t, a);
      b.range(2, std::string("filter_sandwich:") + name, a, ep.estimate,
              bd.lower - s, bd.upper + s);
      b.mc(0, std::string("filter_exact:") + name, ep, exact);
      const EstimateReport em = estimate_cpf(*minus, -a, b.n(1e6), b.seed());
      const double sm = comparison_sigma(em, filter_cpf(t, m, Sign::minus, -a));
      const double comb = 3 * std::hypot(s / 3, sm);
      b.range(2, std::string("filter_symmetry:") + name, a,
              ep.estimate - em.estimate, -comb, comb);
    }
  }

  for (double t : {1.0, 2.0}) {
    const Interval bd = normal_tail_bounds(t);
    b.range(7, "normal_tail_exact", t, normal_sf(t), bd.lower, bd.upper);
    const EstimateReport e = estimate_normal_tail(t, b.n(1e6), b.seed());
    const double s = 3 * comparison_sigma(e, normal_sf(t));
    b.range(7, "normal_tail_mc", t, e.estimate, bd.lower - s, bd.upper + s);
    for (double a : {-0.5, 0.0, 0.5}) {
      char name[48];
      std::snprintf(name, sizeof name, "bivariate_tail_exact:alpha=%g", a);
      const Interval bb = bivariate_tail_bounds(t, a);
      const double exact = bivariate_upper_orthant(t, a);
      b.range(7, name, t, exact, bb.lower, bb.upper);
      const EstimateReport eb = estimate_bivariate_tail(t, a, b.n(1e6), b.seed());
      const double sb = 3 * comparison_sigma(eb, exact);
      std::snprintf(name, sizeof name, "bivariate_tail_mc:alpha=%g", a);
      b.range(7, name, t, eb.estimate, bb.lower - sb, bb.upper + sb);
    }
  }
  return b.take();
}

SuiteReport ssse_suite(const SuiteOptions& o) {
  SuiteBuilder b("ssse", o);
  constexpr std::size_t d = 64;
  const std::vector<std::string> families = {
      "bit",
      "anti",
      "sbit(alpha=0.5)",
      "santi(alpha=0.5,beta=0.5)",
      "danti(alpha=0.5)",
      "const(p=0.5)",
      "product(k1=2,k2=1)",
      "product(k1=4,k2=0)",
      "poly(coef=[0,0,1])",
      "poly(coef=[1,1])",
      "poly(coef=[1,-1])",
      "poly(coef=[2.5,7,4.5,1])",
  };
  auto status = [](Verdict v) {
    switch (v) {
      case Verdict::consistent:
        return CheckStatus::pass;
      case Verdict::violated:
        return CheckStatus::violated;
      case Verdict::inconclusive:
        break;
    }
    return CheckStatus::inconclusive;
  };
  for (const auto& spec : families) {
    const FamilyPtr f = parse_family(spec, d);
    for (double a : {0.25, 0.5, 0.75}) {
      const auto [rev, fwd] = check_ssse(*f, a, b.n(1e6), b.seed());
      b.add(5, "reverse:" + spec, a, rev.at_alpha.estimate,
            std::pow(rev.at_zero.estimate, rev.exponent), 1.0,
            status(rev.verdict));
      b.add(5, "forward:" + spec, a, fwd.at_alpha.estimate, 0.0,
            std::pow(fwd.at_zero.estimate, fwd.exponent), status(fwd.verdict));
    }
  }
  return b.take();
}

SuiteReport jensen_suite(const SuiteOptions& o) {
  SuiteBuilder b("jensen", o);
  // c is drawn from [0.1, 5]. The reverse inequality for c <= 1 needs
  // x^(2 - 1/c) concave, which fails below c = 1/2; the second summary row
  // restricts to c >= 1/2.
  const std::uint64_t base = b.seed();
  std::uint64_t ok = 0;
  std::uint64_t valid = 0;
  std::uint64_t valid_ok = 0;
  constexpr int kInstances = 1000;
  for (int i = 0; i < kInstances; ++i) {
    Rng rng(derive_seed(base, i));
    const std::size_t m = 2 + rng.below(9);
    std::vector<double> p(m);
    std::vector<double> q(m);
    double sp = 0.0;
    double sq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      p[j] = -std::log(1 - rng.uniform());
      q[j] = -std::log(1 - rng.uniform());
      sp += p[j];
      sq += q[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      p[j] /= sp;
      q[j] /= sq;
    }
    const double c = 0.1 + 4.9 * rng.uniform();
    const bool holds = check_jensen_chain(p, q, c);
    ok += holds;
    if (c >= 0.5) {
      ++valid;
      valid_ok += holds;
    }
    if (!holds) {
      const JensenValues v = jensen_values(p, q, c);
      b.add(6, "jensen_instance", c, v.lhs, v.rhs, v.rhs,
            CheckStatus::violated);
    }
  }
  b.range(6, "jensen_satisfied", kInstances, static_cast<double>(ok),
          kInstances, kInstances);
  b.range(0, "jensen_satisfied_c_ge_half", static_cast<double>(valid),
          static_cast<double>(valid_ok), static_cast<double>(valid),
          static_cast<double>(valid));
  return b.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "hamming", "sphere", "euclidean", "bounds", "ssse", "jensen"};
  return names;
}

SuiteReport run_suite(std::string_view name, const SuiteOptions& options) {
  if (!(options.scale > 0)) throw InvalidArgument("scale must be positive");
  if (name == "hamming") return hamming_suite(options);
  if (name == "sphere") return sphere_suite(options);
  if (name == "euclidean") return euclidean_suite(options);
  if (name == "bounds") return bounds_suite(options);
  if (name == "ssse") return ssse_suite(options);
  if (name == "jensen") return jensen_suite(options);
  throw InvalidArgument("unknown suite '" + std::string(name) + "'");
}

double AnnulusDemoResult::recall() const {
  if (queries.empty()) return 0.0;
  std::size_t f = 0;
  for (const auto& q : queries) f += q.found;
  return static_cast<double>(f) / static_cast<double>(queries.size());
}

bool AnnulusDemoResult::all_within_cutoff() const {
  return std::all_of(queries.begin(), queries.end(),
                     [](const AnnulusDemoQuery& q) { return q.within_cutoff; });
}

std::string AnnulusDemoResult::summary_csv() const {
  std::uint64_t total = 0;
  std::uint64_t most = 0;
  std::size_t found = 0;
  for (const auto& q : queries) {
    total += q.candidates;
    most = std::max(most, q.candidates);
    found += q.found;
  }
  const double mean =
      queries.empty() ? 0.0 : static_cast<double>(total) / queries.size();
  return "points,queries,found,recall,power,tables,cutoff,mean_candidates,"
         "max_candidates,cutoff_ok\n" +
         std::to_string(points) + "," + std::to_string(queries.size()) + "," +
         std::to_string(found) + "," + format_double(recall()) + "," +
         std::to_string(power) + "," + std::to_string(tables) + "," +
         std::to_string(8 * tables) + "," + format_double(mean) + "," +
         std::to_string(most) + "," + (all_within_cutoff() ? "1" : "0") + "\n";
}

std::string AnnulusDemoResult::detail_csv() const {
  std::string out =
      "query,base,found,distance,candidates,final_bucket,cutoff_ok\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    out += std::to_string(i) + "," + std::to_string(q.base) + "," +
           (q.found ? "1" : "0") + "," +
           (q.found ? format_double(q.distance) : std::string()) + "," +
           std::to_string(q.candidates) + "," + std::to_string(q.final_bucket) +
           "," + (q.within_cutoff ? "1" : "0") + "\n";
  }
  return out;
}

AnnulusDemoResult run_annulus_demo(const Dataset& data,
                                   const AnnulusDemoConfig& config) {
  AnnulusDemoResult res;
  res.points = data.points.size();
  if (data.points.empty()) return res;
  FamilyPtr family = parse_family(config.family, data.dim);
  if (family->domain() != data.domain) {
    throw DomainMismatch("family domain does not match the dataset");
  }
  const DshIndex index =
      build_annulus_index(data.points, family, config.params,
                          derive_seed(config.seed, 0));
  res.power = index.power();
  res.tables = index.tables();
  const std::uint64_t cutoff = index.candidate_cutoff();
  for (std::uint64_t i = 0; i < config.queries; ++i) {
    Rng rng(derive_seed(derive_seed(config.seed, 1), i));
    AnnulusDemoQuery q;
    q.base = static_cast<std::size_t>(rng.below(data.points.size()));
    const Point query =
        point_at_distance(data.points[q.base], config.params.r, rng);
    const AnnulusResult a = annulus_query(index, query);
    q.found = a.id.has_value();
    if (q.found) q.distance = index_distance(query, data.points[*a.id]);
    q.candidates = a.candidates;
    q.final_bucket = a.final_bucket_size;
    q.within_cutoff = a.candidates <= cutoff + a.final_bucket_size;
    res.queries.push_back(q);
  }
  return res;
}

std::string RangeDemoResult::csv() const {
  std::string out = "slot,queries,reported,frequency,power,tables\n";
  for (std::size_t s = 0; s < slot_reported.size(); ++s) {
    out += std::to_string(s) + "," + std::to_string(queries) + "," +
           std::to_string(slot_reported[s]) + "," +
           format_double(queries ? static_cast<double>(slot_reported[s]) /
                                       static_cast<double>(queries)
                                 : 0.0) +
           "," + std::to_string(power) + "," + std::to_string(tables) + "\n";
  }
  out += "false_reports," + std::to_string(queries) + "," +
         std::to_string(false_reports) + ",,,\n";
  return out;
}

RangeDemoResult run_range_demo(const RangeDemoConfig& config) {
  const std::size_t d = config.d;
  for (std::size_t dist : config.planted) {
    if (static_cast<double>(dist) > config.r * d + 1e-9) {
      throw InvalidArgument("planted distance exceeds r d");
    }
  }
  FamilyPtr family = parse_family(config.family, d);
  if (family->domain() != Domain::hamming) {
    throw DomainMismatch("range demo uses a Hamming family");
  }
  std::vector<Point> points =
      random_dataset(Domain::hamming, d, config.background,
                     derive_seed(config.seed, 0))
          .points;
  std::vector<Point> queries;
  std::vector<std::size_t> planted_ids;
  for (std::uint64_t i = 0; i < config.queries; ++i) {
    Rng rng(derive_seed(derive_seed(config.seed, 1), i));
    queries.push_back(random_point(Domain::hamming, d, rng));
    for (std::size_t dist : config.planted) {
      planted_ids.push_back(points.size());
      points.push_back(point_at_distance(
          queries.back(), static_cast<double>(dist) / d, rng));
    }
  }
  const DshIndex index = build_range_index(std::move(points), family, config.r,
                                           config.r_plus,
                                           derive_seed(config.seed, 2));
  RangeDemoResult res;
  res.power = index.power();
  res.tables = index.tables();
  res.queries = config.queries;
  res.slot_reported.assign(config.planted.size(), 0);
  const std::size_t slots = config.planted.size();
  for (std::uint64_t i = 0; i < config.queries; ++i) {
    const RangeResult r = range_report(index, queries[i]);
    res.reported += r.ids.size();
    res.retrieved += r.retrieved;
    for (std::size_t id : r.ids) {
      if (index_distance(queries[i], index.points()[id]) >
          config.r_plus + 1e-12) {
        ++res.false_reports;
      }
      for (std::size_t s = 0; s < slots; ++s) {
        if (planted_ids[i * slots + s] == id) ++res.slot_reported[s];
      }
    }
  }
  return res;
}

std::string privacy_demo_csv(const PrivacyDemoResult& r,
                             const PrivacyDemoConfig& c) {
  std::string out =
      "class,distance,yes,no,yes_rate,target,mean_leakage_bits,k,t,C,n,"
      "token_bits\n";
  auto row = [&](const char* cls, std::size_t dist, std::uint64_t yes,
                 std::uint64_t no, double target, double leak) {
    const double total = static_cast<double>(yes + no);
    out += std::string(cls) + "," + std::to_string(dist) + "," +
           std::to_string(yes) + "," + std::to_string(no) + "," +
           format_double(total > 0 ? yes / total : 0.0) + "," +
           format_double(target) + "," + format_double(leak) + "," +
           std::to_string(r.step.k) + "," + std::to_string(r.params.t) + "," +
           format_double(r.params.C) + "," + std::to_string(r.params.n) + "," +
           std::to_string(r.params.token_bits) + "\n";
  };
  row("close", r.close_distance, r.close_yes, r.close_no, 1 - c.epsilon,
      r.close_leakage_mean);
  row("far", r.far_distance, r.far_yes, r.far_no, c.delta, r.far_leakage_mean);
  return out;
}

}  // namespace dsh
