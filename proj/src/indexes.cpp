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

#include "dsh/indexes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>

#include "dsh/combinators.hpp"
#include "dsh/cpf_lab.hpp"

namespace dsh {

struct DshIndex::Table {
  PairPtr pair;
  std::vector<HashToken> keys;         // sorted, unique
  std::vector<std::uint32_t> offsets;  // keys.size() + 1 entries
  std::vector<std::uint32_t> ids;      // insertion order within a bucket

  std::span<const std::uint32_t> bucket(HashToken key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return {};
    const auto k = static_cast<std::size_t>(it - keys.begin());
    return {ids.data() + offsets[k], offsets[k + 1] - offsets[k]};
  }
};

DshIndex::DshIndex() = default;
DshIndex::DshIndex(DshIndex&&) noexcept = default;
DshIndex& DshIndex::operator=(DshIndex&&) noexcept = default;
DshIndex::~DshIndex() = default;

struct IndexAccess {
  static DshIndex build(std::vector<Point> points, FamilyPtr base,
                        unsigned power_k, std::uint64_t tables,
                        const AnnulusQueryParams& params, double p_good,
                        double p_bad, std::uint64_t seed) {
    DshIndex idx;
    idx.domain_ = base->domain();
    idx.dim_ = base->dimension();
    for (const auto& p : points) {
      if (p.domain != idx.domain_ || p.dim() != idx.dim_) {
        throw DomainMismatch("dataset point does not match the family");
      }
    }
    if (points.size() > 0xffffffffu) {
      throw BudgetExceeded("index supports at most 2^32 - 1 points");
    }
    idx.points_ = std::move(points);
    idx.family_ = power(base, power_k);
    idx.power_ = power_k;
    idx.p_good_ = p_good;
    idx.p_bad_ = p_bad;
    idx.params_ = params;
    idx.tables_.resize(tables);
    const DshFamily& fam = *idx.family_;
    const auto& pts = idx.points_;
    parallel_blocks(tables, [&](std::uint64_t b, std::uint64_t e, unsigned) {
      std::vector<std::pair<HashToken, std::uint32_t>> entries(pts.size());
      for (std::uint64_t j = b; j < e; ++j) {
        auto t = std::make_unique<DshIndex::Table>();
        Rng rng(derive_seed(seed, j));
        t->pair = fam.sample(rng);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          entries[i] = {t->pair->h(pts[i]), static_cast<std::uint32_t>(i)};
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& c) {
                           return a.first < c.first;
                         });
        t->ids.resize(entries.size());
        t->offsets.push_back(0);
        for (std::size_t i = 0; i < entries.size(); ++i) {
          if (i > 0 && entries[i].first != entries[i - 1].first) {
            t->offsets.push_back(static_cast<std::uint32_t>(i));
          }
          if (i == 0 || entries[i].first != entries[i - 1].first) {
            t->keys.push_back(entries[i].first);
          }
          t->ids[i] = entries[i].second;
        }
        t->offsets.push_back(static_cast<std::uint32_t>(entries.size()));
        if (entries.empty()) t->offsets.assign(1, 0);
        idx.tables_[j] = std::move(t);
      }
    });
    return idx;
  }

  static const std::vector<std::unique_ptr<DshIndex::Table>>& tables(
      const DshIndex& idx) {
    return idx.tables_;
  }
};

namespace {

void check_cpf(const DshFamily& f) {
  if (!f.cpf().has_value()) {
    throw InvalidArgument("index construction needs an analytic CPF");
  }
}

double log_cpf_at(const DshFamily& f, double distance) {
  return f.cpf().log(cpf_argument(f.domain(), distance));
}

unsigned choose_power(double log_worst, std::size_t n) {
  if (n <= 1) return 1;
  const double target = -std::log(static_cast<double>(n));
  if (log_worst <= target) return 1;
  if (!(log_worst < 0)) {
    throw ConstructionError(
        "CPF equals 1 outside the target range; powering cannot help");
  }
  double p = std::ceil(target / log_worst - 1e-12);
  if (p * log_worst > target + 1e-12) p += 1;
  if (p > 1e6) throw BudgetExceeded("required power exceeds 10^6");
  return static_cast<unsigned>(std::max(1.0, p));
}

std::uint64_t table_count(double log_good) {
  // L = ceil(e / p) with p = exp(log_good).
  const double log_l = 1.0 - log_good;
  if (!(log_l <= std::log(static_cast<double>(kMaxTables)))) {
    throw BudgetExceeded("index would need more than 2^16 tables");
  }
  return static_cast<std::uint64_t>(std::ceil(std::exp(log_l) - 1e-9));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double index_distance(const Point& x, const Point& y) {
  const double a = argument_between(x, y);
  if (x.domain == Domain::sphere) return std::sqrt(std::max(0.0, 2 - 2 * a));
  return a;
}

double cpf_argument(Domain domain, double distance) {
  if (domain == Domain::sphere) {
    return std::clamp(1 - distance * distance / 2, -1.0, 1.0);
  }
  return distance;
}

Point point_at_distance(const Point& p, double distance, Rng& rng) {
  Point x = p;
  Point y;
  switch (p.domain) {
    case Domain::hamming: {
      const std::size_t d = p.bits.size();
      const auto dist = static_cast<std::size_t>(
          std::llround(std::clamp(distance, 0.0, 1.0) * static_cast<double>(d)));
      std::vector<std::uint32_t> perm(d);
      for (std::size_t i = 0; i < d; ++i) perm[i] = static_cast<std::uint32_t>(i);
      y = p;
      for (std::size_t i = 0; i < dist; ++i) {
        const std::size_t j = i + rng.below(d - i);
        std::swap(perm[i], perm[j]);
        y.bits[perm[i]] ^= 1u;
      }
      return y;
    }
    case Domain::sphere: {
      // sphere_pair draws its own x; rotate the construction onto p by
      // building y = alpha p + sqrt(1 - alpha^2) z directly.
      const double alpha = cpf_argument(Domain::sphere, distance);
      const std::size_t d = p.coords.size();
      std::vector<double> z(d);
      double n = 0.0;
      do {
        for (auto& v : z) v = rng.normal();
        for (int pass = 0; pass < 2; ++pass) {
          const double pr = dot(z, p.coords);
          for (std::size_t i = 0; i < d; ++i) z[i] -= pr * p.coords[i];
        }
        n = norm(z);
      } while (!(n > 1e-6));
      y.domain = Domain::sphere;
      y.coords.resize(d);
      const double s = std::sqrt(1 - alpha * alpha);
      for (std::size_t i = 0; i < d; ++i) {
        y.coords[i] = alpha * p.coords[i] + s * z[i] / n;
      }
      return y;
    }
    case Domain::euclidean: {
      const std::size_t d = p.coords.size();
      std::vector<double> u(d);
      for (auto& v : u) v = rng.normal();
      const double n = norm(u);
      y = p;
      for (std::size_t i = 0; i < d; ++i) y.coords[i] += distance * u[i] / n;
      return y;
    }
  }
  return y;
}

Point random_point(Domain domain, std::size_t d, Rng& rng) {
  Point p;
  p.domain = domain;
  switch (domain) {
    case Domain::hamming: {
      p.bits.resize(d);
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (i % 64 == 0) word = rng();
        p.bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
      }
      break;
    }
    case Domain::sphere: {
      p.coords.resize(d);
      double n = 0.0;
      do {
        for (auto& v : p.coords) v = rng.normal();
        n = norm(p.coords);
      } while (!(n > 1e-300));
      for (auto& v : p.coords) v /= n;
      break;
    }
    case Domain::euclidean:
      p.coords.resize(d);
      for (auto& v : p.coords) v = rng.normal();
      break;
  }
  return p;
}

DshIndex build_annulus_index(std::vector<Point> points, FamilyPtr family,
                             const AnnulusQueryParams& params,
                             std::uint64_t seed) {
  if (!family) throw InvalidArgument("null family");
  check_cpf(*family);
  if (!(params.r_minus < params.r_plus) || params.r < params.r_minus ||
      params.r > params.r_plus) {
    throw InvalidArgument("need r_minus <= r <= r_plus and r_minus < r_plus");
  }
  const double log_good = log_cpf_at(*family, params.r);
  const double log_bad = std::max(log_cpf_at(*family, params.r_minus),
                                  log_cpf_at(*family, params.r_plus));
  if (!(log_good > log_bad) || !std::isfinite(log_good)) {
    throw ConstructionError(
        "f(r) must exceed the CPF at both annulus boundaries");
  }
  const unsigned k = choose_power(log_bad, points.size());
  const double lg = k * log_good;
  if (lg < -700) throw ConstructionError("powered f(r) underflows");
  const std::uint64_t l = table_count(lg);
  return IndexAccess::build(std::move(points), std::move(family), k, l, params,
                            std::exp(lg), std::exp(k * log_bad), seed);
}

AnnulusResult annulus_query(const DshIndex& index, const Point& q) {
  AnnulusResult res;
  if (index.size() == 0) return res;
  if (q.domain != index.domain() || q.dim() != index.points().front().dim()) {
    throw DomainMismatch("query does not match the index domain");
  }
  const auto& params = index.params();
  const std::uint64_t cutoff = index.candidate_cutoff();
  for (const auto& t : IndexAccess::tables(index)) {
    ++res.tables_probed;
    const auto bucket = t->bucket(t->pair->g(q));
    if (bucket.empty()) continue;
    res.final_bucket_size = bucket.size();
    for (std::uint32_t id : bucket) {
      ++res.candidates;
      const double dist = index_distance(q, index.points()[id]);
      if (dist >= params.r_minus - 1e-12 && dist <= params.r_plus + 1e-12) {
        res.id = id;
        return res;
      }
    }
    if (res.candidates > cutoff) break;
  }
  return res;
}

DshIndex build_range_index(std::vector<Point> points, FamilyPtr family,
                           double r, double r_plus, std::uint64_t seed) {
  if (!family) throw InvalidArgument("null family");
  check_cpf(*family);
  if (!(r >= 0 && r < r_plus)) throw InvalidArgument("need 0 <= r < r_plus");
  const Domain dom = family->domain();
  const std::size_t d = family->dimension();
  double log_min = 0.0;
  double log_worst = -std::numeric_limits<double>::infinity();
  if (dom == Domain::hamming) {
    bool any_inside = false;
    for (std::size_t k = 0; k <= d; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(d);
      const double lf = family->cpf().log(t);
      if (t <= r + 1e-12) {
        log_min = any_inside ? std::min(log_min, lf) : lf;
        any_inside = true;
      }
      if (t >= r_plus - 1e-12) log_worst = std::max(log_worst, lf);
    }
  } else {
    const double far = dom == Domain::sphere ? 2.0 : 4.0 * r_plus;
    for (int i = 0; i <= 64; ++i) {
      const double in = r * i / 64.0;
      const double lin = log_cpf_at(*family, in);
      log_min = i == 0 ? lin : std::min(log_min, lin);
      const double out = r_plus + (far - r_plus) * i / 64.0;
      log_worst = std::max(log_worst, log_cpf_at(*family, out));
    }
  }
  if (!(log_min > log_worst) || !std::isfinite(log_min)) {
    throw ConstructionError("f_min on [0, r] must exceed f beyond r_plus");
  }
  const unsigned k = choose_power(log_worst, points.size());
  const double lg = k * log_min;
  if (lg < -700) throw ConstructionError("powered f_min underflows");
  const std::uint64_t l = table_count(lg);
  return IndexAccess::build(std::move(points), std::move(family), k, l,
                            {0.0, r, r_plus}, std::exp(lg),
                            std::exp(k * log_worst), seed);
}

RangeResult range_report(const DshIndex& index, const Point& q) {
  RangeResult res;
  if (index.size() == 0) return res;
  if (q.domain != index.domain() || q.dim() != index.points().front().dim()) {
    throw DomainMismatch("query does not match the index domain");
  }
  const double r_plus = index.params().r_plus;
  std::vector<std::uint8_t> seen(index.size(), 0);
  for (const auto& t : IndexAccess::tables(index)) {
    for (std::uint32_t id : t->bucket(t->pair->g(q))) {
      ++res.retrieved;
      if (seen[id]) continue;
      seen[id] = 1;
      if (index_distance(q, index.points()[id]) <= r_plus + 1e-12) {
        res.ids.push_back(id);
      }
    }
  }
  return res;
}

Dataset parse_dataset(std::string_view text) {
  Dataset data;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty() || fields.front().front() == '#') continue;
    auto fail = [&](const std::string& why) {
      return ParseError("line " + std::to_string(line_no) + ": " + why);
    };
    if (!have_header) {
      if (fields.size() != 2) throw fail("expected '<domain> <dimension>'");
      if (fields[0] == "hamming") {
        data.domain = Domain::hamming;
      } else if (fields[0] == "sphere") {
        data.domain = Domain::sphere;
      } else if (fields[0] == "euclidean") {
        data.domain = Domain::euclidean;
      } else {
        throw fail("unknown domain '" + std::string(fields[0]) + "'");
      }
      auto [p, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(),
                                     data.dim);
      if (ec != std::errc() || p != fields[1].data() + fields[1].size() ||
          data.dim == 0) {
        throw fail("bad dimension");
      }
      have_header = true;
      continue;
    }
    Point pt;
    pt.domain = data.domain;
    if (data.domain == Domain::hamming) {
      std::string bits;
      for (auto f : fields) bits.append(f);
      if (bits.size() != data.dim) throw fail("wrong number of bits");
      pt.bits.resize(data.dim);
      for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1') throw fail("bits must be 0/1");
        pt.bits[k] = static_cast<std::uint8_t>(bits[k] - '0');
      }
    } else {
      if (fields.size() != data.dim) throw fail("wrong number of coordinates");
      pt.coords.resize(data.dim);
      for (std::size_t k = 0; k < fields.size(); ++k) {
        const std::string f(fields[k]);
        char* end = nullptr;
        pt.coords[k] = std::strtod(f.c_str(), &end);
        if (end != f.c_str() + f.size() || !std::isfinite(pt.coords[k])) {
          throw fail("bad number '" + f + "'");
        }
      }
      if (data.domain == Domain::sphere) {
        const double n = norm(pt.coords);
        if (std::abs(n - 1) > 1e-6) throw fail("sphere point is not unit");
        for (auto& v : pt.coords) v /= n;
      }
    }
    data.points.push_back(std::move(pt));
  }
  if (!have_header) throw ParseError("missing '<domain> <dimension>' header");
  return data;
}

std::string format_dataset(const Dataset& data) {
  std::string out = std::string(domain_name(data.domain)) + " " +
                    std::to_string(data.dim) + "\n";
  for (const auto& p : data.points) {
    if (data.domain == Domain::hamming) {
      for (auto b : p.bits) out.push_back(static_cast<char>('0' + b));
    } else {
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) out.push_back(' ');
        out += fmt(p.coords[i]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

Dataset random_dataset(Domain domain, std::size_t d, std::size_t n,
                       std::uint64_t seed) {
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
  Dataset data;
  data.domain = domain;
  data.dim = d;
  data.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    data.points.push_back(random_point(domain, d, rng));
  }
  return data;
}

}  // namespace dsh
