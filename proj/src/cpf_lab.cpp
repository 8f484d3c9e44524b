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

#include "dsh/cpf_lab.hpp"

#include <algorithm>
#include <cmath>

#include "dsh/hamming.hpp"

namespace dsh {

namespace {

void gaussian_unit(std::size_t d, Rng& rng, std::vector<double>& v) {
  v.resize(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& c : v) {
      c = rng.normal();
      n2 += c * c;
    }
  } while (!(n2 > 1e-300));
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& c : v) c *= inv;
}

EstimateReport make_report(double argument, std::uint64_t hits,
                           std::uint64_t n) {
  EstimateReport r;
  r.argument = argument;
  r.n = n;
  r.hits = hits;
  r.estimate = n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
  r.std_error =
      n ? std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(n))
        : 0.0;
  return r;
}

// Sigma used by the lower-bound checkers: plug-in, floored at 1/n so that an
// all-miss or all-hit estimate still carries an error bar.
double verdict_sigma(const EstimateReport& r) {
  return std::max(r.std_error, 1.0 / static_cast<double>(std::max<std::uint64_t>(r.n, 1)));
}

Verdict reverse_verdict(const EstimateReport& f0, const EstimateReport& fa,
                        double e) {
  const double s0 = verdict_sigma(f0);
  const double sa = verdict_sigma(fa);
  if (fa.estimate + 3 * sa < std::pow(std::max(0.0, f0.estimate - 3 * s0), e)) {
    return Verdict::violated;
  }
  if (fa.estimate - 3 * sa >= std::pow(std::min(1.0, f0.estimate + 3 * s0), e)) {
    return Verdict::consistent;
  }
  return Verdict::inconclusive;
}

Verdict forward_verdict(const EstimateReport& f0, const EstimateReport& fa,
                        double e) {
  const double s0 = verdict_sigma(f0);
  const double sa = verdict_sigma(fa);
  if (fa.estimate - 3 * sa > std::pow(std::min(1.0, f0.estimate + 3 * s0), e)) {
    return Verdict::violated;
  }
  if (fa.estimate + 3 * sa <= std::pow(std::max(0.0, f0.estimate - 3 * s0), e)) {
    return Verdict::consistent;
  }
  return Verdict::inconclusive;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0 && alpha < 1)) {
    throw InvalidArgument("checker needs 0 <= alpha < 1");
  }
}

void check_hamming(const DshFamily& f) {
  if (f.domain() != Domain::hamming) {
    throw DomainMismatch("checker needs a Hamming family");
  }
}

}  // namespace

RhoReport make_rho_report(double numerator_prob, double denominator_prob,
                          RhoKind kind) {
  auto inside = [](double p) { return p > 0 && p < 1; };
  if (!inside(numerator_prob) || !inside(denominator_prob)) {
    throw InvalidArgument("rho needs probabilities strictly inside (0, 1)");
  }
  return {std::log(numerator_prob) / std::log(denominator_prob),
          numerator_prob, denominator_prob, kind};
}

void correlated_bits(std::size_t d, double alpha, Rng& rng, Point& x,
                     Point& y) {
  if (!(alpha >= -1 && alpha <= 1)) {
    throw InvalidArgument("correlation must lie in [-1, 1]");
  }
  x.domain = y.domain = Domain::hamming;
  x.coords.clear();
  y.coords.clear();
  x.bits.resize(d);
  y.bits.resize(d);
  const double flip = (1 - alpha) / 2;
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (i % 64 == 0) word = rng();
    x.bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  for (std::size_t i = 0; i < d; ++i) {
    const bool f = flip >= 1.0 || (flip > 0.0 && rng.uniform() < flip);
    y.bits[i] = static_cast<std::uint8_t>(x.bits[i] ^ (f ? 1u : 0u));
  }
}

std::pair<Point, Point> correlated_bits(std::size_t d, double alpha,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::pair<Point, Point> out;
  correlated_bits(d, alpha, rng, out.first, out.second);
  return out;
}

void hamming_pair(std::size_t d, std::size_t dist, Rng& rng, Point& x,
                  Point& y) {
  if (dist > d) throw InvalidArgument("distance exceeds dimension");
  x.domain = y.domain = Domain::hamming;
  x.coords.clear();
  y.coords.clear();
  x.bits.resize(d);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (i % 64 == 0) word = rng();
    x.bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  y.bits = x.bits;
  // Partial Fisher-Yates over positions, kept in a thread-local scratch.
  thread_local std::vector<std::uint32_t> perm;
  perm.resize(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < dist; ++i) {
    const std::size_t j = i + rng.below(d - i);
    std::swap(perm[i], perm[j]);
    y.bits[perm[i]] ^= 1u;
  }
}

void sphere_pair(std::size_t d, double alpha, Rng& rng, Point& x, Point& y) {
  if (!(alpha >= -1 && alpha <= 1)) {
    throw InvalidArgument("inner product must lie in [-1, 1]");
  }
  if (d < 2 && std::abs(alpha) < 1) {
    throw InvalidArgument("sphere pairs with |alpha| < 1 need d >= 2");
  }
  x.domain = y.domain = Domain::sphere;
  x.bits.clear();
  y.bits.clear();
  gaussian_unit(d, rng, x.coords);
  if (alpha == 1 || alpha == -1) {
    y.coords = x.coords;
    if (alpha == -1) {
      for (auto& v : y.coords) v = -v;
    }
    return;
  }
  thread_local std::vector<double> z;
  for (;;) {
    gaussian_unit(d, rng, z);
    // Two Gram-Schmidt passes against x.
    for (int pass = 0; pass < 2; ++pass) {
      const double p = dot(z, x.coords);
      for (std::size_t i = 0; i < d; ++i) z[i] -= p * x.coords[i];
    }
    const double n = norm(z);
    if (n > 1e-6) {
      for (auto& v : z) v /= n;
      break;
    }
  }
  const double s = std::sqrt(1 - alpha * alpha);
  y.coords.resize(d);
  for (std::size_t i = 0; i < d; ++i) y.coords[i] = alpha * x.coords[i] + s * z[i];
}

std::pair<Point, Point> sphere_pair(std::size_t d, double alpha,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::pair<Point, Point> out;
  sphere_pair(d, alpha, rng, out.first, out.second);
  return out;
}

void euclid_pair(std::size_t d, double delta, Rng& rng, Point& x, Point& y) {
  if (!(delta >= 0) || !std::isfinite(delta)) {
    throw InvalidArgument("distance must be nonnegative");
  }
  x.domain = y.domain = Domain::euclidean;
  x.bits.clear();
  y.bits.clear();
  x.coords.resize(d);
  for (auto& v : x.coords) v = rng.normal();
  thread_local std::vector<double> u;
  gaussian_unit(d, rng, u);
  y.coords.resize(d);
  for (std::size_t i = 0; i < d; ++i) y.coords[i] = x.coords[i] + delta * u[i];
}

std::pair<Point, Point> euclid_pair(std::size_t d, double delta,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::pair<Point, Point> out;
  euclid_pair(d, delta, rng, out.first, out.second);
  return out;
}

PairSampler exact_pair_sampler(Domain domain, std::size_t d, double argument) {
  switch (domain) {
    case Domain::hamming: {
      const double t = snap_relative_distance(argument, d);
      const auto dist =
          static_cast<std::size_t>(std::llround(t * static_cast<double>(d)));
      return [d, dist](Rng& rng, Point& x, Point& y) {
        hamming_pair(d, dist, rng, x, y);
      };
    }
    case Domain::sphere:
      if (!(argument >= -1 && argument <= 1)) {
        throw InvalidArgument("inner product must lie in [-1, 1]");
      }
      return [d, argument](Rng& rng, Point& x, Point& y) {
        sphere_pair(d, argument, rng, x, y);
      };
    case Domain::euclidean:
      if (!(argument >= 0)) throw InvalidArgument("distance must be >= 0");
      return [d, argument](Rng& rng, Point& x, Point& y) {
        euclid_pair(d, argument, rng, x, y);
      };
  }
  throw InvalidArgument("unknown domain");
}

PairSampler correlated_sampler(std::size_t d, double alpha) {
  if (!(alpha >= -1 && alpha <= 1)) {
    throw InvalidArgument("correlation must lie in [-1, 1]");
  }
  return [d, alpha](Rng& rng, Point& x, Point& y) {
    correlated_bits(d, alpha, rng, x, y);
  };
}

EstimateReport estimate_cpf(const DshFamily& family, const PairSampler& sampler,
                            double argument, std::uint64_t n,
                            std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("trial count must be at least 1");
  std::vector<std::uint64_t> hits(std::max(1u, thread_count()), 0);
  parallel_blocks(n, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
    Point x;
    Point y;
    std::uint64_t local = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      PairPtr pair = family.sample(rng);
      sampler(rng, x, y);
      local += pair->collides(x, y) ? 1 : 0;
    }
    hits[w] = local;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return make_report(argument, total, n);
}

EstimateReport estimate_cpf(const DshFamily& family, double argument,
                            std::uint64_t n, std::uint64_t seed) {
  double arg = argument;
  if (family.domain() == Domain::hamming) {
    arg = snap_relative_distance(argument, family.dimension());
  }
  return estimate_cpf(
      family, exact_pair_sampler(family.domain(), family.dimension(), arg), arg,
      n, seed);
}

double comparison_sigma(const EstimateReport& r, double reference) {
  const double ref = std::clamp(reference, 0.0, 1.0);
  const double n = static_cast<double>(std::max<std::uint64_t>(r.n, 1));
  return std::max(r.std_error, std::sqrt(ref * (1 - ref) / n));
}

bool within_sigmas(const EstimateReport& r, double reference, double k) {
  return std::abs(r.estimate - reference) <= k * comparison_sigma(r, reference);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::violated:
      return "violated";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::pair<SsseResult, SsseResult> check_ssse(const DshFamily& family,
                                             double alpha, std::uint64_t n,
                                             std::uint64_t seed) {
  check_hamming(family);
  check_alpha(alpha);
  const std::size_t d = family.dimension();
  SsseResult rev;
  SsseResult fwd;
  rev.at_zero = estimate_cpf(family, correlated_sampler(d, 0.0), 0.0, n,
                             derive_seed(seed, 0));
  if (alpha == 0) {
    // The bound is f(0) itself.
    rev.at_alpha = rev.at_zero;
    rev.verdict = Verdict::consistent;
    fwd = rev;
    return {rev, fwd};
  }
  rev.at_alpha = estimate_cpf(family, correlated_sampler(d, alpha), alpha, n,
                              derive_seed(seed, 1));
  fwd.at_zero = rev.at_zero;
  fwd.at_alpha = rev.at_alpha;
  rev.exponent = (1 + alpha) / (1 - alpha);
  fwd.exponent = (1 - alpha) / (1 + alpha);
  rev.verdict = reverse_verdict(rev.at_zero, rev.at_alpha, rev.exponent);
  fwd.verdict = forward_verdict(fwd.at_zero, fwd.at_alpha, fwd.exponent);
  return {rev, fwd};
}

SsseResult check_reverse_ssse(const DshFamily& family, double alpha,
                              std::uint64_t n, std::uint64_t seed) {
  return check_ssse(family, alpha, n, seed).first;
}

SsseResult check_forward_ssse(const DshFamily& family, double alpha,
                              std::uint64_t n, std::uint64_t seed) {
  return check_ssse(family, alpha, n, seed).second;
}

JensenValues jensen_values(const std::vector<double>& p,
                           const std::vector<double>& q, double c) {
  if (p.empty() || p.size() != q.size()) {
    throw InvalidArgument("distributions need a common nonempty support");
  }
  if (!(c > 0)) throw InvalidArgument("exponent c must be positive");
  auto check = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
      if (!(x >= 0)) throw InvalidArgument("probabilities must be >= 0");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) {
      throw InvalidArgument("probabilities must sum to 1");
    }
  };
  check(p);
  check(q);
  double lhs = 0.0;
  double inner = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pq = p[i] * q[i];
    lhs += std::pow(pq, c);
    inner += pq;
  }
  return {lhs, std::pow(inner, 2 * c - 1)};
}

bool check_jensen_chain(const std::vector<double>& p,
                        const std::vector<double>& q, double c) {
  const JensenValues v = jensen_values(p, q, c);
  bool ok = true;
  if (c >= 1) ok = ok && v.lhs >= v.rhs - 1e-12;
  if (c <= 1) ok = ok && v.lhs <= v.rhs + 1e-12;
  return ok;
}

EstimateReport estimate_normal_tail(double t, std::uint64_t n,
                                    std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample count must be at least 1");
  std::vector<std::uint64_t> hits(std::max(1u, thread_count()), 0);
  parallel_blocks(n, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    std::uint64_t local = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      Rng rng(derive_seed(seed, i));
      local += rng.normal() >= t ? 1 : 0;
    }
    hits[w] = local;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return make_report(t, total, n);
}

EstimateReport estimate_bivariate_tail(double t, double alpha,
                                       std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("sample count must be at least 1");
  if (!(alpha >= -1 && alpha <= 1)) {
    throw InvalidArgument("correlation must lie in [-1, 1]");
  }
  const double s = std::sqrt(1 - alpha * alpha);
  std::vector<std::uint64_t> hits(std::max(1u, thread_count()), 0);
  parallel_blocks(n, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
    std::uint64_t local = 0;
    for (std::uint64_t i = b; i < e; ++i) {
      Rng rng(derive_seed(seed, i));
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      local += (z1 >= t && alpha * z1 + s * z2 >= t) ? 1 : 0;
    }
    hits[w] = local;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return make_report(t, total, n);
}

}  // namespace dsh
