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

#include "dsh/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include <boost/random/normal_distribution.hpp>

namespace dsh {

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  std::uint64_t x = (*this)();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() {
  // The Boost ziggurat holds no cached state, so a fresh object per call
  // yields the same stream as a long-lived one.
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::hamming:
      return "hamming";
    case Domain::sphere:
      return "sphere";
    case Domain::euclidean:
      return "euclidean";
  }
  return "unknown";
}

HashToken combine_tokens(HashToken acc, HashToken next) {
  return mix64(acc ^ mix64(next + 0x9e3779b97f4a7c15ULL)) +
         0x632be59bd9b4e019ULL;
}

namespace {

struct Audit {
  std::mutex mu;
  std::atomic<bool> enabled{false};
  std::map<HashToken, std::vector<HashToken>> seen;
  std::uint64_t collisions = 0;
};

Audit& audit() {
  static Audit a;
  return a;
}

std::atomic<unsigned> g_thread_override{0};

}  // namespace

void set_token_audit(bool enabled) { audit().enabled = enabled; }
bool token_audit_enabled() { return audit().enabled.load(); }

void token_audit_record(HashToken mixed, std::span<const HashToken> tuple) {
  Audit& a = audit();
  std::lock_guard<std::mutex> lock(a.mu);
  auto [it, inserted] =
      a.seen.try_emplace(mixed, tuple.begin(), tuple.end());
  if (!inserted && !std::equal(it->second.begin(), it->second.end(),
                               tuple.begin(), tuple.end())) {
    ++a.collisions;
  }
}

std::uint64_t token_audit_collisions() {
  std::lock_guard<std::mutex> lock(audit().mu);
  return audit().collisions;
}

std::uint64_t token_audit_size() {
  std::lock_guard<std::mutex> lock(audit().mu);
  return audit().seen.size();
}

void token_audit_reset() {
  std::lock_guard<std::mutex> lock(audit().mu);
  audit().seen.clear();
  audit().collisions = 0;
}

Point Point::hamming(std::vector<std::uint8_t> b) {
  for (auto v : b) {
    if (v > 1) throw InvalidArgument("bit vector entries must be 0 or 1");
  }
  Point p;
  p.domain = Domain::hamming;
  p.bits = std::move(b);
  return p;
}

Point Point::unit(std::vector<double> x) {
  if (std::abs(norm(x) - 1.0) > 1e-9) {
    throw InvalidArgument("unit vector norm deviates from 1 by more than 1e-9");
  }
  Point p;
  p.domain = Domain::sphere;
  p.coords = std::move(x);
  return p;
}

Point Point::normalized(std::vector<double> x) {
  const double n = norm(x);
  if (!(n > 0) || !std::isfinite(n)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  for (auto& v : x) v /= n;
  Point p;
  p.domain = Domain::sphere;
  p.coords = std::move(x);
  return p;
}

Point Point::euclidean(std::vector<double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite coordinate");
  }
  Point p;
  p.domain = Domain::euclidean;
  p.coords = std::move(x);
  return p;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::size_t hamming_distance(const Point& x, const Point& y) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.bits.size(); ++i) d += x.bits[i] != y.bits[i];
  return d;
}

double argument_between(const Point& x, const Point& y) {
  if (x.domain != y.domain || x.dim() != y.dim()) {
    throw DomainMismatch("points differ in domain or dimension");
  }
  switch (x.domain) {
    case Domain::hamming:
      return x.bits.empty() ? 0.0
                            : static_cast<double>(hamming_distance(x, y)) /
                                  static_cast<double>(x.bits.size());
    case Domain::sphere:
      return dot(x.coords, y.coords);
    case Domain::euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.coords.size(); ++i) {
        const double diff = x.coords[i] - y.coords[i];
        s += diff * diff;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

const char* cpf_kind_name(CpfKind k) {
  switch (k) {
    case CpfKind::closed_form:
      return "closed_form";
    case CpfKind::bounded:
      return "bounded";
    case CpfKind::empirical:
      return "empirical";
  }
  return "unknown";
}

Argument argument_for(Domain d) {
  switch (d) {
    case Domain::hamming:
      return Argument::relative_hamming;
    case Domain::sphere:
      return Argument::inner_product;
    case Domain::euclidean:
      return Argument::euclidean_distance;
  }
  return Argument::relative_hamming;
}

Cpf::Cpf(CpfKind kind, Argument arg, Fn eval, Fn log_eval, BoundsFn bounds)
    : kind_(kind), arg_(arg), eval_(std::move(eval)),
      log_eval_(std::move(log_eval)), bounds_(std::move(bounds)) {}

Cpf Cpf::empirical(Argument arg) {
  return Cpf(CpfKind::empirical, arg, {}, {}, {});
}

double Cpf::operator()(double x) const {
  if (!eval_) throw InvalidArgument("CPF has no analytic value");
  const double v = eval_(x);
  if (std::isnan(v)) return v;
  return std::clamp(v, 0.0, 1.0);
}

double Cpf::log(double x) const {
  if (log_eval_) return std::min(0.0, log_eval_(x));
  return std::log((*this)(x));
}

Interval Cpf::bounds(double x) const {
  if (!bounds_) throw InvalidArgument("CPF has no bounds");
  Interval b = bounds_(x);
  b.lower = std::clamp(b.lower, 0.0, 1.0);
  b.upper = std::clamp(b.upper, 0.0, 1.0);
  return b;
}

void FunctionPair::check(const Point& p) const {
  if (p.domain != domain_) {
    throw DomainMismatch(std::string("expected a ") + domain_name(domain_) +
                         " point, got " + domain_name(p.domain));
  }
  if (p.dim() != dim_) {
    throw DomainMismatch("expected dimension " + std::to_string(dim_) +
                         ", got " + std::to_string(p.dim()));
  }
}

PairPtr sample_pair(const DshFamily& family, std::uint64_t seed) {
  Rng rng(seed);
  return family.sample(rng);
}

bool collide(const FunctionPair& pair, const Point& x, const Point& y) {
  pair.check(x);
  pair.check(y);
  return pair.collides(x, y);
}

unsigned thread_count() {
  if (unsigned o = g_thread_override.load(); o != 0) return o;
  if (const char* env = std::getenv("DSH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(std::min(v, 256L));
  }
  return 1;
}

void set_thread_override(unsigned n) { g_thread_override = n; }

void parallel_blocks(std::uint64_t n,
                     const std::function<void(std::uint64_t, std::uint64_t,
                                              unsigned)>& body) {
  const unsigned workers = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(thread_count(), n)));
  if (workers == 1) {
    body(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dsh
