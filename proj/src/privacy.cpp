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

#include "dsh/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsh/combinators.hpp"
#include "dsh/hamming.hpp"

namespace dsh {

namespace {

constexpr std::uint64_t kMaxSketch = 1u << 24;
constexpr std::uint64_t kTruncationStream = 0x7472756e63617465ULL;

unsigned default_token_bits(std::uint64_t n, double delta) {
  if (n == 0) return 64;
  const double b = std::ceil(std::log2(4.0 * static_cast<double>(n) / delta));
  return static_cast<unsigned>(std::clamp(b, 1.0, 64.0));
}

std::uint64_t sketch_length(double C, std::uint64_t t, double epsilon) {
  const double n = std::ceil(C * static_cast<double>(t) * std::log(1 / epsilon));
  if (!(n <= static_cast<double>(kMaxSketch))) {
    throw BudgetExceeded("sketch would exceed 2^24 components");
  }
  return static_cast<std::uint64_t>(n);
}

}  // namespace

ProtocolParams protocol_params(double r, double c, double epsilon,
                               double delta, double rho, double C) {
  if (!(rho > 0 && rho < 1)) throw InvalidArgument("rho must lie in (0, 1)");
  if (!(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1)) {
    throw InvalidArgument("epsilon and delta must lie in (0, 1)");
  }
  if (!(c > 1)) throw InvalidArgument("c must exceed 1");
  if (!(r >= 0)) throw InvalidArgument("r must be nonnegative");
  if (!(C >= 0) || !std::isfinite(C)) {
    throw InvalidArgument("C must be finite and nonnegative");
  }
  ProtocolParams p;
  p.r = r;
  p.c = c;
  p.epsilon = epsilon;
  p.delta = delta;
  p.rho = rho;
  p.C = C;
  const double t = std::pow(1 / delta, rho / (1 - rho));
  if (!(t <= 1e15)) throw BudgetExceeded("t exceeds 10^15");
  // Guard against t landing a rounding error above an integer.
  p.t = static_cast<std::uint64_t>(std::max(1.0, std::ceil(t * (1 - 1e-12))));
  p.n = sketch_length(C, p.t, epsilon);
  p.token_bits = default_token_bits(p.n, delta);
  return p;
}

SketchContext::SketchContext(FamilyPtr family, const ProtocolParams& params,
                             std::uint64_t master_seed)
    : family_(std::move(family)), params_(params) {
  if (!family_) throw InvalidArgument("null family");
  if (params_.token_bits == 0 || params_.token_bits > 64) {
    throw InvalidArgument("token_bits must lie in [1, 64]");
  }
  if (params_.n > kMaxSketch) {
    throw BudgetExceeded("sketch would exceed 2^24 components");
  }
  schedule_.resize(params_.n);
  pairs_.resize(params_.n);
  mul_.resize(params_.n);
  add_.resize(params_.n);
  for (std::uint64_t i = 0; i < params_.n; ++i) {
    schedule_[i] = derive_seed(master_seed, i);
    Rng rng(schedule_[i]);
    pairs_[i] = family_->sample(rng);
    // Multiply-add-shift over 128 bits: 2-independent into the top bits.
    Rng hr(derive_seed(schedule_[i], kTruncationStream));
    const auto hi = static_cast<unsigned __int128>(hr());
    mul_[i] = (hi << 64) | hr();
    const auto hi2 = static_cast<unsigned __int128>(hr());
    add_[i] = (hi2 << 64) | hr();
  }
}

Sketch SketchContext::sketch(const Point& x, Side side) const {
  if (x.domain != family_->domain() || x.dim() != family_->dimension()) {
    throw DomainMismatch("point does not match the sketch family");
  }
  Sketch s;
  s.side = side;
  s.seed_schedule = schedule_;
  s.token_bits = params_.token_bits;
  s.tokens.resize(params_.n);
  const unsigned b = params_.token_bits;
  for (std::uint64_t i = 0; i < params_.n; ++i) {
    const HashToken raw = side == Side::data ? pairs_[i]->h(x) : pairs_[i]->g(x);
    if (b >= 64) {
      s.tokens[i] = raw;
    } else {
      const unsigned __int128 v = mul_[i] * raw + add_[i];
      s.tokens[i] = static_cast<HashToken>(v >> (128 - b));
    }
  }
  return s;
}

Sketch make_sketch(const Point& x, FamilyPtr family,
                   const ProtocolParams& params, Side side,
                   std::uint64_t master_seed) {
  return SketchContext(std::move(family), params, master_seed).sketch(x, side);
}

Decision decide_close(const Sketch& a, const Sketch& b) {
  if (a.seed_schedule != b.seed_schedule || a.token_bits != b.token_bits ||
      a.tokens.size() != b.tokens.size()) {
    throw InvalidArgument("sketches use different seed schedules");
  }
  if (a.side == b.side) throw InvalidArgument("sketches must be opposite sides");
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    if (a.tokens[i] == b.tokens[i]) return Decision::yes;
  }
  return Decision::no;
}

double leakage_estimate(const Sketch& a, const Sketch& b) {
  const std::size_t n = std::min(a.tokens.size(), b.tokens.size());
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += a.tokens[i] == b.tokens[i];
  return static_cast<double>(hits) * a.token_bits;
}

namespace {

void fill_far(StepFamily& s, std::size_t d, double r, double c) {
  const auto far = static_cast<std::size_t>(std::ceil(c * r * d - 1e-9));
  double lf = -std::numeric_limits<double>::infinity();
  for (std::size_t j = far; j <= d; ++j) {
    lf = std::max(lf, s.family->cpf().log(static_cast<double>(j) / d));
  }
  s.far_max = std::exp(lf);
  s.rho = std::log(s.plateau_min) / lf;
}

}  // namespace

StepFamily step_family(std::size_t d, double r, double c, unsigned k) {
  if (!(c > 1)) throw InvalidArgument("c must exceed 1");
  if (d == 0) throw InvalidArgument("dimension must be at least 1");
  if (k < 2) throw InvalidArgument("step family needs k >= 2");
  if (!(r > 0 && r < 0.5)) throw InvalidArgument("r must lie in (0, 1/2)");
  const double rs = std::floor(r * static_cast<double>(d)) /
                    static_cast<double>(d);
  if (rs <= 0) throw InvalidArgument("r d must be at least 1");
  // f(0) = w and f(rs) = q (w (1 - rs) + (1 - w) rs), q = (1 - rs)^(k-1).
  const double q = std::pow(1 - rs, k - 1.0);
  const double w = q * rs / (1 - q * (1 - 2 * rs));
  StepFamily s;
  s.k = k;
  s.weight = w;
  s.family = mixture({bit_anti_product_family(d, k, 0),
                      bit_anti_product_family(d, k - 1, 1)},
                     {w, 1 - w});
  const auto close = static_cast<std::size_t>(std::floor(r * d + 1e-9));
  s.plateau_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= close; ++j) {
    const double f = s.family->cpf()(static_cast<double>(j) / d);
    if (f < s.plateau_min) {
      s.plateau_min = f;
      s.worst_close = j;
    }
  }
  fill_far(s, d, r, c);
  return s;
}

StepFamily choose_step_family(std::size_t d, double r, double c,
                              double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1)) {
    throw InvalidArgument("epsilon and delta must lie in (0, 1)");
  }
  for (unsigned k = 2; k <= 512; ++k) {
    StepFamily s = step_family(d, r, c, k);
    const double n = std::log(2 / epsilon) / s.plateau_min;
    if (n * s.far_max <= delta / 2) return s;
  }
  throw ConstructionError("no step family with k <= 512 meets the budgets");
}

double calibrate_constant(const StepFamily& step, const ProtocolParams& base,
                          std::size_t d, std::uint64_t pairs,
                          std::uint64_t seed) {
  if (pairs == 0) throw InvalidArgument("need at least one validation pair");
  const double scale = static_cast<double>(base.t) * std::log(1 / base.epsilon);
  // Collisions are geometric with rate >= plateau_min; search well past the
  // expected quantile. Each validation pair gets its own schedule, since the
  // guarantee is over the protocol's randomness.
  const auto limit = static_cast<std::uint64_t>(std::min<double>(
      static_cast<double>(kMaxSketch),
      std::ceil(4 * std::log(2 / base.epsilon) / step.plateau_min) + 16));
  std::vector<std::uint64_t> first(pairs);
  parallel_blocks(pairs, [&](std::uint64_t b, std::uint64_t e, unsigned) {
    Point x;
    Point y;
    for (std::uint64_t p = b; p < e; ++p) {
      Rng rng(derive_seed(derive_seed(seed, 1), p));
      hamming_pair(d, step.worst_close, rng, x, y);
      const std::uint64_t schedule = derive_seed(derive_seed(seed, 0), p);
      std::uint64_t i = 0;
      for (; i < limit; ++i) {
        Rng hr(derive_seed(schedule, i));
        if (step.family->sample(hr)->collides(x, y)) break;
      }
      first[p] = i;  // sketch length needed is i + 1
    }
  });
  std::sort(first.begin(), first.end());
  // Largest allowed number of misses, then the smallest length achieving it.
  const auto misses = static_cast<std::uint64_t>(
      std::floor(base.epsilon / 2 * static_cast<double>(pairs)));
  const std::uint64_t covered = pairs - misses;  // >= 1
  const std::uint64_t idx = first[covered - 1];
  if (idx >= limit) {
    throw ConvergenceError("calibration did not reach the epsilon target");
  }
  return static_cast<double>(idx + 1) / scale;
}

PrivacyDemoResult run_privacy_demo(const PrivacyDemoConfig& cfg) {
  PrivacyDemoResult res;
  res.step = choose_step_family(cfg.d, cfg.r, cfg.c, cfg.epsilon, cfg.delta);
  const ProtocolParams base = protocol_params(
      cfg.r, cfg.c, cfg.epsilon, cfg.delta, res.step.rho, 0.0);
  const double C = calibrate_constant(res.step, base, cfg.d,
                                      cfg.validation_pairs,
                                      derive_seed(cfg.seed, 100));
  res.params = protocol_params(cfg.r, cfg.c, cfg.epsilon, cfg.delta,
                               res.step.rho, C);
  res.close_distance =
      static_cast<std::size_t>(std::floor(cfg.r * cfg.d + 1e-9));
  res.far_distance =
      static_cast<std::size_t>(std::ceil(cfg.c * cfg.r * cfg.d - 1e-9));

  struct Tally {
    std::uint64_t yes = 0;
    double leak = 0.0;
  };
  auto run = [&](std::size_t dist, std::uint64_t stream) {
    std::vector<std::uint8_t> yes(cfg.pairs);
    std::vector<double> leak(cfg.pairs);
    parallel_blocks(cfg.pairs, [&](std::uint64_t b, std::uint64_t e,
                                   unsigned) {
      Point x;
      Point y;
      for (std::uint64_t p = b; p < e; ++p) {
        Rng rng(derive_seed(derive_seed(cfg.seed, stream), p));
        hamming_pair(cfg.d, dist, rng, x, y);
        const SketchContext ctx(res.step.family, res.params,
                                derive_seed(derive_seed(cfg.seed, stream + 1),
                                            p));
        const Sketch sx = ctx.sketch(x, Side::data);
        const Sketch sy = ctx.sketch(y, Side::query);
        yes[p] = decide_close(sx, sy) == Decision::yes;
        leak[p] = leakage_estimate(sx, sy);
      }
    });
    // Sequential reduction keeps the sums independent of the split.
    Tally t;
    for (std::uint64_t p = 0; p < cfg.pairs; ++p) {
      t.yes += yes[p];
      t.leak += leak[p];
    }
    return t;
  };
  const Tally close = run(res.close_distance, 300);
  const Tally far = run(res.far_distance, 400);
  res.close_yes = close.yes;
  res.close_no = cfg.pairs - close.yes;
  res.far_yes = far.yes;
  res.far_no = cfg.pairs - far.yes;
  if (cfg.pairs > 0) {
    res.close_leakage_mean = close.leak / static_cast<double>(cfg.pairs);
    res.far_leakage_mean = far.leak / static_cast<double>(cfg.pairs);
  }
  return res;
}

}  // namespace dsh
