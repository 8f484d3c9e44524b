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

// Distance-threshold estimation from hash sketches.
//
// PLAINTEXT SIMULATION ONLY. Both sketches live in one process and are
// compared directly. A deployment would compare them with a private set
// intersection protocol, which this module does not implement, and nothing
// here provides a formal privacy guarantee. leakage_estimate is an
// accounting figure (colliding components times token width), not a bound
// on mutual information.

#pragma once

#include <cstdint>
#include <vector>

#include "dsh/cpf_lab.hpp"
#include "dsh/core.hpp"

namespace dsh {

struct ProtocolParams {
  double r = 0.0;
  double c = 2.0;
  double epsilon = 0.05;
  double delta = 0.05;
  double rho = 0.5;
  /// ceil((1/delta)^(rho/(1-rho))).
  std::uint64_t t = 1;
  /// Sketch length constant: n = ceil(C t ln(1/epsilon)).
  double C = 1.0;
  std::uint64_t n = 0;
  /// Bits kept per token after universal hashing; 64 keeps tokens intact.
  unsigned token_bits = 64;
};

/// token_bits defaults to ceil(log2(4n / delta)), which keeps the expected
/// number of spurious collisions per sketch pair at most delta/4.
ProtocolParams protocol_params(double r, double c, double epsilon,
                               double delta, double rho, double C = 1.0);

enum class Side { data, query };

struct Sketch {
  std::vector<HashToken> tokens;
  Side side = Side::data;
  /// Public randomness: component i uses the pair drawn from seed i.
  std::vector<std::uint64_t> seed_schedule;
  unsigned token_bits = 64;
};

/// Pairs and truncation hashes for one seed schedule, shared by every sketch
/// built from it.
class SketchContext {
 public:
  SketchContext(FamilyPtr family, const ProtocolParams& params,
                std::uint64_t master_seed);

  Sketch sketch(const Point& x, Side side) const;
  const ProtocolParams& params() const { return params_; }
  const std::vector<std::uint64_t>& schedule() const { return schedule_; }

 private:
  FamilyPtr family_;
  ProtocolParams params_;
  std::vector<std::uint64_t> schedule_;
  std::vector<PairPtr> pairs_;
  std::vector<unsigned __int128> mul_;
  std::vector<unsigned __int128> add_;
};

/// Data side applies h_i, query side g_i.
Sketch make_sketch(const Point& x, FamilyPtr family,
                   const ProtocolParams& params, Side side,
                   std::uint64_t master_seed);

enum class Decision { no, yes };

/// yes iff some component matches. Throws InvalidArgument unless the
/// sketches come from the same schedule and token width and opposite sides.
Decision decide_close(const Sketch& a, const Sketch& b);

/// Colliding components times token width.
double leakage_estimate(const Sketch& a, const Sketch& b);

/// Hamming step family: a mixture of pow(bit, k) and pow(bit, k-1) x anti,
/// weighted so that f(0) = f(r). The CPF dips slightly inside [0, r] and
/// decays like (1 - t)^k beyond.
struct StepFamily {
  FamilyPtr family;
  unsigned k = 0;
  double weight = 0.0;        ///< probability of the pure bit-sampling part
  double plateau_min = 0.0;   ///< min f over distances j/d <= r
  double far_max = 0.0;       ///< max f over distances j/d >= c r
  double rho = 0.0;           ///< ln plateau_min / ln far_max
  std::size_t worst_close = 0;  ///< Hamming distance attaining plateau_min
};

StepFamily step_family(std::size_t d, double r, double c, unsigned k);

/// Smallest k for which a sketch sized to miss close pairs with probability
/// epsilon/2 expects at most delta/2 far collisions.
StepFamily choose_step_family(std::size_t d, double r, double c,
                              double epsilon, double delta);

/// Calibrates C on `pairs` validation pairs at the plateau's worst close
/// distance, each pair with its own seed schedule: the smallest sketch
/// length whose empirical no-rate is at most epsilon/2, divided by
/// t ln(1/epsilon).
double calibrate_constant(const StepFamily& step, const ProtocolParams& base,
                          std::size_t d, std::uint64_t pairs,
                          std::uint64_t seed);

struct PrivacyDemoConfig {
  std::size_t d = 128;
  double r = 0.1;
  double c = 2.0;
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t pairs = 2000;
  std::uint64_t validation_pairs = 2000;
  std::uint64_t seed = 1;
};

struct PrivacyDemoResult {
  ProtocolParams params;
  StepFamily step;
  std::size_t close_distance = 0;
  std::size_t far_distance = 0;
  std::uint64_t close_yes = 0;
  std::uint64_t close_no = 0;
  std::uint64_t far_yes = 0;
  std::uint64_t far_no = 0;
  double close_leakage_mean = 0.0;
  double far_leakage_mean = 0.0;
};

/// Close pairs at floor(r d) bits, far pairs at ceil(c r d) bits. Every pair
/// is sketched under a fresh seed schedule.
PrivacyDemoResult run_privacy_demo(const PrivacyDemoConfig& config);

}  // namespace dsh
