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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsh/random.hpp"

namespace dsh {

// Errors. Every failure surfaced by the library derives from Error so the C
// layer can map it onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class DomainMismatch : public Error {
 public:
  using Error::Error;
};
class ConstructionError : public Error {
 public:
  using Error::Error;
};
class ConvergenceError : public Error {
 public:
  using Error::Error;
};
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};

enum class Domain { hamming, sphere, euclidean };

const char* domain_name(Domain d);

using HashToken = std::uint64_t;

/// Order-dependent token combiner used for tuples of component tokens.
HashToken combine_tokens(HashToken acc, HashToken next);

/// Token of the empty tuple; the seed of every combine chain.
inline constexpr HashToken kTupleSeed = 0x6a09e667f3bcc908ULL;

// Bookkeeping that records every (mixed token -> component tuple) produced
// while enabled and counts distinct tuples that mixed to the same token.
// Off by default; tests switch it on.
void set_token_audit(bool enabled);
bool token_audit_enabled();
void token_audit_record(HashToken mixed, std::span<const HashToken> tuple);
std::uint64_t token_audit_collisions();
std::uint64_t token_audit_size();
void token_audit_reset();

/// A point of one of the three domains. Hamming points use `bits` (one byte
/// per coordinate, values 0/1); sphere and Euclidean points use `coords`.
struct Point {
  Domain domain = Domain::hamming;
  std::vector<std::uint8_t> bits;
  std::vector<double> coords;

  std::size_t dim() const {
    return domain == Domain::hamming ? bits.size() : coords.size();
  }

  static Point hamming(std::vector<std::uint8_t> b);
  /// Checks |‖x‖ − 1| ≤ 1e−9.
  static Point unit(std::vector<double> x);
  /// Scales x to unit norm.
  static Point normalized(std::vector<double> x);
  static Point euclidean(std::vector<double> x);
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
std::size_t hamming_distance(const Point& x, const Point& y);

/// Distance or similarity between two points in the argument convention of
/// the domain: relative Hamming distance, inner product, Euclidean distance.
double argument_between(const Point& x, const Point& y);

enum class CpfKind { closed_form, bounded, empirical };
enum class Argument { relative_hamming, inner_product, euclidean_distance };

const char* cpf_kind_name(CpfKind k);
Argument argument_for(Domain d);

struct Interval {
  double lower;
  double upper;
};

/// Collision probability function descriptor.
class Cpf {
 public:
  using Fn = std::function<double(double)>;
  using BoundsFn = std::function<Interval(double)>;

  Cpf() = default;
  Cpf(CpfKind kind, Argument arg, Fn eval, Fn log_eval = {},
      BoundsFn bounds = {});

  static Cpf empirical(Argument arg);

  CpfKind kind() const { return kind_; }
  Argument argument() const { return arg_; }
  bool has_value() const { return static_cast<bool>(eval_); }
  bool has_bounds() const { return static_cast<bool>(bounds_); }

  /// Value clamped to [0, 1]. Throws InvalidArgument for empirical CPFs.
  double operator()(double x) const;
  /// ln f(x); uses the log-domain evaluator when one was supplied.
  double log(double x) const;
  Interval bounds(double x) const;

 private:
  CpfKind kind_ = CpfKind::empirical;
  Argument arg_ = Argument::relative_hamming;
  Fn eval_;
  Fn log_eval_;
  BoundsFn bounds_;
};

/// A sampled pair (h, g). Immutable once constructed.
class FunctionPair {
 public:
  FunctionPair(Domain domain, std::size_t dim) : domain_(domain), dim_(dim) {}
  virtual ~FunctionPair() = default;

  Domain domain() const { return domain_; }
  std::size_t dimension() const { return dim_; }

  // Unchecked hooks; callers validate domain and dimension once.
  virtual HashToken h(const Point& x) const = 0;
  virtual HashToken g(const Point& y) const = 0;
  /// Same truth value as h(x) == g(y), possibly computed faster.
  virtual bool collides(const Point& x, const Point& y) const {
    return h(x) == g(y);
  }

  /// Throws DomainMismatch if p does not belong to this pair's domain.
  void check(const Point& p) const;

 private:
  Domain domain_;
  std::size_t dim_;
};

using PairPtr = std::unique_ptr<FunctionPair>;

class DshFamily {
 public:
  DshFamily(Domain domain, std::size_t dim, Cpf cpf, std::string name)
      : domain_(domain), dim_(dim), cpf_(std::move(cpf)),
        name_(std::move(name)) {}
  virtual ~DshFamily() = default;

  Domain domain() const { return domain_; }
  std::size_t dimension() const { return dim_; }
  const Cpf& cpf() const { return cpf_; }
  const std::string& name() const { return name_; }

  /// Draws a pair using `rng` as the only source of randomness.
  virtual PairPtr sample(Rng& rng) const = 0;

 private:
  Domain domain_;
  std::size_t dim_;
  Cpf cpf_;
  std::string name_;
};

using FamilyPtr = std::shared_ptr<const DshFamily>;

PairPtr sample_pair(const DshFamily& family, std::uint64_t seed);

/// Checked collision test.
bool collide(const FunctionPair& pair, const Point& x, const Point& y);

/// Worker count for parallel loops: DSH_THREADS if set, else 1. A non-zero
/// override takes precedence (used by tests).
unsigned thread_count();
void set_thread_override(unsigned n);

/// Runs body(begin, end, worker) over [0, n) split into contiguous blocks.
void parallel_blocks(std::uint64_t n,
                     const std::function<void(std::uint64_t, std::uint64_t,
                                              unsigned)>& body);

}  // namespace dsh
