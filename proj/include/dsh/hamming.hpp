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

#include <complex>
#include <string>
#include <vector>

#include "dsh/core.hpp"
#include "dsh/polynomial.hpp"

namespace dsh {

// All Hamming CPFs take the relative distance t = dist / d in [0, 1].

/// h = g = x_i for a uniform i. CPF 1 - t.
FamilyPtr bit_sampling_family(std::size_t d);

/// h = x_i, g = 1 - x_i. CPF t.
FamilyPtr anti_bit_sampling_family(std::size_t d);

/// Bit-sampling whose sampled bit is forced to 0 on both sides with
/// probability 1 - alpha. CPF 1 - alpha t.
FamilyPtr scaled_bit_sampling_family(std::size_t d, double alpha);

/// Even mixture of a constant scheme that collides with probability beta and
/// an anti bit-sampling damped to never collide with probability 1 - alpha.
/// CPF beta/2 + alpha t/2.
FamilyPtr scaled_biased_anti_family(std::size_t d, double alpha, double beta);

/// Anti bit-sampling damped to never collide with probability 1 - alpha.
/// CPF alpha t.
FamilyPtr damped_anti_family(std::size_t d, double alpha);

/// Data side maps to 0; query side maps to 0 with probability p, else 1.
/// CPF p.
FamilyPtr constant_family(std::size_t d, double p);

/// concat(pow(bit, k1), pow(anti, k2)) with a single flat token fold.
/// CPF (1 - t)^k1 t^k2, maximal at t = k2 / (k1 + k2).
FamilyPtr bit_anti_product_family(std::size_t d, unsigned k1, unsigned k2);

enum class SchemeTag { S1, S2, S3, S4, S5, S6, S7, zero_root };

const char* scheme_tag_name(SchemeTag tag);

struct SchemeComponent {
  SchemeTag tag;
  /// The real root, or the root of the conjugate pair with Im z > 0. Zero
  /// for zero roots.
  std::complex<double> root;
  /// The factor of P this component realizes equals normalizer * S(t).
  double normalizer;
};

struct SchemeAssembly {
  std::vector<SchemeComponent> components;
  double delta = 1.0;
  /// Roots with negative real part.
  int psi = 0;
  /// |a_k|.
  double leading_abs = 1.0;
};

/// Analytic product of the component CPFs S1..S7 (and t for zero roots),
/// evaluated from the component formulas directly.
double assembly_exact_cpf(const SchemeAssembly& assembly, double t);

struct PolynomialFamily {
  FamilyPtr family;
  double delta;
  SchemeAssembly assembly;
};

/// Hamming family with CPF P(t) / delta. Requires no root with real part
/// strictly inside (0, 1) and P > 0 on (0, 1).
PolynomialFamily polynomial_family(const Polynomial& p, std::size_t d);

/// Exact relative distances reachable in dimension d: 0, 1/d, ..., 1.
double snap_relative_distance(double t, std::size_t d);

}  // namespace dsh
