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

#include "dsh/core.hpp"

namespace dsh {

struct ShiftedBucketParams {
  double w = 1.0;
  unsigned k = 0;
  std::size_t d = 1;
};

/// h(x) = floor((<a, x> + b) / w), g(y) = floor((<a, y> + b) / w) + k with a
/// standard Gaussian and b uniform in [0, w).
FamilyPtr e2dsh_family(const ShiftedBucketParams& params);

/// Collision probability at Euclidean distance delta. With s = delta / w,
///   f = s [psi((k-1)/s) - 2 psi(k/s) + psi((k+1)/s)],
/// psi(x) = E[(Z - x)_+], i.e. the expectation of the triangular kernel
/// max(0, 1 - |S - k|) under S ~ N(0, s^2). delta = 0 gives [k == 0].
double e2dsh_cpf(double w, unsigned k, double delta);

/// ln of e2dsh_cpf, accurate where the value underflows.
double e2dsh_log_cpf(double w, unsigned k, double delta);

/// Largest width with w <= sqrt(2 pi) / (2 c).
double choose_w_k(double c, unsigned k);

/// ln(1/f(r)) / ln(1/f(r/c)).
double rho_minus(double w, unsigned k, double r, double c);

/// Upper bound on f(1/c): (2 w c / sqrt(2 pi)) exp(-(c (k-1) w)^2 / 2).
double e2dsh_upper_bound(double w, unsigned k, double c);

/// Lower bound on f(1): (w / (4 sqrt(2 pi))) exp(-((k + 1/2) w)^2 / 2).
double e2dsh_lower_bound(double w, unsigned k);

}  // namespace dsh
