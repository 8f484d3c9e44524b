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

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail Q(x) = Pr[Z >= x].
double normal_sf(double x);
double log_normal_sf(double x);

/// Q(x) / phi(x).
double mills_ratio(double x);

/// E[(Z - x)_+] = phi(x) - x Q(x).
double psi(double x);
double log_psi(double x);

/// Szarek-Werner sandwich of Pr[Z >= t], t >= 0.
Interval normal_tail_bounds(double t);

/// Savage sandwich of Pr[X1 >= t and X2 >= t] for standard normals with
/// correlation alpha. The lower end is clamped at 0.
Interval bivariate_tail_bounds(double t, double alpha);

/// Pr[X1 >= t and X2 >= t] by adaptive Gauss-Kronrod quadrature of
/// phi(x) Q((t - alpha x) / sqrt(1 - alpha^2)) over [t, inf).
double bivariate_upper_orthant(double t, double alpha);

}  // namespace dsh
