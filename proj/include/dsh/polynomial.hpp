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
#include <vector>

#include "dsh/core.hpp"

namespace dsh {

/// Real polynomial a_0 + a_1 t + ... + a_k t^k with its complex roots.
///
/// Roots come from the eigenvalues of the companion matrix, refined by a few
/// Newton steps. Roots with |Im z| < 1e-9 (1 + |Re z|) are snapped to the
/// real axis, and the rest are paired with their conjugates greedily by
/// distance. Construction fails with ConvergenceError if the root multiset
/// does not reconstruct the polynomial to relative tolerance 1e-8 at 16
/// points of [0, 1].
class Polynomial {
 public:
  /// Coefficients, constant term first. Trailing zeros are dropped.
  explicit Polynomial(std::vector<double> coefficients);

  const std::vector<double>& coefficients() const { return coef_; }
  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  double leading() const { return coef_.back(); }
  int leading_sign() const { return coef_.back() < 0 ? -1 : 1; }

  double operator()(double t) const;
  std::complex<double> operator()(std::complex<double> z) const;

  /// All k roots with multiplicity. Zero roots are exact zeros, real roots
  /// have zero imaginary part, and conjugate pairs are adjacent with the
  /// positive imaginary part first.
  const std::vector<std::complex<double>>& roots() const { return roots_; }

  /// Multiplicity of the root at 0 (number of leading zero coefficients).
  int zero_root_multiplicity() const { return zeros_; }

  /// Sum of |a_i|.
  double abs_sum() const;

 private:
  std::vector<double> coef_;
  std::vector<std::complex<double>> roots_;
  int zeros_ = 0;
};

}  // namespace dsh
