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

#include "dsh/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace dsh {

namespace {

using cd = std::complex<double>;

std::vector<cd> companion_roots(const std::vector<double>& c) {
  const int k = static_cast<int>(c.size()) - 1;
  if (k == 0) return {};
  if (k == 1) return {cd(-c[0] / c[1], 0.0)};
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) m(i, k - 1) = -c[i] / c[k];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("companion matrix eigenvalues did not converge");
  }
  std::vector<cd> out(k);
  for (int i = 0; i < k; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

cd horner(const std::vector<double>& c, cd z) {
  cd acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cd horner_derivative(const std::vector<double>& c, cd z) {
  cd acc = 0.0;
  for (std::size_t i = c.size() - 1; i >= 1; --i) {
    acc = acc * z + static_cast<double>(i) * c[i];
  }
  return acc;
}

void polish(const std::vector<double>& c, cd& z) {
  for (int it = 0; it < 8; ++it) {
    const cd p = horner(c, z);
    const cd dp = horner_derivative(c, z);
    if (std::abs(dp) == 0.0) return;
    const cd next = z - p / dp;
    if (!(std::abs(horner(c, next)) < std::abs(p))) return;
    z = next;
  }
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients)
    : coef_(std::move(coefficients)) {
  for (double a : coef_) {
    if (!std::isfinite(a)) throw InvalidArgument("non-finite coefficient");
  }
  while (!coef_.empty() && coef_.back() == 0.0) coef_.pop_back();
  if (coef_.empty()) throw InvalidArgument("zero polynomial");

  while (zeros_ < static_cast<int>(coef_.size()) && coef_[zeros_] == 0.0) {
    ++zeros_;
  }
  const std::vector<double> reduced(coef_.begin() + zeros_, coef_.end());
  std::vector<cd> raw = companion_roots(reduced);
  for (auto& z : raw) polish(reduced, z);

  std::vector<cd> real_roots;
  std::vector<cd> upper;
  std::vector<cd> lower;
  for (const cd& z : raw) {
    if (std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z.real()))) {
      real_roots.emplace_back(z.real(), 0.0);
    } else if (z.imag() > 0) {
      upper.push_back(z);
    } else {
      lower.push_back(z);
    }
  }
  if (upper.size() != lower.size()) {
    throw ConvergenceError("complex roots do not pair into conjugates");
  }
  std::sort(real_roots.begin(), real_roots.end(),
            [](const cd& a, const cd& b) { return a.real() < b.real(); });
  std::sort(upper.begin(), upper.end(), [](const cd& a, const cd& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  roots_.assign(zeros_, cd(0.0, 0.0));
  for (const cd& z : real_roots) roots_.push_back(z);
  std::vector<bool> used(lower.size(), false);
  for (const cd& z : upper) {
    std::size_t best = lower.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(std::conj(z) - lower[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    const double a = 0.5 * (z.real() + lower[best].real());
    const double b = 0.5 * (z.imag() - lower[best].imag());
    roots_.emplace_back(a, b);
    roots_.emplace_back(a, -b);
  }

  for (int i = 0; i < 16; ++i) {
    const double t = i / 15.0;
    cd prod = coef_.back();
    for (const cd& z : roots_) prod *= (t - z);
    double scale = 0.0;
    double tp = 1.0;
    for (double a : coef_) {
      scale += std::abs(a) * tp;
      tp *= t;
    }
    if (std::abs(prod - (*this)(t)) > 1e-8 * std::max(scale, 1e-300)) {
      throw ConvergenceError("root multiset does not reconstruct polynomial");
    }
  }
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  return horner(coef_, z);
}

double Polynomial::abs_sum() const {
  double s = 0.0;
  for (double a : coef_) s += std::abs(a);
  return s;
}

}  // namespace dsh
