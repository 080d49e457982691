// Copyright 2026 The rc4hw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rc4hw {

/// Complementary error function.
inline double erfc(double x) { return std::erfc(x); }

namespace detail {

inline constexpr int kGammaMaxIter = 20000;

// Lower regularized incomplete gamma P(a, x) by series, x < a + 1.
inline double gamma_p_series(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int it = 0; it < kGammaMaxIter; ++it) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * eps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("incomplete gamma series failed to converge");
}

// Upper regularized incomplete gamma Q(a, x) by modified Lentz continued
// fraction, x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int it = 1; it <= kGammaMaxIter; ++it) {
    const double an = -it * (it - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("incomplete gamma fraction failed to converge");
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x); requires a > 0, x >= 0.
inline double igamc(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("igamc needs a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

/// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace rc4hw
