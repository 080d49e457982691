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

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "rc4hw/special.hpp"
#include "rc4hw/sts.hpp"

// Meta-statistics over a test's P-value collection: the proportion of
// samples passing at the significance level against its three-sigma
// lower bound, and the chi-square uniformity of the P-value
// distribution (the P-value of P-values).

namespace rc4hw {

/// (1 - alpha) - 3 sqrt(alpha (1 - alpha) / m).
inline double expected_lower_bound(double alpha, std::size_t m) {
  return (1.0 - alpha) -
         3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(m));
}

struct ProportionReport {
  std::size_t m = 0;
  std::size_t failures = 0;
  double observed = 0.0;
  double expected_lower = 0.0;
  double alpha = 0.01;
  bool passed = false;
};

inline ProportionReport proportion_of_passing(std::span<const PValue> pvalues,
                                              double alpha = 0.01) {
  if (pvalues.empty()) throw std::invalid_argument("no P-values");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  ProportionReport rep;
  rep.m = pvalues.size();
  rep.alpha = alpha;
  for (const auto& p : pvalues) {
    if (p.value < alpha) ++rep.failures;
  }
  rep.observed = static_cast<double>(rep.m - rep.failures) /
                 static_cast<double>(rep.m);
  rep.expected_lower = expected_lower_bound(alpha, rep.m);
  rep.passed = rep.observed >= rep.expected_lower;
  return rep;
}

struct UniformityReport {
  std::array<std::uint64_t, 10> bin_counts{};
  double chi_square = 0.0;
  double pop = 0.0;  // P-value of the P-values
  bool uniform = false;
};

/// Chi-square over ten equal bins of [0, 1] (last bin closed);
/// pop = igamc(9/2, chi^2/2); uniform iff pop >= 1e-4.
inline UniformityReport pvalue_uniformity(std::span<const PValue> pvalues) {
  if (pvalues.empty()) throw std::invalid_argument("no P-values");
  UniformityReport rep;
  for (const auto& p : pvalues) {
    const int bin = std::min(static_cast<int>(p.value * 10.0), 9);
    ++rep.bin_counts[static_cast<std::size_t>(bin)];
  }
  const double expected = static_cast<double>(pvalues.size()) / 10.0;
  for (std::uint64_t f : rep.bin_counts) {
    const double d = static_cast<double>(f) - expected;
    rep.chi_square += d * d / expected;
  }
  rep.pop = igamc(9.0 / 2.0, rep.chi_square / 2.0);
  rep.uniform = rep.pop >= 1e-4;
  return rep;
}

/// Counts over [0,.01), [.01,.1), [.1,.2), ..., [.9,1]; every bin is
/// half-open except the last, which includes 1.
inline std::array<std::uint64_t, 11> histogram_ranges(
    std::span<const PValue> pvalues) {
  std::array<std::uint64_t, 11> bins{};
  for (const auto& p : pvalues) {
    std::size_t bin;
    if (p.value < 0.01) {
      bin = 0;
    } else if (p.value < 0.1) {
      bin = 1;
    } else {
      bin = 1 + static_cast<std::size_t>(
                    std::min(static_cast<int>(p.value * 10.0), 9));
    }
    ++bins[bin];
  }
  return bins;
}

}  // namespace rc4hw
