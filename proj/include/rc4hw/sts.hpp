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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rc4hw/bitsample.hpp"
#include "rc4hw/special.hpp"

// Bit-level statistical randomness tests. Each test maps one sample to a
// P-value in [0, 1]; values below the significance level mark the sample
// non-random for that test. The tests are statistically meaningful for
// samples of 100+ bits; shorter inputs are accepted so the worked
// mini-examples stay checkable.

namespace rc4hw {

struct PValue {
  double value = 0.0;
  std::string test_name;
  std::uint64_t sample_index = 0;
};

namespace detail {

inline std::uint64_t count_ones(const BitSample& s) {
  std::uint64_t ones = 0;
  const std::uint64_t whole = s.nbits / 8;
  for (std::uint64_t k = 0; k < whole; ++k) {
    ones += static_cast<unsigned>(std::popcount(s.octets[k]));
  }
  for (std::uint64_t k = whole * 8; k < s.nbits; ++k) ones += s.bit(k);
  return ones;
}

inline double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

// Cyclic m-bit window counts; every one of the n windows is counted.
inline std::vector<std::uint64_t> cyclic_pattern_counts(const BitSample& s,
                                                        int m) {
  if (m < 1 || m > 24) throw std::invalid_argument("pattern length out of range");
  if (static_cast<std::uint64_t>(m) > s.nbits) {
    throw std::invalid_argument("pattern longer than the sample");
  }
  const std::uint64_t n = s.nbits;
  const std::uint32_t mask = (1u << m) - 1u;
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  std::uint32_t window = 0;
  for (std::uint64_t k = 0; k + 1 < static_cast<std::uint64_t>(m); ++k) {
    window = (window << 1) | static_cast<std::uint32_t>(s.bit(k % n));
  }
  for (std::uint64_t start = 0; start < n; ++start) {
    const std::uint64_t k = start + static_cast<std::uint64_t>(m) - 1;
    window = ((window << 1) | static_cast<std::uint32_t>(s.bit(k % n))) & mask;
    ++counts[window];
  }
  return counts;
}

// Counts for length m-1 derived from length-m cyclic counts: each short
// window is the prefix of exactly one longer window.
inline std::vector<std::uint64_t> fold_counts(
    const std::vector<std::uint64_t>& counts) {
  std::vector<std::uint64_t> folded(counts.size() / 2, 0);
  for (std::size_t w = 0; w < folded.size(); ++w) {
    folded[w] = counts[2 * w] + counts[2 * w + 1];
  }
  return folded;
}

// psi^2_m = (2^m / n) * sum counts^2 - n; zero for m == 0.
inline double psi_squared(const std::vector<std::uint64_t>& counts,
                          std::uint64_t n) {
  std::uint64_t sum_sq = 0;
  for (std::uint64_t c : counts) sum_sq += c * c;
  return static_cast<double>(counts.size()) / static_cast<double>(n) *
             static_cast<double>(sum_sq) -
         static_cast<double>(n);
}

// phi_m = sum (c/n) ln(c/n) over cyclic m-bit pattern frequencies.
inline double pattern_entropy_phi(const std::vector<std::uint64_t>& counts,
                                  std::uint64_t n) {
  double phi = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / static_cast<double>(n);
    phi += f * std::log(f);
  }
  return phi;
}

}  // namespace detail

/// Monobit frequency test: P = erfc(|S_n| / sqrt(n) / sqrt(2)) where
/// S_n is the +/-1 bit sum.
inline PValue test_frequency(const BitSample& s) {
  if (s.nbits == 0) throw std::invalid_argument("empty sample");
  const double n = static_cast<double>(s.nbits);
  const double ones = static_cast<double>(detail::count_ones(s));
  const double sn = 2.0 * ones - n;
  const double p = erfc(std::fabs(sn) / std::sqrt(n) / std::sqrt(2.0));
  return {detail::clamp_p(p), "frequency", s.sample_index};
}

/// Block frequency test over N = floor(n/M) blocks, trailing bits
/// discarded: chi^2 = 4M sum (pi_i - 1/2)^2, P = igamc(N/2, chi^2/2).
inline PValue test_block_frequency(const BitSample& s, std::size_t block_len) {
  if (block_len < 2) throw std::invalid_argument("block length must be >= 2");
  if (block_len > s.nbits) {
    throw std::invalid_argument("block length exceeds the sample");
  }
  const std::uint64_t blocks = s.nbits / block_len;
  double sum = 0.0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::uint64_t ones = 0;
    for (std::uint64_t k = 0; k < block_len; ++k) {
      ones += s.bit(b * block_len + k);
    }
    const double v =
        static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
    sum += v * v;
  }
  const double chi2 = 4.0 * static_cast<double>(block_len) * sum;
  const double p = igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
  return {detail::clamp_p(p), "block_frequency", s.sample_index};
}

/// Runs test; the frequency pretest |pi - 1/2| >= 2/sqrt(n) yields P = 0
/// by definition.
inline PValue test_runs(const BitSample& s) {
  if (s.nbits == 0) throw std::invalid_argument("empty sample");
  const double n = static_cast<double>(s.nbits);
  const double pi = static_cast<double>(detail::count_ones(s)) / n;
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
    return {0.0, "runs", s.sample_index};
  }
  std::uint64_t runs = 1;
  for (std::uint64_t k = 0; k + 1 < s.nbits; ++k) {
    if (s.bit(k) != s.bit(k + 1)) ++runs;
  }
  const double v = static_cast<double>(runs);
  const double p = erfc(std::fabs(v - 2.0 * n * pi * (1.0 - pi)) /
                        (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
  return {detail::clamp_p(p), "runs", s.sample_index};
}

enum class CusumMode : std::uint8_t { Forward, Backward };

/// Cumulative sums test: z is the largest excursion of the +/-1 random
/// walk (walked backwards in Backward mode); P from the standard-normal
/// double sum.
inline PValue test_cusum(const BitSample& s, CusumMode mode) {
  if (s.nbits == 0) throw std::invalid_argument("empty sample");
  const std::uint64_t n = s.nbits;
  std::int64_t sum = 0;
  std::int64_t z = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t idx = mode == CusumMode::Forward ? k : n - 1 - k;
    sum += s.bit(idx) ? 1 : -1;
    z = std::max(z, sum < 0 ? -sum : sum);
  }
  const double zn = static_cast<double>(z) / std::sqrt(static_cast<double>(n));
  const double nz = static_cast<double>(n) / static_cast<double>(z);
  // Terms with both CDF arguments beyond ~10 sigma contribute nothing;
  // clip the index range accordingly.
  const std::int64_t clip =
      static_cast<std::int64_t>(std::ceil((10.0 / zn + 3.0) / 4.0)) + 1;
  const auto term_sum = [&](double lo_arg, std::int64_t hi, double offset_lo,
                            double offset_hi) {
    std::int64_t lo =
        static_cast<std::int64_t>(std::floor(lo_arg / 4.0));
    lo = std::max(lo, -clip);
    hi = std::min(hi, clip);
    double acc = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
      acc += normal_cdf((4.0 * static_cast<double>(k) + offset_hi) * zn) -
             normal_cdf((4.0 * static_cast<double>(k) + offset_lo) * zn);
    }
    return acc;
  };
  const std::int64_t hi = static_cast<std::int64_t>(std::floor((nz - 1.0) / 4.0));
  const double t1 = term_sum(-nz + 1.0, hi, -1.0, 1.0);
  const double t2 = term_sum(-nz - 3.0, hi, 1.0, 3.0);
  return {detail::clamp_p(1.0 - t1 + t2), "cumulative_sums", s.sample_index};
}

/// Serial test with cyclic pattern counting; two P-values from the first
/// and second psi^2 differences.
inline std::pair<PValue, PValue> test_serial(const BitSample& s, int m) {
  if (m < 2) throw std::invalid_argument("serial test needs m >= 2");
  const std::uint64_t n = s.nbits;
  const auto counts_m = detail::cyclic_pattern_counts(s, m);
  const auto counts_m1 = detail::fold_counts(counts_m);
  const double psi_m = detail::psi_squared(counts_m, n);
  const double psi_m1 = detail::psi_squared(counts_m1, n);
  const double psi_m2 =
      m >= 3 ? detail::psi_squared(detail::fold_counts(counts_m1), n) : 0.0;
  const double d1 = std::max(0.0, psi_m - psi_m1);
  const double d2 = std::max(0.0, psi_m - 2.0 * psi_m1 + psi_m2);
  const double p1 = igamc(std::ldexp(1.0, m - 2), d1 / 2.0);
  const double p2 = igamc(std::ldexp(1.0, m - 3), d2 / 2.0);
  return {PValue{detail::clamp_p(p1), "serial", s.sample_index},
          PValue{detail::clamp_p(p2), "serial", s.sample_index}};
}

/// Approximate entropy test with cyclic counting: chi^2 = 2n(ln 2 - ApEn)
/// with ApEn = phi_m - phi_{m+1}.
inline PValue test_apen(const BitSample& s, int m) {
  if (m < 1) throw std::invalid_argument("approximate entropy needs m >= 1");
  const std::uint64_t n = s.nbits;
  const auto counts_m1 = detail::cyclic_pattern_counts(s, m + 1);
  const auto counts_m = detail::fold_counts(counts_m1);
  const double apen = detail::pattern_entropy_phi(counts_m, n) -
                      detail::pattern_entropy_phi(counts_m1, n);
  const double chi2 =
      std::max(0.0, 2.0 * static_cast<double>(n) * (std::log(2.0) - apen));
  const double p = igamc(std::ldexp(1.0, m - 1), chi2 / 2.0);
  return {detail::clamp_p(p), "approximate_entropy", s.sample_index};
}

}  // namespace rc4hw
