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

#include "rc4hw/meta.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace rc4hw {
namespace {

std::vector<PValue> values(std::initializer_list<double> vs) {
  std::vector<PValue> out;
  std::uint64_t index = 0;
  for (double v : vs) out.push_back({v, "test", index++});
  return out;
}

// Rebuild a P-value list whose 10-bin histogram matches the given counts
// by placing values at the bin centres.
std::vector<PValue> from_bin_counts(const std::vector<std::uint64_t>& counts) {
  std::vector<PValue> out;
  std::uint64_t index = 0;
  for (std::size_t bin = 0; bin < counts.size(); ++bin) {
    for (std::uint64_t k = 0; k < counts[bin]; ++k) {
      out.push_back({bin / 10.0 + 0.05, "test", index++});
    }
  }
  return out;
}

TEST(ExpectedLower, FrozenBounds) {
  EXPECT_NEAR(expected_lower_bound(0.01, 300), 0.972766, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 600), 0.977814, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 2400), 0.983907, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 5400), 0.985938, 1e-6);
}

TEST(ExpectedLower, StrictlyIncreasingInM) {
  double prev = 0.0;
  for (std::size_t m : {100u, 300u, 600u, 2400u, 5400u, 100000u}) {
    const double lo = expected_lower_bound(0.01, m);
    EXPECT_GT(lo, prev);
    prev = lo;
  }
}

TEST(Proportion, SixFailuresOfThreeHundred) {
  std::vector<PValue> pv;
  for (int k = 0; k < 294; ++k) pv.push_back({0.5, "t", 0});
  for (int k = 0; k < 6; ++k) pv.push_back({0.005, "t", 0});
  const ProportionReport rep = proportion_of_passing(pv);
  EXPECT_EQ(rep.m, 300u);
  EXPECT_EQ(rep.failures, 6u);
  EXPECT_DOUBLE_EQ(rep.observed, 0.98);
  EXPECT_NEAR(rep.expected_lower, 0.972766, 1e-6);
  EXPECT_TRUE(rep.passed);
}

TEST(Proportion, BoundaryAtAlpha) {
  // exactly alpha is a pass; just below is a failure
  const auto rep = proportion_of_passing(values({0.01, 0.0099999}));
  EXPECT_EQ(rep.failures, 1u);
}

TEST(Proportion, Errors) {
  EXPECT_THROW(proportion_of_passing({}), std::invalid_argument);
  EXPECT_THROW(proportion_of_passing(values({0.5}), 0.0),
               std::invalid_argument);
}

TEST(Uniformity, PaperRowOne) {
  const auto pv = from_bin_counts({30, 29, 33, 39, 26, 36, 32, 24, 24, 27});
  const UniformityReport rep = pvalue_uniformity(pv);
  EXPECT_NEAR(rep.chi_square, 7.6, 1e-12);
  EXPECT_NEAR(rep.pop, 0.574903423864456, 1e-12);
  EXPECT_NEAR(rep.pop, 0.574443, 2e-3);  // published counterpart
  EXPECT_TRUE(rep.uniform);
}

TEST(Uniformity, PaperRowTwo) {
  const auto pv = from_bin_counts({28, 31, 31, 33, 32, 31, 27, 26, 25, 36});
  const UniformityReport rep = pvalue_uniformity(pv);
  EXPECT_NEAR(rep.chi_square, 106.0 / 30.0, 1e-12);
  EXPECT_NEAR(rep.pop, 0.939364395677810, 1e-12);
  EXPECT_NEAR(rep.pop, 0.939359, 2e-3);  // published counterpart
  EXPECT_TRUE(rep.uniform);
}

TEST(Uniformity, PerfectlyUniformBins) {
  const auto pv = from_bin_counts({30, 30, 30, 30, 30, 30, 30, 30, 30, 30});
  const UniformityReport rep = pvalue_uniformity(pv);
  EXPECT_EQ(rep.chi_square, 0.0);
  EXPECT_EQ(rep.pop, 1.0);
  EXPECT_TRUE(rep.uniform);
}

TEST(Uniformity, ConcentratedMassIsNonUniform) {
  std::vector<PValue> pv(300, PValue{0.55, "t", 0});
  const UniformityReport rep = pvalue_uniformity(pv);
  EXPECT_FALSE(rep.uniform);
  EXPECT_LT(rep.pop, 1e-4);
}

TEST(Uniformity, TopBinIncludesOne) {
  const auto rep = pvalue_uniformity(values({1.0, 0.95, 0.91}));
  EXPECT_EQ(rep.bin_counts[9], 3u);
}

TEST(Histogram, EmptyInput) {
  const auto bins = histogram_ranges({});
  for (auto c : bins) EXPECT_EQ(c, 0u);
}

TEST(Histogram, SingleSmallValue) {
  const auto bins = histogram_ranges(values({0.005}));
  EXPECT_EQ(bins[0], 1u);
  for (std::size_t k = 1; k < bins.size(); ++k) EXPECT_EQ(bins[k], 0u);
}

TEST(Histogram, BoundaryRule) {
  const auto bins = histogram_ranges(values({0.01, 0.1, 0.9, 1.0, 0.0}));
  EXPECT_EQ(bins[0], 1u);   // 0.0
  EXPECT_EQ(bins[1], 1u);   // 0.01 enters [.01,.1)
  EXPECT_EQ(bins[2], 1u);   // 0.1 enters [.1,.2)
  EXPECT_EQ(bins[10], 2u);  // 0.9 and 1.0 both in [.9,1]
}

TEST(Histogram, PartitionsInput) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<PValue> pv;
  for (int k = 0; k < 1000; ++k) pv.push_back({dist(rng), "t", 0});
  const auto bins = histogram_ranges(pv);
  std::uint64_t total = 0;
  for (auto c : bins) total += c;
  EXPECT_EQ(total, pv.size());
  // first two 11-range bins merge to the first uniformity bin
  const auto uni = pvalue_uniformity(pv);
  EXPECT_EQ(bins[0] + bins[1], uni.bin_counts[0]);
}

}  // namespace
}  // namespace rc4hw
