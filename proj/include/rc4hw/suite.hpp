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
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rc4hw/bitsample.hpp"
#include "rc4hw/meta.hpp"
#include "rc4hw/parallel.hpp"
#include "rc4hw/sts.hpp"

namespace rc4hw {

struct SuiteConfig {
  std::size_t block_len = 128;  // block frequency M
  int serial_m = 16;
  int apen_m = 10;
  double alpha = 0.01;
};

struct TestReport {
  std::string name;
  std::vector<PValue> pvalues;  // pooled over samples, sample order
  ProportionReport proportion;
  UniformityReport uniformity;
  std::array<std::uint64_t, 11> histogram{};
};

struct SuiteReport {
  std::size_t samples = 0;
  std::uint64_t bits_per_sample = 0;
  SuiteConfig config;
  std::vector<TestReport> tests;

  bool all_passed() const {
    for (const auto& t : tests) {
      if (!t.proportion.passed || !t.uniformity.uniform) return false;
    }
    return true;
  }
};

/// Parse externally produced P-values, one `test_name,sample_index,p_value`
/// per line. Lets results of tests not built in here join the report.
inline std::map<std::string, std::vector<PValue>> read_pvalue_lines(
    std::istream& in) {
  std::map<std::string, std::vector<PValue>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name, index_str, value_str;
    if (!std::getline(fields, name, ',') ||
        !std::getline(fields, index_str, ',') ||
        !std::getline(fields, value_str)) {
      throw std::runtime_error("malformed P-value line " +
                               std::to_string(lineno));
    }
    PValue p;
    p.test_name = name;
    try {
      p.sample_index = std::stoull(index_str);
      p.value = std::stod(value_str);
    } catch (const std::exception&) {
      throw std::runtime_error("non-numeric P-value field on line " +
                               std::to_string(lineno));
    }
    if (p.value < 0.0 || p.value > 1.0) {
      throw std::runtime_error("P-value out of [0,1] on line " +
                               std::to_string(lineno));
    }
    out[name].push_back(std::move(p));
  }
  return out;
}

/// Run the built-in battery over every sample, pool P-values per test,
/// and attach the meta-statistics. Two-P-value tests pool 2m values and
/// get the matching lower bound.
inline SuiteReport run_suite(
    const std::vector<BitSample>& corpus, const SuiteConfig& config = {},
    const std::map<std::string, std::vector<PValue>>& external = {}) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  for (const auto& s : corpus) {
    if (s.nbits < 100) {
      throw std::invalid_argument("sample shorter than 100 bits");
    }
  }

  SuiteReport report;
  report.samples = corpus.size();
  report.bits_per_sample = corpus.front().nbits;
  report.config = config;

  // one result slot per sample; parallel scheduling cannot reorder them
  std::vector<std::array<PValue, 8>> slots(corpus.size());
  detail::parallel_for_index(corpus.size(), [&](std::size_t s) {
    const BitSample& sample = corpus[s];
    auto& slot = slots[s];
    slot[0] = test_frequency(sample);
    slot[1] = test_block_frequency(sample, config.block_len);
    slot[2] = test_runs(sample);
    slot[3] = test_cusum(sample, CusumMode::Forward);
    slot[4] = test_cusum(sample, CusumMode::Backward);
    auto [p1, p2] = test_serial(sample, config.serial_m);
    slot[5] = std::move(p1);
    slot[6] = std::move(p2);
    slot[7] = test_apen(sample, config.apen_m);
  });

  const char* order[] = {"frequency",        "block_frequency", "runs",
                         "cumulative_sums",  "serial",          "approximate_entropy"};
  std::map<std::string, std::vector<PValue>> pooled;
  for (const auto& slot : slots) {
    pooled["frequency"].push_back(slot[0]);
    pooled["block_frequency"].push_back(slot[1]);
    pooled["runs"].push_back(slot[2]);
    pooled["cumulative_sums"].push_back(slot[3]);
    pooled["cumulative_sums"].push_back(slot[4]);
    pooled["serial"].push_back(slot[5]);
    pooled["serial"].push_back(slot[6]);
    pooled["approximate_entropy"].push_back(slot[7]);
  }

  const auto finish = [&](std::string name, std::vector<PValue> pvalues) {
    TestReport t;
    t.name = std::move(name);
    t.proportion = proportion_of_passing(pvalues, config.alpha);
    t.uniformity = pvalue_uniformity(pvalues);
    t.histogram = histogram_ranges(pvalues);
    t.pvalues = std::move(pvalues);
    report.tests.push_back(std::move(t));
  };

  for (const char* name : order) finish(name, std::move(pooled[name]));
  for (const auto& [name, pvalues] : external) finish(name, pvalues);
  return report;
}

/// Plain-text report: one row per test with the proportion and
/// uniformity verdicts, then the 11-range P-value histogram block.
inline void write_suite_report(std::ostream& os, const SuiteReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "samples=%zu bits_per_sample=%llu alpha=%g",
                report.samples,
                static_cast<unsigned long long>(report.bits_per_sample),
                report.config.alpha);
  os << line << '\n';
  std::snprintf(line, sizeof line, "%-22s %8s %9s %9s %-11s %-13s %s", "test",
                "pvalues", "expected", "observed", "proportion", "pop",
                "distribution");
  os << line << '\n';
  for (const auto& t : report.tests) {
    std::snprintf(line, sizeof line, "%-22s %8zu %9.6f %9.6f %-11s %.6e %s",
                  t.name.c_str(), t.proportion.m, t.proportion.expected_lower,
                  t.proportion.observed, t.proportion.passed ? "pass" : "fail",
                  t.uniformity.pop, t.uniformity.uniform ? "uniform" : "non-uniform");
    os << line << '\n';
  }
  os << "summary=" << (report.all_passed() ? "pass" : "fail") << "\n\n";

  static const char* bin_names[] = {"0-.01", ".01-.1", ".1-.2", ".2-.3",
                                    ".3-.4", ".4-.5",  ".5-.6", ".6-.7",
                                    ".7-.8", ".8-.9",  ".9-1"};
  os << "histogram of P-values per range\n";
  std::snprintf(line, sizeof line, "%-22s", "test");
  os << line;
  for (const char* b : bin_names) {
    std::snprintf(line, sizeof line, " %6s", b);
    os << line;
  }
  os << '\n';
  for (const auto& t : report.tests) {
    std::snprintf(line, sizeof line, "%-22s", t.name.c_str());
    os << line;
    for (std::uint64_t count : t.histogram) {
      std::snprintf(line, sizeof line, " %6llu",
                    static_cast<unsigned long long>(count));
      os << line;
    }
    os << '\n';
  }
}

}  // namespace rc4hw
