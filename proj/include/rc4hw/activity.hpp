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

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "rc4hw/hw_model.hpp"
#include "rc4hw/rational.hpp"
#include "rc4hw/rc4.hpp"

// Switching-activity accounting over engine runs. With gating the
// scheduler clock is enabled for the first 257 cycles only and the
// generator clock for the remaining n + 1; without gating both nets
// toggle for the whole run. Gating changes which nets toggle, never the
// computed data, so register writes are identical across modes. Counts
// are the software proxy for dynamic power; no wattage is modeled.

namespace rc4hw {

enum class GatingMode : std::uint8_t { Ungated, Gated };

/// Toggle and write counters for one full run (schedule + n bytes).
/// A clock net toggles twice per enabled cycle. register_writes counts
/// S-box cell writes from swap commits (2 each, 1 when aliased) plus one
/// per j-register update and one per counter advance.
struct ActivityReport {
  GatingMode mode = GatingMode::Ungated;
  std::uint64_t n_bytes = 0;
  std::uint64_t ksa_clock_toggles = 0;
  std::uint64_t prga_clock_toggles = 0;
  std::uint64_t register_writes = 0;
  std::uint64_t latch_loads = 0;
  std::uint64_t total_toggles = 0;
};

struct GatingComparison {
  ActivityReport ungated;
  ActivityReport gated;
  /// 1 - gated/ungated over total_toggles; in (0, 1/2).
  Rational toggle_saving_fraction;
  /// 1 - gated/ungated over clock-net toggles alone; exactly 1/2.
  Rational clock_net_saving_fraction;
};

/// Run the engine for n bytes and account the switching activity under
/// the given mode. When keystream_out is non-null the emitted bytes are
/// stored there (gating never alters them).
inline ActivityReport simulate_activity(const Rc4Key& key, std::uint64_t n,
                                        GatingMode mode,
                                        std::vector<std::uint8_t>* keystream_out =
                                            nullptr) {
  if (n == 0) {
    throw std::invalid_argument("activity run needs n >= 1 bytes");
  }
  Rc4Hardware hw(key);
  hw.run_ksa();
  std::vector<std::uint8_t> bytes = hw.run_prga(n);
  if (keystream_out) *keystream_out = std::move(bytes);

  ActivityReport rep;
  rep.mode = mode;
  rep.n_bytes = n;
  const std::uint64_t total_cycles = hw.ksa_clocks() + hw.prga_clocks();
  if (mode == GatingMode::Ungated) {
    // Both nets free-running for the whole computation.
    rep.ksa_clock_toggles = 2 * total_cycles;
    rep.prga_clock_toggles = 2 * total_cycles;
  } else {
    rep.ksa_clock_toggles = 2 * hw.ksa_clocks();
    rep.prga_clock_toggles = 2 * hw.prga_clocks();
  }
  rep.register_writes =
      hw.swap_writes() + hw.j_updates() + hw.counter_advances();
  rep.latch_loads = hw.latch_loads();
  rep.total_toggles = rep.ksa_clock_toggles + rep.prga_clock_toggles +
                      rep.register_writes + rep.latch_loads;
  return rep;
}

inline GatingComparison compare_gating(const Rc4Key& key, std::uint64_t n) {
  GatingComparison cmp;
  cmp.ungated = simulate_activity(key, n, GatingMode::Ungated);
  cmp.gated = simulate_activity(key, n, GatingMode::Gated);
  cmp.toggle_saving_fraction =
      Rational(cmp.ungated.total_toggles - cmp.gated.total_toggles,
               cmp.ungated.total_toggles);
  const std::uint64_t ungated_clock =
      cmp.ungated.ksa_clock_toggles + cmp.ungated.prga_clock_toggles;
  const std::uint64_t gated_clock =
      cmp.gated.ksa_clock_toggles + cmp.gated.prga_clock_toggles;
  cmp.clock_net_saving_fraction =
      Rational(ungated_clock - gated_clock, ungated_clock);
  return cmp;
}

inline void write_activity_table(std::ostream& os, const GatingComparison& cmp) {
  char line[96];
  std::snprintf(line, sizeof line, "%-20s %12s %12s", "counter", "ungated",
                "gated");
  os << line << '\n';
  const auto row = [&](const char* name, std::uint64_t u, std::uint64_t g) {
    std::snprintf(line, sizeof line, "%-20s %12llu %12llu", name,
                  static_cast<unsigned long long>(u),
                  static_cast<unsigned long long>(g));
    os << line << '\n';
  };
  row("ksa_clock_toggles", cmp.ungated.ksa_clock_toggles,
      cmp.gated.ksa_clock_toggles);
  row("prga_clock_toggles", cmp.ungated.prga_clock_toggles,
      cmp.gated.prga_clock_toggles);
  row("register_writes", cmp.ungated.register_writes,
      cmp.gated.register_writes);
  row("latch_loads", cmp.ungated.latch_loads, cmp.gated.latch_loads);
  row("total_toggles", cmp.ungated.total_toggles, cmp.gated.total_toggles);
  os << "toggle_saving_fraction=" << cmp.toggle_saving_fraction.str() << '\n';
  os << "clock_net_saving_fraction=" << cmp.clock_net_saving_fraction.str()
     << '\n';
}

inline void write_activity_csv(std::ostream& os, const GatingComparison& cmp) {
  os << "counter,ungated,gated\n";
  os << "ksa_clock_toggles," << cmp.ungated.ksa_clock_toggles << ','
     << cmp.gated.ksa_clock_toggles << '\n';
  os << "prga_clock_toggles," << cmp.ungated.prga_clock_toggles << ','
     << cmp.gated.prga_clock_toggles << '\n';
  os << "register_writes," << cmp.ungated.register_writes << ','
     << cmp.gated.register_writes << '\n';
  os << "latch_loads," << cmp.ungated.latch_loads << ','
     << cmp.gated.latch_loads << '\n';
  os << "total_toggles," << cmp.ungated.total_toggles << ','
     << cmp.gated.total_toggles << '\n';
}

}  // namespace rc4hw
