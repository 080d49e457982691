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
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rc4hw/rational.hpp"
#include "rc4hw/rc4.hpp"

// Dual-edge model of the one-byte-per-clock RC4 datapath. Each clock
// cycle splits into two events: the falling edge reads S[i] and S[j]
// into the hold flip-flops (and advances the index registers), the next
// rising edge writes the held values back crosswise, which is the swap.
// The key stream byte comes out on the same rising edge through a final
// S-box lookup. The model tracks the schedule and the exact clock
// counts; it is an event simulator, not a netlist.

namespace rc4hw {

/// Raised when the two-phase latch/commit protocol is violated (commit
/// without a latch, stepping the generator before scheduling finished).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ClockPhase : std::uint8_t { Rising, Falling };
enum class HwUnit : std::uint8_t { Ksa, Prga };

/// One clock-edge record.
struct HwTraceEvent {
  std::uint64_t clock = 0;
  ClockPhase phase = ClockPhase::Rising;
  HwUnit unit = HwUnit::Ksa;
  std::uint8_t i = 0;
  std::uint8_t j = 0;
  std::uint8_t s_i = 0;  // held S[i]
  std::uint8_t s_j = 0;  // held S[j]
  std::optional<std::uint8_t> z;  // key stream byte, rising edges only
  bool swapped = false;
};

/// The shared storage block: the 256-cell register bank plus the two
/// D flip-flops that hold S[i] and S[j] between the edges.
class RegisterBank {
 public:
  RegisterBank() { fill_identity(); }

  void fill_identity() {
    for (unsigned k = 0; k < 256; ++k) cells_[k] = static_cast<std::uint8_t>(k);
  }

  /// Falling edge: read cells i and j into the hold flip-flops.
  std::pair<std::uint8_t, std::uint8_t> latch(std::uint8_t i, std::uint8_t j) {
    latch_i_ = cells_[i];
    latch_j_ = cells_[j];
    pending_ = true;
    pend_i_ = i;
    pend_j_ = j;
    latch_loads_ += 2;
    return {latch_i_, latch_j_};
  }

  /// Rising edge: write the held values back crosswise (held S[i] to
  /// cell j and held S[j] to cell i), completing the swap.
  void commit(std::uint8_t i, std::uint8_t j) {
    if (!pending_ || i != pend_i_ || j != pend_j_) {
      throw ProtocolError("commit without a matching latch in this cycle");
    }
    cells_[j] = latch_i_;
    cells_[i] = latch_j_;
    writes_ += (i == j) ? 1 : 2;
    pending_ = false;
  }

  const SBox& cells() const { return cells_; }
  std::uint8_t latch_i() const { return latch_i_; }
  std::uint8_t latch_j() const { return latch_j_; }
  bool pending() const { return pending_; }
  std::uint64_t writes() const { return writes_; }
  std::uint64_t latch_loads() const { return latch_loads_; }

 private:
  SBox cells_{};
  std::uint8_t latch_i_ = 0;
  std::uint8_t latch_j_ = 0;
  std::uint8_t pend_i_ = 0;
  std::uint8_t pend_j_ = 0;
  bool pending_ = false;
  std::uint64_t writes_ = 0;
  std::uint64_t latch_loads_ = 0;
};

/// The generator-side index counter: first value 1, up to 255, then
/// 0..255 repeating.
class ModCounter {
 public:
  std::uint8_t advance() {
    value_ = started_ ? static_cast<std::uint8_t>(value_ + 1) : 1;
    started_ = true;
    return value_;
  }

  std::uint8_t value() const { return value_; }
  bool started() const { return started_; }

 private:
  std::uint8_t value_ = 0;
  bool started_ = false;
};

/// Clock-count accounting for one full run (scheduling then n bytes).
struct CycleReport {
  std::uint64_t ksa_clocks = 0;
  std::uint64_t prga_clocks = 0;
  std::uint64_t total_clocks = 0;
  std::uint64_t bytes = 0;
  Rational prga_per_byte;
  Rational rc4_per_byte;
};

/// One RC4 engine instance: a register bank shared by the scheduling
/// unit and the generator unit, each driven by its own clock domain.
/// Strictly single-threaded and deterministic.
class Rc4Hardware {
 public:
  explicit Rc4Hardware(const Rc4Key& key) : key_array_(expand_key(key)) {}

  // --- scheduling (KSA) clock domain ---------------------------------

  /// Advance the KSA clock by one edge and return the event. Clock 0's
  /// rising edge runs the initialization module (identity fill, key
  /// array load, j := 0); every falling edge computes the next j with
  /// the 3-input adder and latches; every later rising edge commits the
  /// swap. One initial clock plus 256 iteration clocks; edges beyond
  /// completion are idle.
  HwTraceEvent ksa_edge() {
    HwTraceEvent ev;
    ev.unit = HwUnit::Ksa;
    ev.clock = ksa_clock_;
    ev.phase = ksa_phase_;
    if (ksa_phase_ == ClockPhase::Rising) {
      if (ksa_clock_ == 0) {
        bank_.fill_identity();
        ksa_j_ = 0;
        ++j_updates_;
        ++ksa_clocks_;
        ev.i = 0;
        ev.j = 0;
      } else if (ksa_commits_ < 256) {
        const std::uint8_t i = static_cast<std::uint8_t>(ksa_commits_);
        bank_.commit(i, ksa_j_);
        ++ksa_commits_;
        ++ksa_clocks_;
        ev.i = i;
        ev.j = ksa_j_;
        ev.swapped = true;
      } else {
        ev.i = 255;  // idle; unit already finished
        ev.j = ksa_j_;
      }
      ksa_phase_ = ClockPhase::Falling;
    } else {
      if (ksa_iter_ < 256) {
        const std::uint8_t i = static_cast<std::uint8_t>(ksa_iter_);
        ++counter_advances_;
        ksa_j_ = static_cast<std::uint8_t>(ksa_j_ + bank_.cells()[i] +
                                           key_array_[i]);
        ++j_updates_;
        bank_.latch(i, ksa_j_);
        ++ksa_iter_;
        ev.i = i;
        ev.j = ksa_j_;
      } else {
        ev.i = 255;
        ev.j = ksa_j_;
      }
      ksa_phase_ = ClockPhase::Rising;
      ++ksa_clock_;
    }
    ev.s_i = bank_.latch_i();
    ev.s_j = bank_.latch_j();
    return ev;
  }

  bool ksa_done() const { return ksa_commits_ == 256; }
  std::uint64_t ksa_clocks() const { return ksa_clocks_; }

  /// Run the scheduler to completion; returns the clock count (257).
  std::uint64_t run_ksa() {
    while (!ksa_done()) ksa_edge();
    return ksa_clocks_;
  }

  // --- generator (PRGA) clock domain ----------------------------------

  /// Advance the PRGA clock by one edge. Clock 0's rising edge sets
  /// j := 0; each falling edge advances the counter, adds S[i] into j
  /// and latches; each later rising edge commits the swap and emits the
  /// key stream byte through the output lookup.
  HwTraceEvent prga_edge() {
    if (!ksa_done()) {
      throw ProtocolError("generator stepped before scheduling finished");
    }
    HwTraceEvent ev;
    ev.unit = HwUnit::Prga;
    ev.clock = prga_clock_;
    ev.phase = prga_phase_;
    if (prga_phase_ == ClockPhase::Rising) {
      if (prga_clock_ == 0) {
        prga_j_ = 0;
        ++j_updates_;
        ev.i = counter_.value();
        ev.j = prga_j_;
      } else {
        bank_.commit(counter_.value(), prga_j_);
        const std::uint8_t t =
            static_cast<std::uint8_t>(bank_.latch_i() + bank_.latch_j());
        last_z_ = bank_.cells()[t];  // post-swap read
        ++bytes_emitted_;
        ev.i = counter_.value();
        ev.j = prga_j_;
        ev.z = last_z_;
        ev.swapped = true;
      }
      ++prga_clocks_;
      prga_phase_ = ClockPhase::Falling;
    } else {
      const std::uint8_t i = counter_.advance();
      ++counter_advances_;
      prga_j_ = static_cast<std::uint8_t>(prga_j_ + bank_.cells()[i]);
      ++j_updates_;
      bank_.latch(i, prga_j_);
      ev.i = i;
      ev.j = prga_j_;
      prga_phase_ = ClockPhase::Rising;
      ++prga_clock_;
    }
    ev.s_i = bank_.latch_i();
    ev.s_j = bank_.latch_j();
    return ev;
  }

  /// One full generator step: the falling edge that latches and the
  /// rising edge that commits and emits. The initial rising edge of
  /// clock 0 is consumed transparently by the first step. Must be called
  /// at a step boundary; with a commit pending from a stray edge the
  /// pair could not be formed coherently.
  std::pair<HwTraceEvent, HwTraceEvent> prga_step() {
    if (prga_phase_ == ClockPhase::Rising) {
      if (prga_clock_ != 0) {
        throw ProtocolError("generator step out of phase with the clock");
      }
      prga_edge();
    }
    HwTraceEvent falling = prga_edge();
    HwTraceEvent rising = prga_edge();
    return {falling, rising};
  }

  /// Emit exactly one key stream byte, from any edge alignment.
  std::uint8_t next_byte() {
    for (;;) {
      const HwTraceEvent ev = prga_edge();
      if (ev.z) return *ev.z;
    }
  }

  /// Emit n bytes. The returned value is the key stream; the PRGA clock
  /// count is available from prga_clocks() and equals n + 1 when the
  /// generator starts fresh.
  std::vector<std::uint8_t> run_prga(std::uint64_t n) {
    if (n == 0) {
      throw std::invalid_argument("generator run needs n >= 1 bytes");
    }
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = next_byte();
    return out;
  }

  std::uint64_t prga_clocks() const { return prga_clocks_; }
  std::uint64_t bytes_emitted() const { return bytes_emitted_; }
  const SBox& sbox() const { return bank_.cells(); }
  const RegisterBank& bank() const { return bank_; }

  // --- switching-activity counters ------------------------------------

  /// Register-bank cell writes from swap commits (2 each, 1 when the
  /// indices alias).
  std::uint64_t swap_writes() const { return bank_.writes(); }
  /// Flip-flop loads from falling-edge reads (2 per latch).
  std::uint64_t latch_loads() const { return bank_.latch_loads(); }
  std::uint64_t j_updates() const { return j_updates_; }
  std::uint64_t counter_advances() const { return counter_advances_; }

 private:
  RegisterBank bank_;
  KeyArray key_array_;

  std::uint8_t ksa_j_ = 0;
  unsigned ksa_iter_ = 0;     // next i to latch
  unsigned ksa_commits_ = 0;  // swaps committed
  std::uint64_t ksa_clock_ = 0;
  ClockPhase ksa_phase_ = ClockPhase::Rising;
  std::uint64_t ksa_clocks_ = 0;

  ModCounter counter_;
  std::uint8_t prga_j_ = 0;
  std::uint64_t prga_clock_ = 0;
  ClockPhase prga_phase_ = ClockPhase::Rising;
  std::uint64_t prga_clocks_ = 0;
  std::uint64_t bytes_emitted_ = 0;
  std::uint8_t last_z_ = 0;

  std::uint64_t j_updates_ = 0;
  std::uint64_t counter_advances_ = 0;
};

struct KsaResult {
  SBox sbox;
  std::uint64_t clocks = 0;
};

/// Run scheduling alone on a fresh engine; 257 clocks, S-box identical
/// to the reference key schedule.
inline KsaResult ksa_run(const Rc4Key& key) {
  Rc4Hardware hw(key);
  const std::uint64_t clocks = hw.run_ksa();
  return {hw.sbox(), clocks};
}

struct PrgaResult {
  std::vector<std::uint8_t> bytes;
  std::uint64_t clocks = 0;
};

/// Schedule then emit n bytes on a fresh engine; n + 1 generator clocks.
inline PrgaResult prga_run(const Rc4Key& key, std::uint64_t n) {
  Rc4Hardware hw(key);
  hw.run_ksa();
  PrgaResult res;
  res.bytes = hw.run_prga(n);
  res.clocks = hw.prga_clocks();
  return res;
}

struct HwEncryptResult {
  std::vector<std::uint8_t> ciphertext;
  CycleReport report;
};

/// Full run: schedule, generate len(data) bytes, XOR. The report carries
/// the exact clock accounting.
inline HwEncryptResult rc4_hw_encrypt(const Rc4Key& key,
                                      std::span<const std::uint8_t> data) {
  if (data.empty()) {
    throw std::invalid_argument("hardware encrypt needs at least 1 byte");
  }
  Rc4Hardware hw(key);
  hw.run_ksa();
  HwEncryptResult res;
  res.ciphertext.resize(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    res.ciphertext[k] = static_cast<std::uint8_t>(data[k] ^ hw.next_byte());
  }
  const std::uint64_t n = data.size();
  res.report.ksa_clocks = hw.ksa_clocks();
  res.report.prga_clocks = hw.prga_clocks();
  res.report.total_clocks = res.report.ksa_clocks + res.report.prga_clocks;
  res.report.bytes = n;
  res.report.prga_per_byte = Rational(res.report.prga_clocks, n);
  res.report.rc4_per_byte = Rational(res.report.total_clocks, n);
  return res;
}

/// Step one clock domain for max_clocks cycles and return the ordered
/// edge events, two per clock, rising first within each clock.
inline std::vector<HwTraceEvent> trace_collect(Rc4Hardware& hw, HwUnit unit,
                                               std::uint64_t max_clocks) {
  std::vector<HwTraceEvent> events;
  events.reserve(2 * max_clocks);
  for (std::uint64_t c = 0; c < 2 * max_clocks; ++c) {
    events.push_back(unit == HwUnit::Ksa ? hw.ksa_edge() : hw.prga_edge());
  }
  return events;
}

/// One event per line, tab separated:
/// clock phase unit i j s_i s_j z swapped
/// with z as two lowercase hex digits or "-" when absent.
inline std::string format_trace_event(const HwTraceEvent& ev) {
  char z[3] = "-";
  if (ev.z) std::snprintf(z, sizeof z, "%02x", *ev.z);
  char line[96];
  std::snprintf(line, sizeof line, "%llu\t%s\t%s\t%u\t%u\t%u\t%u\t%s\t%u",
                static_cast<unsigned long long>(ev.clock),
                ev.phase == ClockPhase::Rising ? "rising" : "falling",
                ev.unit == HwUnit::Ksa ? "ksa" : "prga", ev.i, ev.j, ev.s_i,
                ev.s_j, z, ev.swapped ? 1u : 0u);
  return line;
}

inline void write_trace(std::ostream& os, std::span<const HwTraceEvent> events) {
  for (const auto& ev : events) os << format_trace_event(ev) << '\n';
}

}  // namespace rc4hw
