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

// End-to-end acceptance suite. Each test is one numbered criterion and
// prints a single PASS/FAIL line through the listener installed in main.

#include <gtest/gtest.h>

#include <cstdio>
#include <future>
#include <random>
#include <sstream>

#include "oracle_rc4.hpp"
#include "rc4hw/activity.hpp"
#include "rc4hw/bitsample.hpp"
#include "rc4hw/hex.hpp"
#include "rc4hw/hw_model.hpp"
#include "rc4hw/meta.hpp"
#include "rc4hw/rc4.hpp"
#include "rc4hw/special.hpp"
#include "rc4hw/suite.hpp"
#include "rc4hw/transport.hpp"

namespace rc4hw {
namespace {

std::vector<std::uint8_t> random_key_bytes(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(5, 16);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(len(rng)));
  for (auto& b : bytes) b = static_cast<std::uint8_t>(byte(rng));
  return bytes;
}

TEST(Acceptance, C1_ClockCountReproduction) {
  const Rc4Key key = Rc4Key::from_text("Key");
  EXPECT_EQ(ksa_run(key).clocks, 257u);
  for (const std::uint64_t n : {1ull, 2ull, 255ull, 256ull, 1000ull}) {
    EXPECT_EQ(prga_run(key, n).clocks, n + 1) << n;
    const std::vector<std::uint8_t> data(n, 0x5A);
    const CycleReport rep = rc4_hw_encrypt(key, data).report;
    EXPECT_EQ(rep.ksa_clocks, 257u);
    EXPECT_EQ(rep.prga_clocks, n + 1);
    EXPECT_EQ(rep.total_clocks, 258 + n);
    EXPECT_EQ(rep.prga_per_byte, Rational(n + 1, n)) << n;
    EXPECT_EQ(rep.rc4_per_byte, Rational(258 + n, n)) << n;
  }
}

TEST(Acceptance, C2_OracleEquivalence) {
  std::mt19937_64 rng(0x52433453);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto key_bytes = random_key_bytes(rng);
    const Rc4Key key(key_bytes);
    Rc4Hardware hw(key);
    hw.run_ksa();
    ASSERT_EQ(hw.run_prga(512), keystream(key, 512)) << "trial " << trial;
  }
  // lockstep (i, j, z) comparison against the reference state machine
  std::mt19937_64 rng2(0x4B6579);
  for (int trial = 0; trial < 100; ++trial) {
    const Rc4Key key(random_key_bytes(rng2));
    Rc4Hardware hw(key);
    hw.run_ksa();
    Rc4State ref = ksa(key);
    for (int step = 0; step < 512; ++step) {
      const auto [falling, rising] = hw.prga_step();
      const std::uint8_t z = prga_next(ref);
      ASSERT_EQ(falling.i, ref.i);
      ASSERT_EQ(falling.j, ref.j);
      ASSERT_EQ(*rising.z, z);
    }
  }
}

TEST(Acceptance, C3_KnownVectorChecks) {
  // re-derive the golden bytes from the independently written oracle,
  // then hold every implementation path to them
  const auto oracle_ks = oracle::keystream(oracle::text_key("Key"), 10);
  EXPECT_EQ(hex_encode(oracle_ks), "eb9f7781b734ca72a719");

  const Rc4Key key = Rc4Key::from_text("Key");
  EXPECT_EQ(hex_encode(keystream(key, 10)), "eb9f7781b734ca72a719");
  Rc4Hardware hw(key);
  hw.run_ksa();
  EXPECT_EQ(hex_encode(hw.run_prga(10)), "eb9f7781b734ca72a719");

  const std::string text = "Plaintext";
  const std::vector<std::uint8_t> data(text.begin(), text.end());
  auto oracle_stream = oracle::keystream(oracle::text_key("Key"), data.size());
  std::vector<std::uint8_t> oracle_ct(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    oracle_ct[k] = static_cast<std::uint8_t>(data[k] ^ oracle_stream[k]);
  }
  EXPECT_EQ(hex_encode(oracle_ct), "bbf316e8d940af0ad3");
  Rc4State ref = ksa(key);
  EXPECT_EQ(hex_encode(xor_cipher(ref, data)), "bbf316e8d940af0ad3");
  EXPECT_EQ(hex_encode(rc4_hw_encrypt(key, data).ciphertext),
            "bbf316e8d940af0ad3");
}

TEST(Acceptance, C4_MetaStatisticsReproduction) {
  EXPECT_NEAR(expected_lower_bound(0.01, 300), 0.972766, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 600), 0.977814, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 2400), 0.983907, 1e-6);
  EXPECT_NEAR(expected_lower_bound(0.01, 5400), 0.985938, 1e-6);

  const auto from_bins = [](const std::vector<std::uint64_t>& counts) {
    std::vector<PValue> out;
    for (std::size_t bin = 0; bin < counts.size(); ++bin) {
      for (std::uint64_t k = 0; k < counts[bin]; ++k) {
        out.push_back({bin / 10.0 + 0.05, "t", 0});
      }
    }
    return out;
  };
  const auto row1 = pvalue_uniformity(
      from_bins({30, 29, 33, 39, 26, 36, 32, 24, 24, 27}));
  EXPECT_NEAR(row1.pop, 0.574443, 2e-3);
  const auto row2 = pvalue_uniformity(
      from_bins({28, 31, 31, 33, 32, 31, 27, 26, 25, 36}));
  EXPECT_NEAR(row2.pop, 0.939359, 2e-3);

  std::vector<PValue> pv;
  for (int k = 0; k < 294; ++k) pv.push_back({0.5, "t", 0});
  for (int k = 0; k < 6; ++k) pv.push_back({0.001, "t", 0});
  EXPECT_DOUBLE_EQ(proportion_of_passing(pv).observed, 0.98);
}

TEST(Acceptance, C5_RandomnessPassOnReducedCorpus) {
  const auto corpus = generate_corpus(100, 1000000);
  const SuiteReport report = run_suite(corpus);
  ASSERT_EQ(report.tests.size(), 6u);
  for (const auto& t : report.tests) {
    EXPECT_GE(t.proportion.observed, t.proportion.expected_lower) << t.name;
    EXPECT_TRUE(t.proportion.passed) << t.name;
    EXPECT_GE(t.uniformity.pop, 1e-4) << t.name;
    EXPECT_TRUE(t.uniformity.uniform) << t.name;
  }
}

TEST(Acceptance, C6_SpecialFunctions) {
  EXPECT_EQ(erfc(0.0), 1.0);
  for (double a : {0.5, 1.0, 4.5, 128.0}) EXPECT_EQ(igamc(a, 0.0), 1.0);
  for (int k = 0; k <= 1000; ++k) {
    const double x = 25.0 * k / 1000.0;
    ASSERT_NEAR(igamc(0.5, x), erfc(std::sqrt(x)), 1e-10) << x;
  }
}

TEST(Acceptance, C7_GatingProperties) {
  const Rc4Key key = Rc4Key::from_text("Key");
  for (const std::uint64_t n : {1ull, 100ull, 10000ull}) {
    const GatingComparison cmp = compare_gating(key, n);
    EXPECT_LT(cmp.gated.total_toggles, cmp.ungated.total_toggles) << n;
    EXPECT_EQ(cmp.clock_net_saving_fraction, Rational(1, 2)) << n;
    EXPECT_EQ(cmp.gated.register_writes, cmp.ungated.register_writes) << n;
    EXPECT_EQ(cmp.gated.latch_loads, cmp.ungated.latch_loads) << n;

    std::vector<std::uint8_t> gated_ks, ungated_ks;
    simulate_activity(key, n, GatingMode::Gated, &gated_ks);
    simulate_activity(key, n, GatingMode::Ungated, &ungated_ks);
    EXPECT_EQ(gated_ks, ungated_ks) << n;
    EXPECT_EQ(gated_ks, keystream(key, n)) << n;
    // cycle counts are a mode-independent function of n
    EXPECT_EQ(cmp.gated.ksa_clock_toggles, 2 * 257u);
    EXPECT_EQ(cmp.gated.prga_clock_toggles, 2 * (n + 1));
    EXPECT_EQ(cmp.ungated.ksa_clock_toggles, 2 * (258 + n));
  }
}

TEST(Acceptance, C8_TransportRoundTrip) {
  const Rc4Key key = Rc4Key::from_text("Key");

  // handshake bytes on a raw loopback connection
  {
    TcpListener listener("127.0.0.1:0");
    auto peer = std::async(std::launch::async, [&listener] {
      FdStream stream = listener.accept_one();
      std::array<std::uint8_t, 5> seen{};
      EXPECT_EQ(stream.read_full(seen.data(), 5), 5u);
      stream.write_all(seen.data(), 5);
      return seen;
    });
    FdStream stream =
        tcp_connect("127.0.0.1:" + std::to_string(listener.local_port()));
    SessionConfig config{Role::Sender, key, Engine::Reference};
    handshake(stream, config);
    const auto seen = peer.get();
    EXPECT_EQ(hex_encode(seen), "5243345301");
  }

  // 70,000 octets arrive as exactly two data frames
  {
    TcpListener listener("127.0.0.1:0");
    std::vector<std::uint8_t> data(70000);
    std::mt19937_64 rng(70000);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    auto frame_sizes = std::async(std::launch::async, [&listener] {
      FdStream stream = listener.accept_one();
      std::array<std::uint8_t, 5> hello{};
      EXPECT_EQ(stream.read_full(hello.data(), 5), 5u);
      stream.write_all(hello.data(), 5);
      std::vector<std::uint32_t> sizes;
      for (;;) {
        std::uint8_t hdr[4];
        EXPECT_EQ(stream.read_full(hdr, 4), 4u);
        const std::uint32_t len = std::uint32_t{hdr[0]} << 24 |
                                  std::uint32_t{hdr[1]} << 16 |
                                  std::uint32_t{hdr[2]} << 8 |
                                  std::uint32_t{hdr[3]};
        sizes.push_back(len);
        if (len == 0) break;
        std::vector<std::uint8_t> payload(len);
        EXPECT_EQ(stream.read_full(payload.data(), len), len);
      }
      return sizes;
    });
    FdStream stream =
        tcp_connect("127.0.0.1:" + std::to_string(listener.local_port()));
    SessionConfig config{Role::Sender, key, Engine::Reference};
    auto session = handshake(stream, config);
    std::istringstream src(std::string(data.begin(), data.end()));
    EXPECT_EQ(send_stream(session, src), 70000u);
    const auto sizes = frame_sizes.get();
    ASSERT_EQ(sizes.size(), 3u);
    EXPECT_EQ(sizes[0], 65536u);
    EXPECT_EQ(sizes[1], 4464u);
    EXPECT_EQ(sizes[2], 0u);
  }

  // full round trips across sizes and engines
  for (const Engine engine : {Engine::Reference, Engine::HardwareModel}) {
    for (const std::size_t size :
         {std::size_t{0}, std::size_t{1}, std::size_t{9}, std::size_t{65536},
          std::size_t{70000}, std::size_t{1048576}}) {
      std::vector<std::uint8_t> data(size);
      std::mt19937_64 rng(size + 17);
      for (auto& b : data) b = static_cast<std::uint8_t>(rng());

      TcpListener listener("127.0.0.1:0");
      auto received = std::async(std::launch::async, [&listener, &key,
                                                      engine] {
        FdStream stream = listener.accept_one();
        SessionConfig config{Role::Receiver, key, engine};
        auto session = handshake(stream, config);
        std::ostringstream sink;
        recv_stream(session, sink);
        return sink.str();
      });
      FdStream stream =
          tcp_connect("127.0.0.1:" + std::to_string(listener.local_port()));
      SessionConfig config{Role::Sender, key, engine};
      auto session = handshake(stream, config);
      std::istringstream src(std::string(data.begin(), data.end()));
      EXPECT_EQ(send_stream(session, src), size);
      EXPECT_EQ(received.get(), std::string(data.begin(), data.end()))
          << "size " << size;
    }
  }
}

TEST(Acceptance, C9_Determinism) {
  const auto render_once = [] {
    const auto corpus = generate_corpus(100, 1000000);
    const SuiteReport report = run_suite(corpus);
    std::ostringstream os;
    write_suite_report(os, report);
    return os.str();
  };
  const std::string first = render_once();
  const std::string second = render_once();
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::printf("[%s] %s\n", info.result()->Passed() ? "PASS" : "FAIL",
                info.name());
    std::fflush(stdout);
  }
};

}  // namespace
}  // namespace rc4hw

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(
      new rc4hw::CriterionPrinter);
  return RUN_ALL_TESTS();
}
