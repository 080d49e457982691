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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rc4hw/hex.hpp"
#include "rc4hw/parallel.hpp"
#include "rc4hw/rc4.hpp"

namespace rc4hw {

/// A bit sequence packed into octets, most significant bit first within
/// each octet.
struct BitSample {
  std::vector<std::uint8_t> octets;
  std::uint64_t nbits = 0;
  std::uint64_t sample_index = 0;

  int bit(std::uint64_t k) const {
    return (octets[k >> 3] >> (7 - (k & 7))) & 1;
  }

  /// Build from a string of '0'/'1' characters (test helper).
  static BitSample from_bits(std::string_view bits, std::uint64_t index = 0) {
    BitSample s;
    s.sample_index = index;
    s.nbits = bits.size();
    s.octets.assign((bits.size() + 7) / 8, 0);
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (bits[k] == '1') {
        s.octets[k >> 3] |= static_cast<std::uint8_t>(1u << (7 - (k & 7)));
      } else if (bits[k] != '0') {
        throw std::invalid_argument("bit string must contain only 0 and 1");
      }
    }
    return s;
  }
};

/// Deterministic per-sample key: seed x0 = index + 1, iterate the 64-bit
/// linear congruential step x -> 6364136223846793005*x + 1442695040888963407,
/// and take the top byte of each state as the next key byte. 16 bytes.
inline Rc4Key derive_sample_key(std::uint64_t sample_index) {
  std::uint64_t x = sample_index + 1;
  std::vector<std::uint8_t> bytes(16);
  for (auto& b : bytes) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    b = static_cast<std::uint8_t>(x >> 56);
  }
  return Rc4Key(std::move(bytes));
}

/// Sample s = the first bits/8 keystream octets under derive_sample_key(s).
inline std::vector<BitSample> generate_corpus(std::size_t num_samples,
                                              std::uint64_t bits_per_sample) {
  if (bits_per_sample % 8 != 0) {
    throw std::invalid_argument("bits per sample must be a multiple of 8");
  }
  std::vector<BitSample> corpus(num_samples);
  detail::parallel_for_index(num_samples, [&](std::size_t s) {
    corpus[s].sample_index = s;
    corpus[s].nbits = bits_per_sample;
    corpus[s].octets = keystream(derive_sample_key(s), bits_per_sample / 8);
  });
  return corpus;
}

// --- corpus on disk: sample_<index>.bin plus a manifest with lines of
// --- index,key_hex,bits

inline void write_corpus(const std::filesystem::path& dir,
                         const std::vector<BitSample>& corpus) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw std::runtime_error("cannot write corpus manifest");
  for (const auto& sample : corpus) {
    const std::string name = "sample_" + std::to_string(sample.sample_index) +
                             ".bin";
    std::ofstream bin(dir / name, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write corpus sample file");
    bin.write(reinterpret_cast<const char*>(sample.octets.data()),
              static_cast<std::streamsize>(sample.octets.size()));
    manifest << sample.sample_index << ','
             << hex_encode(derive_sample_key(sample.sample_index).bytes())
             << ',' << sample.nbits << '\n';
  }
}

inline std::vector<BitSample> read_corpus(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.csv");
  if (!manifest) throw std::runtime_error("cannot open corpus manifest");
  std::vector<BitSample> corpus;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string index_str, key_hex, bits_str;
    if (!std::getline(fields, index_str, ',') ||
        !std::getline(fields, key_hex, ',') ||
        !std::getline(fields, bits_str)) {
      throw std::runtime_error("malformed corpus manifest line: " + line);
    }
    BitSample sample;
    sample.sample_index = std::stoull(index_str);
    sample.nbits = std::stoull(bits_str);
    const std::string name = "sample_" + index_str + ".bin";
    std::ifstream bin(dir / name, std::ios::binary);
    if (!bin) throw std::runtime_error("missing corpus sample file " + name);
    sample.octets.assign((sample.nbits + 7) / 8, 0);
    bin.read(reinterpret_cast<char*>(sample.octets.data()),
             static_cast<std::streamsize>(sample.octets.size()));
    if (static_cast<std::uint64_t>(bin.gcount()) != sample.octets.size()) {
      throw std::runtime_error("short corpus sample file " + name);
    }
    corpus.push_back(std::move(sample));
  }
  return corpus;
}

}  // namespace rc4hw
