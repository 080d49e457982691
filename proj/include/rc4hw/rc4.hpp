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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rc4hw {

/// The 256-entry byte permutation that is RC4's whole internal state
/// besides the two indices.
using SBox = std::array<std::uint8_t, 256>;

/// Key bytes replicated over 256 entries: entry m = key[m % l].
using KeyArray = std::array<std::uint8_t, 256>;

class InvalidKeyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A secret key of 1..256 octets. Keys of 5..16 octets are the
/// conventional range; anything in 1..256 is accepted.
class Rc4Key {
 public:
  explicit Rc4Key(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty()) throw InvalidKeyError("RC4 key must not be empty");
    if (bytes_.size() > 256) {
      throw InvalidKeyError("RC4 key longer than 256 octets");
    }
  }

  static Rc4Key from_text(std::string_view text) {
    return Rc4Key(std::vector<std::uint8_t>(text.begin(), text.end()));
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

 private:
  std::vector<std::uint8_t> bytes_;
};

inline KeyArray expand_key(const Rc4Key& key) {
  KeyArray k{};
  const auto& bytes = key.bytes();
  for (std::size_t m = 0; m < k.size(); ++m) {
    k[m] = bytes[m % bytes.size()];
  }
  return k;
}

/// Cipher state after key scheduling: the scrambled S-box plus the two
/// mod-256 indices. Single-owner mutable state.
struct Rc4State {
  SBox sbox{};
  std::uint8_t i = 0;
  std::uint8_t j = 0;
};

/// Key scheduling: identity permutation, then 256 key-driven swaps.
inline Rc4State ksa(const Rc4Key& key) {
  Rc4State state;
  for (unsigned m = 0; m < 256; ++m) {
    state.sbox[m] = static_cast<std::uint8_t>(m);
  }
  const KeyArray k = expand_key(key);
  std::uint8_t j = 0;
  for (unsigned i = 0; i < 256; ++i) {
    j = static_cast<std::uint8_t>(j + state.sbox[i] + k[i]);
    std::swap(state.sbox[i], state.sbox[j]);
  }
  state.i = 0;
  state.j = 0;
  return state;
}

/// One output byte: advance i and j, swap S[i] and S[j], then read the
/// post-swap box at t = S[i] + S[j].
inline std::uint8_t prga_next(Rc4State& state) {
  state.i = static_cast<std::uint8_t>(state.i + 1);
  state.j = static_cast<std::uint8_t>(state.j + state.sbox[state.i]);
  std::swap(state.sbox[state.i], state.sbox[state.j]);
  const std::uint8_t t =
      static_cast<std::uint8_t>(state.sbox[state.i] + state.sbox[state.j]);
  return state.sbox[t];
}

inline std::vector<std::uint8_t> keystream(const Rc4Key& key, std::size_t n) {
  Rc4State state = ksa(key);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = prga_next(state);
  return out;
}

/// XOR data with the next keystream bytes. Encryption and decryption are
/// the same operation; consumes exactly data.size() keystream bytes.
inline std::vector<std::uint8_t> xor_cipher(Rc4State& state,
                                            std::span<const std::uint8_t> data) {
  std::vector<std::uint8_t> out(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    out[k] = static_cast<std::uint8_t>(data[k] ^ prga_next(state));
  }
  return out;
}

inline bool is_permutation(const SBox& sbox) {
  std::array<bool, 256> seen{};
  for (std::uint8_t v : sbox) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace rc4hw
