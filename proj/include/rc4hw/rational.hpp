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
#include <numeric>
#include <stdexcept>
#include <string>

namespace rc4hw {

/// Exact non-negative rational for clock-per-byte and saving-fraction
/// figures. Stored normalized so equality is structural.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;

  constexpr double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace rc4hw
