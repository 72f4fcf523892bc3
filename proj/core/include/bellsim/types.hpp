// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellsim {

/// Measurement outcome. Exactly two values exist: no third symbol.
class Outcome {
 public:
  static constexpr Outcome plus() { return Outcome(1); }
  static constexpr Outcome minus() { return Outcome(-1); }
  /// sign(v) with sign(0) = +1.
  static constexpr Outcome sign_of(double v) { return v < 0.0 ? minus() : plus(); }
  /// Throws std::invalid_argument unless v is -1 or +1.
  static Outcome from_int(int v) {
    if (v != 1 && v != -1) throw std::invalid_argument("Outcome must be -1 or +1, got " + std::to_string(v));
    return Outcome(static_cast<std::int8_t>(v));
  }

  [[nodiscard]] constexpr int value() const { return value_; }
  [[nodiscard]] constexpr Outcome flipped() const { return Outcome(static_cast<std::int8_t>(-value_)); }

  friend constexpr int operator*(Outcome a, Outcome b) { return a.value_ * b.value_; }
  friend constexpr bool operator==(Outcome, Outcome) = default;

 private:
  constexpr explicit Outcome(std::int8_t v) : value_(v) {}
  std::int8_t value_;
};

enum class MemoryMode { kMemoryless, kBetweenTrialMemory };

std::string to_string(MemoryMode mode);
/// Accepts "MEMORYLESS" / "BETWEEN_TRIAL_MEMORY" (case-insensitive).
MemoryMode memory_mode_from_string(const std::string& text);

/// One round: trial index, setting labels (1 or 2) and both outcomes.
struct TrialRecord {
  std::uint64_t n = 0;
  std::uint8_t i = 1;
  std::uint8_t j = 1;
  Outcome x = Outcome::plus();
  Outcome y = Outcome::plus();

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// The four counterfactual outcomes (A1, A2, B1, B2) of one deterministic
/// local strategy.
struct DeterministicAssignment {
  Outcome a1 = Outcome::plus();
  Outcome a2 = Outcome::plus();
  Outcome b1 = Outcome::plus();
  Outcome b2 = Outcome::plus();

  [[nodiscard]] constexpr Outcome alice(int setting) const { return setting == 1 ? a1 : a2; }
  [[nodiscard]] constexpr Outcome bob(int setting) const { return setting == 1 ? b1 : b2; }
  /// A1B1 + A1B2 + A2B1 - A2B2
  [[nodiscard]] constexpr int chsh_value() const { return a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2; }

  friend constexpr bool operator==(const DeterministicAssignment&, const DeterministicAssignment&) = default;
};

/// Base for all harness errors that stem from bad input or a refused request.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A requested action the referee refuses under contract enforcement.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellsim
