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
#include <random>

namespace bellsim {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and to build counter-based draws.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream_id` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits of `bits`.
constexpr double unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Fixed stream identifiers; every random quantity in a run hangs off one of these.
enum class Stream : std::uint64_t {
  kSource = 1,
  kSettings = 2,
  kStationA = 3,
  kStationB = 4,
  kSampling = 5,
  kRepetition = 6,
  kSweepPoint = 7,
};

/// Deterministic engine over std::mt19937_64. Distributions are hand-rolled
/// from raw bits so output does not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream stream) : engine_(derive_seed(master, static_cast<std::uint64_t>(stream))) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform01() { return unit_interval(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bellsim
