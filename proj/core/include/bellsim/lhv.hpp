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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bellsim/qmoracle.hpp"
#include "bellsim/types.hpp"

namespace bellsim {

class Rng;

/// Shared source variable lambda.
struct HiddenVariable {
  UnitVector3 direction{0.0, 0.0, 1.0};
  double aux = 0.0;  // uniform on [0, 1)
  int tag = 1;       // uniform on {+1, -1}
};

/// Default source: direction uniform on the sphere, aux uniform, tag a fair sign.
/// Always consumes the same number of draws.
HiddenVariable sample_hidden_variable(Rng& source);

/// Everything a station may see within one trial. Nothing here is derived
/// from the other station's setting or outcome.
struct StationInput {
  std::uint64_t n = 0;
  int setting_index = 1;  // 1 or 2
  UnitVector3 setting{0.0, 0.0, 1.0};
  HiddenVariable lambda;
  double local_draw = 0.0;  // station-private uniform, a pure function of (seed, n)
};

/// One measurement station. `respond` is const: a station's state changes
/// only through `observe`, which the referee calls between trials and only
/// in the between-trial-memory regime.
class Station {
 public:
  virtual ~Station() = default;
  [[nodiscard]] virtual Outcome respond(const StationInput& input) const = 0;
  virtual void observe(const TrialRecord& /*completed*/) {}
};

struct StationPair {
  std::unique_ptr<Station> alice;
  std::unique_ptr<Station> bob;
};

/// Reports a per-trial "correlation" that is not the product of the two
/// outcomes. Illegal by contract; the referee accepts it only in diagnosis mode.
class CorrelationOverride {
 public:
  virtual ~CorrelationOverride() = default;
  [[nodiscard]] virtual double reported_product(const HiddenVariable& lambda, const UnitVector3& a,
                                                const UnitVector3& b) const = 0;
};

/// A local-hidden-variable model: a source plus two station factories.
class Strategy {
 public:
  virtual ~Strategy() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual MemoryMode memory_mode() const { return MemoryMode::kMemoryless; }
  [[nodiscard]] virtual HiddenVariable sample_lambda(Rng& source) const { return sample_hidden_variable(source); }
  /// Fresh stations holding only their initial data.
  [[nodiscard]] virtual StationPair make_stations() const = 0;
  [[nodiscard]] virtual const CorrelationOverride* correlation_override() const { return nullptr; }
};

/// A = sign(a.lambda), B = -sign(b.lambda). E(a, b) = -1 + 2 theta / pi.
std::unique_ptr<Strategy> strategy_sign_model();

/// Reproduces the criticized simulation: outcomes A = tag sign(a.d),
/// B = -tag sign(b.d), but the reported per-trial product is the scalar part
/// of B(a)B(b) when tag == 1 and of B(b)B(a) otherwise, which is -a.b.
std::unique_ptr<Strategy> strategy_flawed_model();

/// Same source and stations as the flawed model, no override.
std::unique_ptr<Strategy> strategy_faithful_outcomes();

/// Deterministic memoryless play of one fixed assignment.
std::unique_ptr<Strategy> strategy_fixed_assignment(DeterministicAssignment assignment);

/// Memory-using adversary: both stations pick one of the eight s = +2
/// assignments as a function of the previous trial's settings and outcomes.
std::unique_ptr<Strategy> strategy_memory_adversary();

/// Negative control: the stations share a hidden channel through which Bob
/// learns Alice's setting within the trial. Violates locality.
std::unique_ptr<Strategy> strategy_nonlocal_control();

/// Registry lookup. `params_json` is a JSON object (may be "{}").
/// Throws ConfigError on an unknown name or malformed parameters.
std::unique_ptr<Strategy> make_strategy(std::string_view name, std::string_view params_json = "{}");

/// Names accepted by make_strategy.
std::vector<std::string> strategy_names();

}  // namespace bellsim
