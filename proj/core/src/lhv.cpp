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

#include "bellsim/lhv.hpp"

#include <array>
#include <json.hpp>

#include "bellsim/clifford.hpp"
#include "bellsim/rng.hpp"

namespace bellsim {

HiddenVariable sample_hidden_variable(Rng& source) {
  HiddenVariable lambda;
  lambda.direction = UnitVector3::random(source);
  lambda.aux = source.uniform01();
  lambda.tag = source.coin() ? 1 : -1;
  return lambda;
}

namespace {

class SignStation final : public Station {
 public:
  explicit SignStation(bool negate) : negate_(negate) {}
  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    const Outcome o = Outcome::sign_of(in.setting.dot(in.lambda.direction));
    return negate_ ? o.flipped() : o;
  }

 private:
  bool negate_;
};

class SignModel final : public Strategy {
 public:
  [[nodiscard]] std::string name() const override { return "sign"; }
  [[nodiscard]] StationPair make_stations() const override {
    return {std::make_unique<SignStation>(false), std::make_unique<SignStation>(true)};
  }
};

class TaggedSignStation final : public Station {
 public:
  explicit TaggedSignStation(bool negate) : negate_(negate) {}
  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    Outcome o = Outcome::sign_of(in.setting.dot(in.lambda.direction));
    if (in.lambda.tag != 1) o = o.flipped();
    return negate_ ? o.flipped() : o;
  }

 private:
  bool negate_;
};

class BivectorOrderOverride final : public CorrelationOverride {
 public:
  // if (lambda == 1) q = (NA NB) else q = (NB NA); only the scalar part is kept.
  [[nodiscard]] double reported_product(const HiddenVariable& lambda, const UnitVector3& a,
                                        const UnitVector3& b) const override {
    const auto na = clifford::bivector_of(a.x(), a.y(), a.z());
    const auto nb = clifford::bivector_of(b.x(), b.y(), b.z());
    const auto q = lambda.tag == 1 ? na * nb : nb * na;
    return q[0];
  }
};

class TaggedSignModel : public Strategy {
 public:
  explicit TaggedSignModel(bool with_override) : with_override_(with_override) {}
  [[nodiscard]] std::string name() const override { return with_override_ ? "flawed" : "faithful"; }
  [[nodiscard]] StationPair make_stations() const override {
    return {std::make_unique<TaggedSignStation>(false), std::make_unique<TaggedSignStation>(true)};
  }
  [[nodiscard]] const CorrelationOverride* correlation_override() const override {
    return with_override_ ? &override_ : nullptr;
  }

 private:
  bool with_override_;
  BivectorOrderOverride override_;
};

class AssignmentStation final : public Station {
 public:
  AssignmentStation(DeterministicAssignment assignment, bool is_alice)
      : assignment_(assignment), is_alice_(is_alice) {}
  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    return is_alice_ ? assignment_.alice(in.setting_index) : assignment_.bob(in.setting_index);
  }

 private:
  DeterministicAssignment assignment_;
  bool is_alice_;
};

class FixedAssignment final : public Strategy {
 public:
  explicit FixedAssignment(DeterministicAssignment assignment) : assignment_(assignment) {}
  [[nodiscard]] std::string name() const override { return "assignment"; }
  [[nodiscard]] StationPair make_stations() const override {
    return {std::make_unique<AssignmentStation>(assignment_, true),
            std::make_unique<AssignmentStation>(assignment_, false)};
  }

 private:
  DeterministicAssignment assignment_;
};

std::array<DeterministicAssignment, 8> maximizing_assignments() {
  std::array<DeterministicAssignment, 8> out{};
  std::size_t k = 0;
  for (unsigned bits = 0; bits < 16; ++bits) {
    auto pick = [bits](unsigned b) { return (bits >> b) & 1U ? Outcome::minus() : Outcome::plus(); };
    const DeterministicAssignment a{pick(3), pick(2), pick(1), pick(0)};
    if (a.chsh_value() == 2) out[k++] = a;
  }
  return out;
}

class AdversaryStation final : public Station {
 public:
  explicit AdversaryStation(bool is_alice) : is_alice_(is_alice), table_(maximizing_assignments()) {}

  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    const DeterministicAssignment& a = table_[(state_ + in.n) % table_.size()];
    return is_alice_ ? a.alice(in.setting_index) : a.bob(in.setting_index);
  }

  void observe(const TrialRecord& r) override {
    // Both stations see the same record, so their states stay in lockstep.
    state_ = 3 * state_ + 2 * (r.i - 1U) + (r.j - 1U) + (r.x * r.y > 0 ? 5U : 0U);
  }

 private:
  bool is_alice_;
  std::array<DeterministicAssignment, 8> table_;
  std::uint64_t state_ = 0;
};

class MemoryAdversary final : public Strategy {
 public:
  [[nodiscard]] std::string name() const override { return "memory_adversary"; }
  [[nodiscard]] MemoryMode memory_mode() const override { return MemoryMode::kBetweenTrialMemory; }
  [[nodiscard]] StationPair make_stations() const override {
    return {std::make_unique<AdversaryStation>(true), std::make_unique<AdversaryStation>(false)};
  }
};

struct HiddenChannel {
  int alice_setting = 1;
  UnitVector3 alice_direction{0.0, 0.0, 1.0};
};

class LeakingAlice final : public Station {
 public:
  explicit LeakingAlice(std::shared_ptr<HiddenChannel> channel) : channel_(std::move(channel)) {}
  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    channel_->alice_setting = in.setting_index;
    channel_->alice_direction = in.setting;
    return Outcome::sign_of(in.setting.dot(in.lambda.direction));
  }

 private:
  std::shared_ptr<HiddenChannel> channel_;
};

class EavesdroppingBob final : public Station {
 public:
  explicit EavesdroppingBob(std::shared_ptr<HiddenChannel> channel) : channel_(std::move(channel)) {}
  [[nodiscard]] Outcome respond(const StationInput& in) const override {
    // Recompute Alice's outcome and choose y so every CHSH term is -1.
    const Outcome x = Outcome::sign_of(channel_->alice_direction.dot(in.lambda.direction));
    const bool both_second = channel_->alice_setting == 2 && in.setting_index == 2;
    return both_second ? x : x.flipped();
  }

 private:
  std::shared_ptr<HiddenChannel> channel_;
};

class NonlocalControl final : public Strategy {
 public:
  [[nodiscard]] std::string name() const override { return "nonlocal_control"; }
  [[nodiscard]] StationPair make_stations() const override {
    auto channel = std::make_shared<HiddenChannel>();
    return {std::make_unique<LeakingAlice>(channel), std::make_unique<EavesdroppingBob>(channel)};
  }
};

Outcome outcome_param(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) return Outcome::plus();
  const auto& v = params.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("assignment parameter '") + key + "' must be -1 or +1");
  try {
    return Outcome::from_int(v.get<int>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("assignment parameter '") + key + "': " + e.what());
  }
}

}  // namespace

std::unique_ptr<Strategy> strategy_sign_model() { return std::make_unique<SignModel>(); }
std::unique_ptr<Strategy> strategy_flawed_model() { return std::make_unique<TaggedSignModel>(true); }
std::unique_ptr<Strategy> strategy_faithful_outcomes() { return std::make_unique<TaggedSignModel>(false); }
std::unique_ptr<Strategy> strategy_fixed_assignment(DeterministicAssignment assignment) {
  return std::make_unique<FixedAssignment>(assignment);
}
std::unique_ptr<Strategy> strategy_memory_adversary() { return std::make_unique<MemoryAdversary>(); }
std::unique_ptr<Strategy> strategy_nonlocal_control() { return std::make_unique<NonlocalControl>(); }

std::vector<std::string> strategy_names() {
  return {"sign", "flawed", "faithful", "assignment", "memory_adversary", "nonlocal_control"};
}

std::unique_ptr<Strategy> make_strategy(std::string_view name, std::string_view params_json) {
  nlohmann::json params;
  try {
    params = params_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("strategy params are not valid JSON: ") + e.what());
  }
  if (!params.is_object()) throw ConfigError("strategy params must be a JSON object");

  if (name == "sign") return strategy_sign_model();
  if (name == "flawed") return strategy_flawed_model();
  if (name == "faithful") return strategy_faithful_outcomes();
  if (name == "memory_adversary") return strategy_memory_adversary();
  if (name == "nonlocal_control") return strategy_nonlocal_control();
  if (name == "assignment") {
    return strategy_fixed_assignment({outcome_param(params, "a1"), outcome_param(params, "a2"),
                                      outcome_param(params, "b1"), outcome_param(params, "b2")});
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

}  // namespace bellsim
