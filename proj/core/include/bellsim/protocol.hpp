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

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellsim/lhv.hpp"
#include "bellsim/qmoracle.hpp"
#include "bellsim/types.hpp"

namespace bellsim {

inline constexpr int kSchemaVersion = 1;

/// Measurement directions a1, a2 (Alice) and b1, b2 (Bob).
struct Settings {
  UnitVector3 a1{0.0, 0.0, 1.0};
  UnitVector3 a2{0.0, 0.0, 1.0};
  UnitVector3 b1{0.0, 0.0, 1.0};
  UnitVector3 b2{0.0, 0.0, 1.0};

  /// xz-plane angles in degrees.
  static Settings from_degrees(double a1, double a2, double b1, double b2);
  /// a1 = 0, a2 = 90, b1 = 45, b2 = -45 degrees.
  static Settings canonical() { return from_degrees(0.0, 90.0, 45.0, -45.0); }

  [[nodiscard]] const UnitVector3& alice(int index) const { return index == 1 ? a1 : a2; }
  [[nodiscard]] const UnitVector3& bob(int index) const { return index == 1 ? b1 : b2; }
};

struct ExperimentSpec {
  std::string strategy = "sign";
  std::string params_json = "{}";
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  MemoryMode regime = MemoryMode::kMemoryless;
  Settings settings = Settings::canonical();
  bool diagnosis_mode = false;
};

/// Parses the experiment config JSON:
///   {strategy, params, N, seed, regime, settings: {a1, a2, b1, b2}, diagnosis_mode}
/// where each setting is either an xz-plane angle in degrees or a 3-vector.
/// Throws ConfigError on anything malformed.
ExperimentSpec parse_experiment_spec(std::string_view json_text);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

/// CHSH sign for cell (i, j): +1 except (2, 2).
constexpr int chsh_sign(int i, int j) { return (i == 2 && j == 2) ? -1 : 1; }

/// r11 + r12 + r21 - r22 for correlations indexed [i-1][j-1].
double chsh_combination(const std::array<std::array<double, 2>, 2>& r);

using CellCounts = std::array<std::array<std::uint64_t, 2>, 2>;
using CellValues = std::array<std::array<double, 2>, 2>;

struct ChshEstimate {
  CellCounts counts{};
  CellValues correlations{};
  double s = 0.0;           // sum of per-cell means, r11 + r12 + r21 - r22
  double s_balanced = 0.0;  // 4 * mean of chsh_sign(i, j) x y over all trials
  std::uint64_t trials = 0;

  /// |r11 - r12| - r22. Bell's three-correlation form; bounded by 1 for local
  /// models when a2 = b1 and outcomes anticorrelate perfectly there.
  [[nodiscard]] double bell_three_term() const;
};

/// Thrown when a setting pair never occurred.
class EmptyCellError : public Error {
 public:
  EmptyCellError(int i, int j);
  [[nodiscard]] int i() const { return i_; }
  [[nodiscard]] int j() const { return j_; }

 private:
  int i_, j_;
};

/// Running per-cell sums. `add` takes the per-trial product (x y, or a
/// reported value in diagnosis mode).
class ChshTally {
 public:
  void add(int i, int j, double product);
  [[nodiscard]] std::uint64_t trials() const { return trials_; }
  [[nodiscard]] const CellCounts& counts() const { return counts_; }
  /// Throws EmptyCellError when any cell is empty.
  [[nodiscard]] ChshEstimate estimate() const;
  /// Mean product over all trials regardless of cell.
  [[nodiscard]] double overall_mean() const;

 private:
  CellCounts counts_{};
  CellValues sums_{};
  double signed_sum_ = 0.0;
  double total_sum_ = 0.0;
  std::uint64_t trials_ = 0;
};

ChshEstimate chsh_statistic(std::span<const TrialRecord> records);

struct ExperimentRun {
  std::vector<TrialRecord> records;
  std::vector<double> reported;  // one per trial when the override ran, else empty
};

/// Called once per trial; `reported` is set only when an override ran.
using TrialSink = std::function<void(const TrialRecord& record, const double* reported)>;

/// Drives spec.trials rounds without storing them.
/// Throws ConfigError on an unknown strategy or strategy/regime mismatch and
/// ContractError when an override would run outside diagnosis mode.
void stream_experiment(const ExperimentSpec& spec, const TrialSink& sink);
/// Same as above with an already-built strategy.
void stream_experiment(const ExperimentSpec& spec, const Strategy& strategy, const TrialSink& sink);

ExperimentRun run_experiment(const ExperimentSpec& spec);
ExperimentRun run_experiment(const ExperimentSpec& spec, const Strategy& strategy);

/// Correlation estimate from the reported per-trial values of a diagnosis run.
ChshEstimate reported_chsh(const ExperimentRun& run);

struct SweepRow {
  double angle_degrees = 0.0;
  double r_lhv = 0.0;                  // mean x y
  std::optional<double> r_reported;    // mean override value, diagnosis mode only
  double r_qm = 0.0;                   // -cos(theta)
};

/// For each grid angle run `trials_per_point` trials with a = 0 deg and b = theta on
/// both setting labels. Point k uses a seed derived from (seed, k).
std::vector<SweepRow> correlation_sweep(const ExperimentSpec& base, std::span<const double> angles_degrees,
                                        std::uint64_t trials_per_point, std::uint64_t seed);

/// Inclusive grid start, start + step, ..., <= stop. Throws std::invalid_argument on a bad range.
std::vector<double> angle_grid(double start_degrees, double stop_degrees, double step_degrees);

struct LocalityViolation {
  std::uint64_t n = 0;
  char station = 'A';
  int outcome = 0;                 // with the other station at its actual setting
  int counterfactual_outcome = 0;  // with the other station at its other setting
};

struct AuditReport {
  std::uint64_t trials_checked = 0;
  bool records_match = true;  // replay reproduced the supplied records
  std::vector<LocalityViolation> violations;
  bool shuffle_checked = false;
  std::uint64_t shuffle_mismatches = 0;

  [[nodiscard]] bool passed() const { return records_match && violations.empty() && shuffle_mismatches == 0; }
};

/// Replays every trial from the spec's seed. For each trial and each station,
/// the other station is invoked first at its actual and at its counterfactual
/// setting; any change in this station's outcome is a violation. In the
/// memoryless regime the trials are then replayed on fresh stations in a
/// shuffled order and compared per trial index.
AuditReport replay_locality_audit(std::span<const TrialRecord> records, const ExperimentSpec& spec);
AuditReport replay_locality_audit(std::span<const TrialRecord> records, const ExperimentSpec& spec,
                                  const Strategy& strategy);

std::string audit_report_to_json(const AuditReport& report, const ExperimentSpec& spec);

/// CSV with header n,i,j,x,y.
void write_trial_log(std::ostream& out, std::span<const TrialRecord> records);
/// Throws ConfigError on a malformed log.
std::vector<TrialRecord> read_trial_log(std::istream& in);

/// angle_degrees,r_lhv,r_qm[,r_reported]
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

}  // namespace bellsim
