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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bellsim/protocol.hpp"
#include "bellsim/types.hpp"

namespace bellsim::certify {

/// Azuma-Hoeffding constant for the fixed-denominator estimator
/// S_hat = 4 * mean(chsh_sign(i, j) x y). See docs/certificate_bound.md.
inline constexpr double kBoundConstant = 128.0;

struct AssignmentRow {
  DeterministicAssignment assignment;
  int s = 0;  // A1B1 + A1B2 + A2B1 - A2B2
};

struct Enumeration {
  std::array<AssignmentRow, 16> rows{};
  int max_abs_s = 0;
  bool only_plus_minus_two = false;
};

/// All 2^4 deterministic assignments, ordered with +1 before -1 and A1 most
/// significant.
Enumeration enumerate_assignments();

/// min(1, exp(-N eps^2 / C)). Throws std::domain_error on N < 1, eps < 0 or C <= 0.
double tail_bound(std::uint64_t trials, double epsilon, double bound_constant = kBoundConstant);

struct Certificate {
  std::uint64_t trials = 0;
  double s_observed = 0.0;  // S_hat, the estimator the bound is proved for
  double s_ratio = 0.0;     // sum of per-cell means
  double epsilon = 0.0;     // max(0, |S_hat| - 2)
  double tail_bound = 1.0;  // bound on P(S_hat >= 2 + eps), and by symmetry on P(S_hat <= -2 - eps)
  double two_sided_bound = 1.0;
  double bound_constant = kBoundConstant;
  CellCounts counts{};
  CellValues correlations{};
  std::optional<std::uint64_t> seed;
  std::string strategy;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Throws EmptyCellError if a setting pair is missing.
Certificate make_certificate(std::span<const TrialRecord> records, std::optional<std::uint64_t> seed = std::nullopt,
                             std::string strategy = "", double bound_constant = kBoundConstant);
/// Same, from an already computed estimate.
Certificate make_certificate(const ChshEstimate& estimate, std::optional<std::uint64_t> seed, std::string strategy,
                             double bound_constant = kBoundConstant);

std::string certificate_to_json(const Certificate& cert);
/// Throws ConfigError on malformed input.
Certificate certificate_from_json(std::string_view text);

/// Which estimate a repetition contributes: outcome products, or the
/// override's reported values (diagnosis runs only).
enum class Statistic { kOutcomes, kReported };

struct TailEstimate {
  std::uint64_t repetitions = 0;
  std::uint64_t upper_exceedances = 0;  // S_hat >= 2 + eps
  std::uint64_t lower_exceedances = 0;  // S_hat <= -2 - eps
  double bound = 1.0;                   // one-sided tail_bound(N, eps)

  [[nodiscard]] double upper_frequency() const;
  [[nodiscard]] double lower_frequency() const;
  /// max of the two one-sided frequencies
  [[nodiscard]] double frequency() const;
  /// binomial standard deviation of a frequency whose true value is `bound`
  [[nodiscard]] double bound_sigma() const;
  /// Both one-sided frequencies within bound + sigmas * bound_sigma().
  [[nodiscard]] bool consistent_with_bound(double sigmas = 3.0) const;
};

/// Runs `repetitions` independent experiments of `trials` trials each from
/// `base` (seeds derived from `seed` by repetition index) and counts how often
/// S_hat exceeds 2 + eps on either side. Repetitions are split over `workers`
/// threads; results are independent of the worker count.
TailEstimate empirical_tail(const ExperimentSpec& base, std::uint64_t trials, double epsilon,
                            std::uint64_t repetitions, std::uint64_t seed,
                            Statistic statistic = Statistic::kOutcomes, unsigned workers = 1);

/// S_hat of each repetition, in repetition order; lets one sample serve a whole epsilon grid.
std::vector<double> repetition_statistics(const ExperimentSpec& base, std::uint64_t trials, std::uint64_t repetitions,
                                          std::uint64_t seed, Statistic statistic = Statistic::kOutcomes,
                                          unsigned workers = 1);

TailEstimate tail_from_statistics(std::span<const double> s_hats, std::uint64_t trials, double epsilon,
                                  double bound_constant = kBoundConstant);

}  // namespace bellsim::certify
