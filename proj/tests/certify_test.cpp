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

#include "bellsim/certify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

namespace bellsim::certify {
namespace {

TrialRecord rec(std::uint64_t n, int i, int j, int x, int y) {
  return {n, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j), Outcome::from_int(x), Outcome::from_int(y)};
}

// Balanced records: `per_cell` trials in each cell with `agree[i][j]` of them x = y.
std::vector<TrialRecord> balanced_records(std::uint64_t per_cell, const std::array<std::array<std::uint64_t, 2>, 2>& agree) {
  std::vector<TrialRecord> out;
  std::uint64_t n = 0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      for (std::uint64_t k = 0; k < per_cell; ++k) {
        out.push_back(rec(n++, i, j, 1, k < agree[i - 1][j - 1] ? 1 : -1));
      }
    }
  }
  return out;
}

ExperimentSpec base_spec(const std::string& strategy, bool diagnosis = false) {
  ExperimentSpec spec;
  spec.strategy = strategy;
  spec.settings = Settings::canonical();
  spec.diagnosis_mode = diagnosis;
  if (strategy == "memory_adversary") spec.regime = MemoryMode::kBetweenTrialMemory;
  return spec;
}

TEST(EnumerateAssignments, ExhaustiveTable) {
  const Enumeration e = enumerate_assignments();
  EXPECT_EQ(e.rows.size(), 16U);
  EXPECT_EQ(e.rows[0].assignment, (DeterministicAssignment{}));
  EXPECT_EQ(e.rows[0].s, 2);  // 1 + 1 + 1 - 1
  EXPECT_EQ(e.max_abs_s, 2);
  EXPECT_TRUE(e.only_plus_minus_two);

  std::set<std::tuple<int, int, int, int>> distinct;
  int plus = 0;
  for (const AssignmentRow& row : e.rows) {
    const auto& a = row.assignment;
    distinct.insert({a.a1.value(), a.a2.value(), a.b1.value(), a.b2.value()});
    // Oracle: A1 (B1 + B2) + A2 (B1 - B2); one bracket is 0 and the other +-2.
    const int s = a.a1.value() * (a.b1.value() + a.b2.value()) + a.a2.value() * (a.b1.value() - a.b2.value());
    EXPECT_EQ(row.s, s);
    EXPECT_TRUE(row.s == 2 || row.s == -2);
    plus += row.s == 2 ? 1 : 0;
  }
  EXPECT_EQ(distinct.size(), 16U);
  EXPECT_EQ(plus, 8);
}

TEST(EnumerateAssignments, ConvexMixturesStayWithinTwo) {
  // Any local distribution is a mixture of the 16 rows, so its S is bounded by max |s|.
  const Enumeration e = enumerate_assignments();
  std::uint64_t state = 12345;
  for (int t = 0; t < 1000; ++t) {
    double total = 0.0;
    double s = 0.0;
    for (const AssignmentRow& row : e.rows) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      const double w = static_cast<double>(state >> 11) * 0x1.0p-53;
      total += w;
      s += w * row.s;
    }
    EXPECT_LE(std::abs(s / total), 2.0 + 1e-12);
  }
}

TEST(TailBound, Examples) {
  EXPECT_EQ(tail_bound(10, 0.0), 1.0);
  EXPECT_EQ(tail_bound(1'000'000, 0.0), 1.0);
  // exp(-1e4 * 0.25 / 128) = exp(-19.53125)
  const double expected = std::exp(-19.53125);
  EXPECT_DOUBLE_EQ(tail_bound(10'000, 0.5), expected);
  EXPECT_NEAR(tail_bound(10'000, 0.5), 3.3e-9, 0.05e-9);
  for (double eps : {0.05, 0.1, 0.3}) {
    const double b = tail_bound(1000, eps);
    EXPECT_NEAR(tail_bound(2000, eps), b * b, 1e-15 + 1e-12 * b * b);
  }
}

TEST(TailBound, DomainErrors) {
  EXPECT_THROW(tail_bound(0, 0.1), std::domain_error);
  EXPECT_THROW(tail_bound(10, -0.1), std::domain_error);
  EXPECT_THROW(tail_bound(10, NAN), std::domain_error);
  EXPECT_THROW(tail_bound(10, 0.1, 0.0), std::domain_error);
}

TEST(TailBound, MonotoneInTrialsAndEpsilon) {
  const std::vector<std::uint64_t> ns = {1, 2, 10, 100, 1000, 10000, 100000};
  const std::vector<double> eps = {0.0, 0.01, 0.1, 0.3, 0.5, 1.0, 2.0};
  for (std::size_t a = 0; a < ns.size(); ++a) {
    for (std::size_t b = 0; b < eps.size(); ++b) {
      const double here = tail_bound(ns[a], eps[b]);
      EXPECT_GE(here, 0.0);
      EXPECT_LE(here, 1.0);
      if (a + 1 < ns.size()) EXPECT_LE(tail_bound(ns[a + 1], eps[b]), here);
      if (b + 1 < eps.size()) EXPECT_LE(tail_bound(ns[a], eps[b + 1]), here);
    }
  }
}

TEST(TailBound, SingleTrialCertifiesNothing) {
  // |S_hat| <= 4 for one trial, so eps <= 2.
  for (double eps : {0.0, 0.5, 1.0, 2.0}) {
    EXPECT_GE(tail_bound(1, eps), std::exp(-4.0 * 4.0 / kBoundConstant));
    EXPECT_GE(tail_bound(1, eps), 0.96);
  }
  EXPECT_THROW(make_certificate(std::vector<TrialRecord>{rec(0, 1, 1, 1, 1)}), EmptyCellError);
}

TEST(MakeCertificate, SyntheticViolation) {
  // r11 = r12 = r21 = 0.7, r22 = -0.7: S = 2.8 with 2500 trials per cell.
  const auto records = balanced_records(2500, {{{2125, 2125}, {2125, 375}}});
  const Certificate c = make_certificate(records, 5, "synthetic");
  EXPECT_EQ(c.trials, 10'000U);
  EXPECT_NEAR(c.s_observed, 2.8, 1e-12);
  EXPECT_NEAR(c.s_ratio, 2.8, 1e-12);
  EXPECT_NEAR(c.epsilon, 0.8, 1e-12);
  EXPECT_NEAR(c.tail_bound, std::exp(-10'000 * 0.64 / kBoundConstant), 1e-30);
  EXPECT_NEAR(c.two_sided_bound, 2.0 * c.tail_bound, 1e-30);
  EXPECT_EQ(c.seed, std::optional<std::uint64_t>(5));
  EXPECT_EQ(c.strategy, "synthetic");
}

TEST(MakeCertificate, SignModelClaimsNoViolation) {
  ExperimentSpec spec = base_spec("sign");
  spec.trials = 1'000'000;
  spec.seed = 2021;
  const Certificate c = make_certificate(run_experiment(spec).records, spec.seed, spec.strategy);
  EXPECT_LT(c.epsilon, 0.02);
  EXPECT_GT(c.tail_bound, 0.9);
  EXPECT_NEAR(c.s_observed, -2.0, 0.02);
}

TEST(CertificateJson, RoundTrips) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentSpec spec = base_spec(seed % 2 == 0 ? "sign" : "faithful");
    spec.trials = 2000;
    spec.seed = seed;
    Certificate c = make_certificate(run_experiment(spec).records, seed, spec.strategy);
    if (seed == 3) c.seed.reset();
    const Certificate back = certificate_from_json(certificate_to_json(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(certificate_to_json(back), certificate_to_json(c));
  }
  EXPECT_THROW(certificate_from_json("{}"), ConfigError);
  EXPECT_THROW(certificate_from_json("not json"), ConfigError);
}

TEST(CertificateJson, CarriesSchemaVersionAndFields) {
  const auto records = balanced_records(10, {{{5, 5}, {5, 5}}});
  const std::string text = certificate_to_json(make_certificate(records, 1, "x"));
  for (const char* key : {"\"schema_version\"", "\"n_ij\"", "\"r_ij\"", "\"S\"", "\"N\"", "\"epsilon\"",
                          "\"tail_bound\"", "\"seed\"", "\"strategy\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(EmpiricalTail, SignModelWithinBound) {
  const TailEstimate t = empirical_tail(base_spec("sign"), 1000, 0.3, 1000, 41);
  EXPECT_EQ(t.repetitions, 1000U);
  EXPECT_DOUBLE_EQ(t.bound, tail_bound(1000, 0.3));
  EXPECT_TRUE(t.consistent_with_bound());
  EXPECT_LE(t.frequency(), t.bound + 3.0 * t.bound_sigma());
}

TEST(EmpiricalTail, MemoryAdversaryWithinBound) {
  const TailEstimate t = empirical_tail(base_spec("memory_adversary"), 1000, 0.3, 1000, 42);
  EXPECT_TRUE(t.consistent_with_bound());
  // The adversary sits at S = +2 so the upper tail actually gets exercised.
  EXPECT_GT(t.upper_exceedances, 0U);
}

TEST(EmpiricalTail, FlawedReportedStatisticExceedsAlways) {
  const TailEstimate t = empirical_tail(base_spec("flawed", true), 10'000, 0.5, 100, 43, Statistic::kReported);
  EXPECT_GE(t.lower_frequency(), 0.99);
  EXPECT_FALSE(t.consistent_with_bound());
  EXPECT_THROW(empirical_tail(base_spec("sign"), 100, 0.5, 10, 1, Statistic::kReported), ContractError);
}

TEST(EmpiricalTail, IndependentOfWorkerCount) {
  const auto one = repetition_statistics(base_spec("faithful"), 500, 40, 44, Statistic::kOutcomes, 1);
  const auto three = repetition_statistics(base_spec("faithful"), 500, 40, 44, Statistic::kOutcomes, 3);
  EXPECT_EQ(one, three);
  EXPECT_THROW(repetition_statistics(base_spec("sign"), 500, 0, 1), ConfigError);
}

TEST(EmpiricalTail, CountsBothTails) {
  const std::vector<double> s = {2.6, -2.7, 1.0, -1.0, 2.5, -2.5};
  const TailEstimate t = tail_from_statistics(s, 100, 0.5);
  EXPECT_EQ(t.upper_exceedances, 2U);
  EXPECT_EQ(t.lower_exceedances, 2U);
  EXPECT_DOUBLE_EQ(t.upper_frequency(), 2.0 / 6.0);
}

}  // namespace
}  // namespace bellsim::certify
