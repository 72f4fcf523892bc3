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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bellsim/rng.hpp"

namespace bellsim::certify {

using nlohmann::json;

Enumeration enumerate_assignments() {
  Enumeration e;
  bool parity_ok = true;
  for (unsigned bits = 0; bits < 16; ++bits) {
    auto pick = [bits](unsigned b) { return ((bits >> b) & 1U) != 0 ? Outcome::minus() : Outcome::plus(); };
    AssignmentRow& row = e.rows[bits];
    row.assignment = {pick(3), pick(2), pick(1), pick(0)};
    row.s = row.assignment.chsh_value();
    e.max_abs_s = std::max(e.max_abs_s, std::abs(row.s));
    parity_ok = parity_ok && (row.s == 2 || row.s == -2);
  }
  e.only_plus_minus_two = parity_ok;
  return e;
}

double tail_bound(std::uint64_t trials, double epsilon, double bound_constant) {
  if (trials < 1) throw std::domain_error("tail_bound: N must be >= 1");
  if (!(epsilon >= 0.0)) throw std::domain_error("tail_bound: epsilon must be >= 0");
  if (!(bound_constant > 0.0)) throw std::domain_error("tail_bound: bound constant must be > 0");
  return std::min(1.0, std::exp(-static_cast<double>(trials) * epsilon * epsilon / bound_constant));
}

Certificate make_certificate(const ChshEstimate& estimate, std::optional<std::uint64_t> seed, std::string strategy,
                             double bound_constant) {
  Certificate c;
  c.trials = estimate.trials;
  c.s_observed = estimate.s_balanced;
  c.s_ratio = estimate.s;
  c.epsilon = std::max(0.0, std::abs(estimate.s_balanced) - 2.0);
  c.bound_constant = bound_constant;
  c.tail_bound = tail_bound(c.trials, c.epsilon, bound_constant);
  c.two_sided_bound = std::min(1.0, 2.0 * c.tail_bound);
  c.counts = estimate.counts;
  c.correlations = estimate.correlations;
  c.seed = seed;
  c.strategy = std::move(strategy);
  return c;
}

Certificate make_certificate(std::span<const TrialRecord> records, std::optional<std::uint64_t> seed,
                             std::string strategy, double bound_constant) {
  return make_certificate(chsh_statistic(records), seed, std::move(strategy), bound_constant);
}

std::string certificate_to_json(const Certificate& cert) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["strategy"] = cert.strategy;
  doc["seed"] = cert.seed ? json(*cert.seed) : json(nullptr);
  doc["N"] = cert.trials;
  doc["n_ij"] = {{cert.counts[0][0], cert.counts[0][1]}, {cert.counts[1][0], cert.counts[1][1]}};
  doc["r_ij"] = {{cert.correlations[0][0], cert.correlations[0][1]}, {cert.correlations[1][0], cert.correlations[1][1]}};
  doc["S"] = cert.s_observed;
  doc["S_ratio"] = cert.s_ratio;
  doc["epsilon"] = cert.epsilon;
  doc["tail_bound"] = cert.tail_bound;
  doc["two_sided_bound"] = cert.two_sided_bound;
  doc["bound_constant"] = cert.bound_constant;
  return doc.dump(2);
}

Certificate certificate_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Certificate c;
    c.strategy = doc.at("strategy").get<std::string>();
    if (!doc.at("seed").is_null()) c.seed = doc.at("seed").get<std::uint64_t>();
    c.trials = doc.at("N").get<std::uint64_t>();
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        c.counts[i][j] = doc.at("n_ij").at(i).at(j).get<std::uint64_t>();
        c.correlations[i][j] = doc.at("r_ij").at(i).at(j).get<double>();
      }
    }
    c.s_observed = doc.at("S").get<double>();
    c.s_ratio = doc.at("S_ratio").get<double>();
    c.epsilon = doc.at("epsilon").get<double>();
    c.tail_bound = doc.at("tail_bound").get<double>();
    c.two_sided_bound = doc.at("two_sided_bound").get<double>();
    c.bound_constant = doc.at("bound_constant").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("certificate JSON: ") + e.what());
  }
}

double TailEstimate::upper_frequency() const {
  return repetitions == 0 ? 0.0 : static_cast<double>(upper_exceedances) / static_cast<double>(repetitions);
}

double TailEstimate::lower_frequency() const {
  return repetitions == 0 ? 0.0 : static_cast<double>(lower_exceedances) / static_cast<double>(repetitions);
}

double TailEstimate::frequency() const { return std::max(upper_frequency(), lower_frequency()); }

double TailEstimate::bound_sigma() const {
  if (repetitions == 0) return 0.0;
  return std::sqrt(bound * (1.0 - bound) / static_cast<double>(repetitions));
}

bool TailEstimate::consistent_with_bound(double sigmas) const {
  const double limit = bound + sigmas * bound_sigma();
  return upper_frequency() <= limit && lower_frequency() <= limit;
}

std::vector<double> repetition_statistics(const ExperimentSpec& base, std::uint64_t trials, std::uint64_t repetitions,
                                          std::uint64_t seed, Statistic statistic, unsigned workers) {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (trials < 1) throw ConfigError("N must be >= 1");
  const auto strategy = make_strategy(base.strategy, base.params_json);
  if (statistic == Statistic::kReported && strategy->correlation_override() == nullptr) {
    throw ContractError("strategy '" + strategy->name() + "' has no reported correlation");
  }

  std::vector<double> out(repetitions, 0.0);
  const auto run_one = [&](std::uint64_t rep) {
    ExperimentSpec spec = base;
    spec.trials = trials;
    spec.seed = derive_seed(seed, (static_cast<std::uint64_t>(Stream::kRepetition) << 40) + rep);
    double signed_sum = 0.0;
    stream_experiment(spec, *strategy, [&](const TrialRecord& r, const double* q) {
      const double value = statistic == Statistic::kReported ? *q : static_cast<double>(r.x * r.y);
      signed_sum += chsh_sign(r.i, r.j) * value;
    });
    out[rep] = 4.0 * signed_sum / static_cast<double>(trials);
  };

  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(repetitions, 256))));
  if (workers == 1) {
    for (std::uint64_t rep = 0; rep < repetitions; ++rep) run_one(rep);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t rep = w; rep < repetitions; rep += workers) run_one(rep);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

TailEstimate tail_from_statistics(std::span<const double> s_hats, std::uint64_t trials, double epsilon,
                                  double bound_constant) {
  TailEstimate t;
  t.repetitions = s_hats.size();
  t.bound = tail_bound(trials, epsilon, bound_constant);
  for (double s : s_hats) {
    if (s >= 2.0 + epsilon) ++t.upper_exceedances;
    if (s <= -2.0 - epsilon) ++t.lower_exceedances;
  }
  return t;
}

TailEstimate empirical_tail(const ExperimentSpec& base, std::uint64_t trials, double epsilon,
                            std::uint64_t repetitions, std::uint64_t seed, Statistic statistic, unsigned workers) {
  const std::vector<double> s_hats = repetition_statistics(base, trials, repetitions, seed, statistic, workers);
  return tail_from_statistics(s_hats, trials, epsilon);
}

}  // namespace bellsim::certify
