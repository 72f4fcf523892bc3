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

#include "bellsim/protocol.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bellsim/rng.hpp"

namespace bellsim {

using nlohmann::json;

std::string to_string(MemoryMode mode) {
  return mode == MemoryMode::kMemoryless ? "MEMORYLESS" : "BETWEEN_TRIAL_MEMORY";
}

MemoryMode memory_mode_from_string(const std::string& text) {
  std::string upper = text;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "MEMORYLESS") return MemoryMode::kMemoryless;
  if (upper == "BETWEEN_TRIAL_MEMORY") return MemoryMode::kBetweenTrialMemory;
  throw ConfigError("unknown regime '" + text + "' (expected MEMORYLESS or BETWEEN_TRIAL_MEMORY)");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ec == std::errc{} ? end : buf.data());
}

Settings Settings::from_degrees(double a1, double a2, double b1, double b2) {
  return {UnitVector3::from_xz_degrees(a1), UnitVector3::from_xz_degrees(a2), UnitVector3::from_xz_degrees(b1),
          UnitVector3::from_xz_degrees(b2)};
}

// ---------------------------------------------------------------------------
// Config

namespace {

UnitVector3 parse_direction(const json& v, const char* key) {
  try {
    if (v.is_number()) return UnitVector3::from_xz_degrees(v.get<double>());
    if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
      return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("setting '") + key + "': " + e.what());
  }
  throw ConfigError(std::string("setting '") + key + "' must be an angle in degrees or a 3-vector");
}

json direction_json(const UnitVector3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentSpec spec;
  try {
    if (!doc.contains("strategy") || !doc["strategy"].is_string()) throw ConfigError("config needs a 'strategy' string");
    spec.strategy = doc["strategy"].get<std::string>();
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) throw ConfigError("'params' must be an object");
      spec.params_json = doc["params"].dump();
    }
    if (doc.contains("N")) {
      const json& n = doc["N"];
      if (!n.is_number_unsigned() || n.get<std::uint64_t>() < 1) throw ConfigError("'N' must be an integer >= 1");
      spec.trials = n.get<std::uint64_t>();
    }
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
      spec.seed = doc["seed"].get<std::uint64_t>();
    }
    // The strategy's own mode is the default regime.
    spec.regime = make_strategy(spec.strategy, spec.params_json)->memory_mode();
    if (doc.contains("regime")) {
      if (!doc["regime"].is_string()) throw ConfigError("'regime' must be a string");
      spec.regime = memory_mode_from_string(doc["regime"].get<std::string>());
    }
    if (doc.contains("settings")) {
      const json& s = doc["settings"];
      if (!s.is_object()) throw ConfigError("'settings' must be an object");
      for (const char* key : {"a1", "a2", "b1", "b2"}) {
        if (!s.contains(key)) throw ConfigError(std::string("settings missing '") + key + "'");
      }
      spec.settings = {parse_direction(s["a1"], "a1"), parse_direction(s["a2"], "a2"), parse_direction(s["b1"], "b1"),
                       parse_direction(s["b2"], "b2")};
    }
    if (doc.contains("diagnosis_mode")) {
      if (!doc["diagnosis_mode"].is_boolean()) throw ConfigError("'diagnosis_mode' must be a boolean");
      spec.diagnosis_mode = doc["diagnosis_mode"].get<bool>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return spec;
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["strategy"] = spec.strategy;
  doc["params"] = json::parse(spec.params_json);
  doc["N"] = spec.trials;
  doc["seed"] = spec.seed;
  doc["regime"] = to_string(spec.regime);
  doc["settings"] = {{"a1", direction_json(spec.settings.a1)},
                     {"a2", direction_json(spec.settings.a2)},
                     {"b1", direction_json(spec.settings.b1)},
                     {"b2", direction_json(spec.settings.b2)}};
  doc["diagnosis_mode"] = spec.diagnosis_mode;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Statistics

double chsh_combination(const std::array<std::array<double, 2>, 2>& r) {
  return r[0][0] + r[0][1] + r[1][0] - r[1][1];
}

double ChshEstimate::bell_three_term() const {
  return std::abs(correlations[0][0] - correlations[0][1]) - correlations[1][1];
}

EmptyCellError::EmptyCellError(int i, int j)
    : Error("setting pair (" + std::to_string(i) + "," + std::to_string(j) + ") never occurred"), i_(i), j_(j) {}

void ChshTally::add(int i, int j, double product) {
  counts_[i - 1][j - 1] += 1;
  sums_[i - 1][j - 1] += product;
  signed_sum_ += chsh_sign(i, j) * product;
  total_sum_ += product;
  ++trials_;
}

ChshEstimate ChshTally::estimate() const {
  ChshEstimate est;
  est.counts = counts_;
  est.trials = trials_;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const std::uint64_t n = counts_[i - 1][j - 1];
      if (n == 0) throw EmptyCellError(i, j);
      est.correlations[i - 1][j - 1] = sums_[i - 1][j - 1] / static_cast<double>(n);
    }
  }
  est.s = chsh_combination(est.correlations);
  est.s_balanced = 4.0 * signed_sum_ / static_cast<double>(trials_);
  return est;
}

double ChshTally::overall_mean() const {
  return trials_ == 0 ? 0.0 : total_sum_ / static_cast<double>(trials_);
}

ChshEstimate chsh_statistic(std::span<const TrialRecord> records) {
  ChshTally tally;
  for (const TrialRecord& r : records) tally.add(r.i, r.j, r.x * r.y);
  return tally.estimate();
}

// ---------------------------------------------------------------------------
// Referee

namespace {

struct PreparedTrial {
  std::uint64_t n = 0;
  int i = 1;
  int j = 1;
  HiddenVariable lambda;
};

class Referee {
 public:
  Referee(const ExperimentSpec& spec, const Strategy& strategy)
      : spec_(spec),
        strategy_(strategy),
        source_(spec.seed, Stream::kSource),
        coins_(spec.seed, Stream::kSettings),
        station_a_seed_(derive_seed(spec.seed, static_cast<std::uint64_t>(Stream::kStationA))),
        station_b_seed_(derive_seed(spec.seed, static_cast<std::uint64_t>(Stream::kStationB))) {
    if (spec.trials < 1) throw ConfigError("N must be >= 1");
    if (strategy.memory_mode() == MemoryMode::kBetweenTrialMemory && spec.regime == MemoryMode::kMemoryless) {
      throw ConfigError("strategy '" + strategy.name() + "' uses between-trial memory but the regime is MEMORYLESS");
    }
    override_ = strategy.correlation_override();
    if (override_ != nullptr && !spec.diagnosis_mode) {
      throw ContractError("strategy '" + strategy.name() +
                          "' reports correlations not computed from its outcomes; refused outside diagnosis_mode");
    }
    stations_ = strategy.make_stations();
  }

  [[nodiscard]] const CorrelationOverride* correlation_override() const { return override_; }
  [[nodiscard]] bool remembers() const { return spec_.regime == MemoryMode::kBetweenTrialMemory; }
  [[nodiscard]] StationPair& stations() { return stations_; }

  // Referee-side randomness for trial n: two fair coins, then the source.
  PreparedTrial prepare(std::uint64_t n) {
    PreparedTrial t;
    t.n = n;
    t.i = coins_.coin() ? 2 : 1;
    t.j = coins_.coin() ? 2 : 1;
    t.lambda = strategy_.sample_lambda(source_);
    return t;
  }

  [[nodiscard]] StationInput input_a(const PreparedTrial& t, int setting_index) const {
    return {t.n, setting_index, spec_.settings.alice(setting_index), t.lambda, local_draw(station_a_seed_, t.n)};
  }
  [[nodiscard]] StationInput input_b(const PreparedTrial& t, int setting_index) const {
    return {t.n, setting_index, spec_.settings.bob(setting_index), t.lambda, local_draw(station_b_seed_, t.n)};
  }

  static TrialRecord play(const StationPair& s, const StationInput& a, const StationInput& b) {
    TrialRecord r;
    r.n = a.n;
    r.i = static_cast<std::uint8_t>(a.setting_index);
    r.j = static_cast<std::uint8_t>(b.setting_index);
    r.x = s.alice->respond(a);
    r.y = s.bob->respond(b);
    return r;
  }

  TrialRecord play(const PreparedTrial& t) { return play(stations_, input_a(t, t.i), input_b(t, t.j)); }

  void finish(const TrialRecord& r) {
    if (!remembers()) return;
    stations_.alice->observe(r);
    stations_.bob->observe(r);
  }

  double reported(const PreparedTrial& t) const {
    return override_->reported_product(t.lambda, spec_.settings.alice(t.i), spec_.settings.bob(t.j));
  }

 private:
  static double local_draw(std::uint64_t station_seed, std::uint64_t n) {
    return unit_interval(splitmix64(station_seed ^ splitmix64(n)));
  }

  const ExperimentSpec& spec_;
  const Strategy& strategy_;
  Rng source_;
  Rng coins_;
  std::uint64_t station_a_seed_;
  std::uint64_t station_b_seed_;
  const CorrelationOverride* override_ = nullptr;
  StationPair stations_;
};

}  // namespace

void stream_experiment(const ExperimentSpec& spec, const Strategy& strategy, const TrialSink& sink) {
  Referee referee(spec, strategy);
  const bool report = referee.correlation_override() != nullptr;
  for (std::uint64_t n = 0; n < spec.trials; ++n) {
    const PreparedTrial t = referee.prepare(n);
    const TrialRecord r = referee.play(t);
    if (report) {
      const double q = referee.reported(t);
      sink(r, &q);
    } else {
      sink(r, nullptr);
    }
    referee.finish(r);
  }
}

void stream_experiment(const ExperimentSpec& spec, const TrialSink& sink) {
  const auto strategy = make_strategy(spec.strategy, spec.params_json);
  stream_experiment(spec, *strategy, sink);
}

ExperimentRun run_experiment(const ExperimentSpec& spec, const Strategy& strategy) {
  ExperimentRun run;
  run.records.reserve(spec.trials);
  stream_experiment(spec, strategy, [&run](const TrialRecord& r, const double* q) {
    run.records.push_back(r);
    if (q != nullptr) run.reported.push_back(*q);
  });
  return run;
}

ExperimentRun run_experiment(const ExperimentSpec& spec) {
  const auto strategy = make_strategy(spec.strategy, spec.params_json);
  return run_experiment(spec, *strategy);
}

ChshEstimate reported_chsh(const ExperimentRun& run) {
  if (run.reported.size() != run.records.size()) {
    throw ContractError("run carries no reported correlations (not a diagnosis run with an override)");
  }
  ChshTally tally;
  for (std::size_t k = 0; k < run.records.size(); ++k) tally.add(run.records[k].i, run.records[k].j, run.reported[k]);
  return tally.estimate();
}

std::vector<double> angle_grid(double start_degrees, double stop_degrees, double step_degrees) {
  std::vector<double> out;
  for (const qm::CurvePoint& p : qm::qm_curve(start_degrees, stop_degrees, step_degrees)) {
    out.push_back(p.angle_degrees);
  }
  return out;
}

std::vector<SweepRow> correlation_sweep(const ExperimentSpec& base, std::span<const double> angles_degrees,
                                        std::uint64_t trials_per_point, std::uint64_t seed) {
  if (angles_degrees.empty()) throw ConfigError("sweep grid is empty");
  const auto strategy = make_strategy(base.strategy, base.params_json);
  std::vector<SweepRow> rows;
  rows.reserve(angles_degrees.size());
  for (std::size_t k = 0; k < angles_degrees.size(); ++k) {
    const double theta = angles_degrees[k];
    ExperimentSpec point = base;
    point.trials = trials_per_point;
    point.seed = derive_seed(seed, (static_cast<std::uint64_t>(Stream::kSweepPoint) << 32) + k);
    point.settings = Settings::from_degrees(0.0, 0.0, theta, theta);

    ChshTally outcomes;
    ChshTally reported;
    bool any_reported = false;
    stream_experiment(point, *strategy, [&](const TrialRecord& r, const double* q) {
      outcomes.add(r.i, r.j, r.x * r.y);
      if (q != nullptr) {
        reported.add(r.i, r.j, *q);
        any_reported = true;
      }
    });
    SweepRow row;
    row.angle_degrees = theta;
    row.r_lhv = outcomes.overall_mean();
    if (any_reported) row.r_reported = reported.overall_mean();
    row.r_qm = qm::singlet_correlation(point.settings.a1, point.settings.b1);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Audit

AuditReport replay_locality_audit(std::span<const TrialRecord> records, const ExperimentSpec& spec,
                                  const Strategy& strategy) {
  AuditReport report;
  Referee referee(spec, strategy);
  const bool shuffle = spec.regime == MemoryMode::kMemoryless;
  std::vector<PreparedTrial> kept;
  std::vector<TrialRecord> replayed;
  if (shuffle) kept.reserve(spec.trials);
  replayed.reserve(spec.trials);

  for (std::uint64_t n = 0; n < spec.trials; ++n) {
    const PreparedTrial t = referee.prepare(n);
    const StationPair& st = referee.stations();
    const int other_i = 3 - t.i;
    const int other_j = 3 - t.j;

    // Bob, with Alice invoked first at i and at i'.
    (void)st.alice->respond(referee.input_a(t, t.i));
    const Outcome y_actual = st.bob->respond(referee.input_b(t, t.j));
    (void)st.alice->respond(referee.input_a(t, other_i));
    const Outcome y_counter = st.bob->respond(referee.input_b(t, t.j));
    if (y_actual != y_counter) report.violations.push_back({n, 'B', y_actual.value(), y_counter.value()});

    // Alice, with Bob invoked first at j and at j'.
    (void)st.bob->respond(referee.input_b(t, t.j));
    const Outcome x_actual = st.alice->respond(referee.input_a(t, t.i));
    (void)st.bob->respond(referee.input_b(t, other_j));
    const Outcome x_counter = st.alice->respond(referee.input_a(t, t.i));
    if (x_actual != x_counter) report.violations.push_back({n, 'A', x_actual.value(), x_counter.value()});

    const TrialRecord r = referee.play(t);
    replayed.push_back(r);
    if (shuffle) kept.push_back(t);
    referee.finish(r);
    ++report.trials_checked;
  }

  report.records_match = records.size() == replayed.size() && std::equal(records.begin(), records.end(), replayed.begin());

  if (shuffle) {
    report.shuffle_checked = true;
    std::vector<std::uint64_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffler(spec.seed, Stream::kSampling);
    for (std::size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[shuffler.next_u64() % k]);
    }
    const StationPair fresh = strategy.make_stations();
    for (std::uint64_t n : order) {
      const PreparedTrial& t = kept[n];
      const TrialRecord r = Referee::play(fresh, referee.input_a(t, t.i), referee.input_b(t, t.j));
      if (r != replayed[n]) ++report.shuffle_mismatches;
    }
  }
  return report;
}

AuditReport replay_locality_audit(std::span<const TrialRecord> records, const ExperimentSpec& spec) {
  const auto strategy = make_strategy(spec.strategy, spec.params_json);
  return replay_locality_audit(records, spec, *strategy);
}

std::string audit_report_to_json(const AuditReport& report, const ExperimentSpec& spec) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["strategy"] = spec.strategy;
  doc["seed"] = spec.seed;
  doc["N"] = spec.trials;
  doc["regime"] = to_string(spec.regime);
  doc["trials_checked"] = report.trials_checked;
  doc["records_match"] = report.records_match;
  json violations = json::array();
  for (const LocalityViolation& v : report.violations) {
    violations.push_back({{"n", v.n},
                          {"station", std::string(1, v.station)},
                          {"outcome", v.outcome},
                          {"counterfactual_outcome", v.counterfactual_outcome}});
  }
  doc["violation_count"] = report.violations.size();
  doc["violations"] = std::move(violations);
  doc["shuffle_checked"] = report.shuffle_checked;
  doc["shuffle_mismatches"] = report.shuffle_mismatches;
  doc["passed"] = report.passed();
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// CSV

void write_trial_log(std::ostream& out, std::span<const TrialRecord> records) {
  out << "n,i,j,x,y\n";
  for (const TrialRecord& r : records) {
    out << r.n << ',' << int{r.i} << ',' << int{r.j} << ',' << r.x.value() << ',' << r.y.value() << '\n';
  }
}

std::vector<TrialRecord> read_trial_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trial log is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,i,j,x,y") throw ConfigError("trial log header must be 'n,i,j,x,y', got '" + line + "'");

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<long long, 5> field{};
    std::size_t pos = 0;
    for (std::size_t k = 0; k < field.size(); ++k) {
      const std::size_t comma = k + 1 < field.size() ? line.find(',', pos) : line.size();
      if (comma == std::string::npos) throw ConfigError("trial log line " + std::to_string(line_no) + ": too few fields");
      const char* first = line.data() + pos;
      const char* last = line.data() + comma;
      const auto [ptr, ec] = std::from_chars(first, last, field[k]);
      if (ec != std::errc{} || ptr != last) {
        throw ConfigError("trial log line " + std::to_string(line_no) + ": bad field " + std::to_string(k + 1));
      }
      pos = comma + 1;
    }
    const auto bad = [&](const std::string& what) {
      return ConfigError("trial log line " + std::to_string(line_no) + ": " + what);
    };
    if (field[0] < 0) throw bad("negative trial index");
    if ((field[1] != 1 && field[1] != 2) || (field[2] != 1 && field[2] != 2)) throw bad("settings must be 1 or 2");
    if ((field[3] != 1 && field[3] != -1) || (field[4] != 1 && field[4] != -1)) throw bad("outcomes must be -1 or +1");
    TrialRecord r;
    r.n = static_cast<std::uint64_t>(field[0]);
    r.i = static_cast<std::uint8_t>(field[1]);
    r.j = static_cast<std::uint8_t>(field[2]);
    r.x = Outcome::from_int(static_cast<int>(field[3]));
    r.y = Outcome::from_int(static_cast<int>(field[4]));
    records.push_back(r);
  }
  return records;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  const bool reported = !rows.empty() && rows.front().r_reported.has_value();
  out << "angle_degrees,r_lhv,r_qm" << (reported ? ",r_reported" : "") << '\n';
  for (const SweepRow& row : rows) {
    out << format_double(row.angle_degrees) << ',' << format_double(row.r_lhv) << ',' << format_double(row.r_qm);
    if (reported) out << ',' << format_double(row.r_reported.value_or(0.0));
    out << '\n';
  }
}

}  // namespace bellsim
