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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/certify.hpp"
#include "bellsim/clifford.hpp"
#include "bellsim/protocol.hpp"
#include "bellsim/qmoracle.hpp"

namespace bellsim::cli {

namespace {

using nlohmann::json;

// Significance below which a contract-respecting run's excess over 2 is
// treated as a broken strategy.
constexpr double kViolationAlpha = 1e-3;

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Where an artifact goes and where the human summary goes.
class Sink {
 public:
  Sink(std::string explicit_path, std::string default_name, std::ostream& out, std::ostream& err)
      : out_(out), err_(err) {
    if (!explicit_path.empty()) {
      path_ = std::move(explicit_path);
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      path_ = (std::filesystem::path(dir) / default_name).string();
    }
  }

  void write(const std::string& content) const {
    if (path_.empty()) {
      out_ << content;
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path_ + "'");
    f << content;
    if (!f) throw IoError("failed writing '" + path_ + "'");
  }

  [[nodiscard]] std::ostream& summary() const { return path_.empty() ? err_ : out_; }
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ostream& out_;
  std::ostream& err_;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
};

ExperimentSpec load_spec(const std::string& path, const Overrides& o) {
  ExperimentSpec spec = parse_experiment_spec(read_file(path));
  if (o.seed) spec.seed = *o.seed;
  if (o.trials) {
    if (*o.trials < 1) throw ConfigError("--trials must be >= 1");
    spec.trials = *o.trials;
  }
  return spec;
}

json coeffs_json(const clifford::ExactMultivector& m) {
  json a = json::array();
  for (std::int64_t c : m.coeffs()) a.push_back(c);
  return a;
}

// ---------------------------------------------------------------------------

int cmd_algebra_check(std::size_t samples, std::uint64_t seed, const Sink& sink) {
  using namespace clifford;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["basis"] = json::array();
  for (std::string_view name : kBasisNames) doc["basis"].push_back(std::string(name));
  json table = json::array();
  for (std::size_t r = 0; r < kDimension; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < kDimension; ++c) {
      const BasisProduct p = kBasisTable[r][c];
      row.push_back(std::string(p.sign > 0 ? "+" : "-") + std::string(kBasisNames[p.index]));
    }
    table.push_back(std::move(row));
  }
  doc["table"] = std::move(table);

  const ExactMultivector m = pseudoscalar();
  const ExactMultivector m2 = m * m;
  const bool m2_is_one = m2 == ExactMultivector::scalar(1);
  doc["pseudoscalar"] = coeffs_json(m);
  doc["pseudoscalar_squared"] = coeffs_json(m2);
  doc["pseudoscalar_squared_is_one"] = m2_is_one;

  const auto witness = zero_divisor_witness();
  const ExactMultivector product = witness.left * witness.right;
  const double residual = norm_multiplicativity_residual(witness.left, witness.right);
  const bool witness_ok = product.is_zero() && !witness.left.is_zero() && !witness.right.is_zero() &&
                          witness.left.norm_squared() == 2 && witness.right.norm_squared() == 2;
  doc["witness"] = {{"left", coeffs_json(witness.left)},
                    {"right", coeffs_json(witness.right)},
                    {"left_norm_squared", witness.left.norm_squared()},
                    {"right_norm_squared", witness.right.norm_squared()},
                    {"left_norm", mv_norm(witness.left)},
                    {"right_norm", mv_norm(witness.right)},
                    {"product", coeffs_json(product)},
                    {"product_is_zero", product.is_zero()}};
  doc["norm_multiplicativity_residual"] = residual;

  const AssociativityReport assoc = associativity_check(samples, seed);
  const bool assoc_ok = assoc.exhaustive_residual == 0 && assoc.basis_triples == 512 &&
                        assoc.max_scaled_sampled_residual <= 1e-12;
  doc["associativity"] = {{"basis_triples", assoc.basis_triples},
                          {"exhaustive_residual", assoc.exhaustive_residual},
                          {"samples", assoc.samples},
                          {"seed", seed},
                          {"max_sampled_residual", assoc.max_sampled_residual},
                          {"max_scaled_sampled_residual", assoc.max_scaled_sampled_residual}};
  const bool central = pseudoscalar_is_central();
  doc["pseudoscalar_central"] = central;

  const bool passed = m2_is_one && witness_ok && residual == -2.0 && assoc_ok && central;
  doc["all_checks_passed"] = passed;
  sink.write(doc.dump(2) + "\n");

  auto& s = sink.summary();
  s << "M^2 = 1: " << (m2_is_one ? "yes" : "NO") << '\n'
    << "(M-1)(M+1) = 0 with |M-1|^2 = |M+1|^2 = 2: " << (witness_ok ? "yes" : "NO") << '\n'
    << "norm multiplicativity residual on witness: " << format_double(residual) << '\n'
    << "exhaustive associativity residual over " << assoc.basis_triples << " triples: " << assoc.exhaustive_residual
    << '\n'
    << "=> Cl(0,3) has zero divisors; it is not a division algebra\n";
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_enumerate(const Sink& sink) {
  const certify::Enumeration e = certify::enumerate_assignments();
  std::ostringstream csv;
  csv << "A1,A2,B1,B2,s\n";
  for (const certify::AssignmentRow& row : e.rows) {
    const DeterministicAssignment& a = row.assignment;
    csv << a.a1.value() << ',' << a.a2.value() << ',' << a.b1.value() << ',' << a.b2.value() << ',' << row.s << '\n';
  }
  sink.write(csv.str());
  sink.summary() << e.rows.size() << " assignments, every s in {-2, 2}: " << (e.only_plus_minus_two ? "yes" : "NO")
                 << ", max |s| = " << e.max_abs_s << '\n';
  return (e.max_abs_s == 2 && e.only_plus_minus_two) ? kExitOk : kExitCheckFailed;
}

int cmd_qm_curve(double start, double stop, double step, const Sink& sink) {
  std::vector<qm::CurvePoint> curve;
  try {
    curve = qm::qm_curve(start, stop, step);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::ostringstream csv;
  csv << "angle_degrees,qm_correlation\n";
  for (const qm::CurvePoint& p : curve) csv << format_double(p.angle_degrees) << ',' << format_double(p.correlation) << '\n';
  sink.write(csv.str());
  sink.summary() << curve.size() << " points of -cos(theta)\n";
  return kExitOk;
}

json reported_block(const ChshEstimate& est) {
  return {{"r_ij", {{est.correlations[0][0], est.correlations[0][1]}, {est.correlations[1][0], est.correlations[1][1]}}},
          {"S", est.s_balanced},
          {"S_ratio", est.s},
          {"illegal_by_contract", true}};
}

int cmd_run(const ExperimentSpec& spec, const std::string& log_path, const Sink& sink, std::ostream& out,
            std::ostream& err) {
  const ExperimentRun run = run_experiment(spec);
  Sink log(log_path, "trials.csv", out, err);
  if (!log.path().empty()) {
    std::ostringstream csv;
    write_trial_log(csv, run.records);
    log.write(csv.str());
  }
  const ChshEstimate est = chsh_statistic(run.records);
  const certify::Certificate cert = certify::make_certificate(est, spec.seed, spec.strategy);
  json doc = json::parse(certify::certificate_to_json(cert));
  doc["regime"] = to_string(spec.regime);
  doc["diagnosis_mode"] = spec.diagnosis_mode;
  doc["bell_three_term"] = est.bell_three_term();
  if (!run.reported.empty()) doc["reported"] = reported_block(reported_chsh(run));
  sink.write(doc.dump(2) + "\n");

  auto& s = sink.summary();
  s << "strategy " << spec.strategy << ", N = " << spec.trials << ", seed = " << spec.seed << '\n'
    << "S = " << format_double(cert.s_observed) << " (per-cell means: " << format_double(cert.s_ratio) << ")\n"
    << "epsilon = " << format_double(cert.epsilon) << ", tail bound = " << format_double(cert.tail_bound) << '\n';
  if (!run.reported.empty()) {
    s << "reported S (override, not an LHV result) = " << format_double(reported_chsh(run).s_balanced) << '\n';
  }
  if (cert.epsilon > 0.0 && cert.tail_bound < kViolationAlpha) {
    s << "outcome CHSH exceeds the local bound beyond the certified tail; strategy is not local\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_certify(const std::string& log_path, std::optional<std::uint64_t> seed, const std::string& strategy,
                double bound_constant, const Sink& sink) {
  std::ifstream in(log_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + log_path + "'");
  const std::vector<TrialRecord> records = read_trial_log(in);
  const certify::Certificate cert = certify::make_certificate(records, seed, strategy, bound_constant);
  sink.write(certify::certificate_to_json(cert) + "\n");
  sink.summary() << "N = " << cert.trials << ", S = " << format_double(cert.s_observed)
                 << ", epsilon = " << format_double(cert.epsilon) << ", tail bound = " << format_double(cert.tail_bound)
                 << '\n';
  return kExitOk;
}

int cmd_sweep(const ExperimentSpec& spec, double start, double stop, double step, const Sink& sink) {
  std::vector<double> grid;
  try {
    grid = angle_grid(start, stop, step);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::vector<SweepRow> rows = correlation_sweep(spec, grid, spec.trials, spec.seed);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  sink.write(csv.str());
  double worst = 0.0;
  for (const SweepRow& r : rows) worst = std::max(worst, std::abs(r.r_lhv - r.r_qm));
  sink.summary() << rows.size() << " angles, " << spec.trials << " trials each; max |r_lhv - r_qm| = "
                 << format_double(worst) << '\n';
  return kExitOk;
}

int cmd_audit(const ExperimentSpec& spec, const std::string& log_path, const Sink& sink) {
  std::vector<TrialRecord> records;
  if (log_path.empty()) {
    records = run_experiment(spec).records;
  } else {
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + log_path + "'");
    records = read_trial_log(in);
  }
  const AuditReport report = replay_locality_audit(records, spec);
  sink.write(audit_report_to_json(report, spec) + "\n");
  auto& s = sink.summary();
  s << "audited " << report.trials_checked << " trials of " << spec.strategy << ": " << report.violations.size()
    << " locality violations";
  if (report.shuffle_checked) s << ", " << report.shuffle_mismatches << " shuffle-replay mismatches";
  if (!report.records_match) s << ", supplied records do not match the replay";
  s << '\n';
  for (std::size_t k = 0; k < std::min<std::size_t>(report.violations.size(), 10); ++k) {
    const LocalityViolation& v = report.violations[k];
    s << "  trial " << v.n << " station " << v.station << ": " << v.outcome << " -> " << v.counterfactual_outcome << '\n';
  }
  return report.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bellsim: Bell-CHSH simulation and certification harness"};
  app.name("bellsim");
  app.require_subcommand(1);
  app.footer(std::string("Artifacts go to --out, else $") + kOutputDirEnv + "/<default name>, else stdout.");

  std::string out_path;
  std::string config_path;
  std::string log_path;
  Overrides overrides;
  auto add_common = [&](CLI::App* sub) { sub->add_option("-o,--out", out_path, "Artifact output path"); };
  auto add_experiment = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "Experiment config JSON")->required();
    sub->add_option("--seed", overrides.seed, "Override the config seed");
    sub->add_option("--trials", overrides.trials, "Override the config N");
  };

  auto* run = app.add_subcommand("run", "Run an experiment; write the trial log and certificate JSON");
  add_experiment(run);
  add_common(run);
  run->add_option("--log", log_path, "Trial log CSV path (default $" + std::string(kOutputDirEnv) + "/trials.csv)");

  std::string certify_input;
  std::optional<std::uint64_t> certify_seed;
  std::string certify_strategy;
  double bound_constant = certify::kBoundConstant;
  auto* cert = app.add_subcommand("certify", "Read a trial log CSV and emit a certificate JSON");
  cert->add_option("log", certify_input, "Trial log CSV (n,i,j,x,y)")->required();
  cert->add_option("--seed", certify_seed, "Seed to record in the certificate");
  cert->add_option("--strategy", certify_strategy, "Strategy name to record in the certificate");
  cert->add_option("--bound-constant", bound_constant, "Azuma constant C in exp(-N eps^2 / C)")
      ->check(CLI::PositiveNumber);
  add_common(cert);

  auto* enumerate = app.add_subcommand("enumerate", "Print the 16 deterministic assignments and their CHSH values");
  add_common(enumerate);

  std::size_t samples = 1000;
  std::uint64_t algebra_seed = 0;
  auto* algebra = app.add_subcommand("algebra-check", "Check the Cl(0,3) zero-divisor refutation in exact arithmetic");
  algebra->add_option("--samples", samples, "Random triples for the floating-point associativity check");
  algebra->add_option("--seed", algebra_seed, "Seed for the random triples");
  add_common(algebra);

  double start = 0.0;
  double stop = 180.0;
  double step = 5.0;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--start", start, "First angle in degrees");
    sub->add_option("--stop", stop, "Last angle in degrees");
    sub->add_option("--step", step, "Angle step in degrees");
  };
  auto* curve = app.add_subcommand("qm-curve", "Emit the singlet correlation -cos(theta) as CSV");
  add_grid(curve);
  add_common(curve);

  auto* sweep = app.add_subcommand("sweep", "Empirical correlation vs angle next to -cos(theta); N per point from config");
  add_experiment(sweep);
  add_grid(sweep);
  add_common(sweep);

  auto* audit = app.add_subcommand("audit", "Replay a run and check locality and memorylessness");
  add_experiment(audit);
  add_common(audit);
  audit->add_option("--log", log_path, "Audit this trial log instead of a fresh run");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("bellsim");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(load_spec(config_path, overrides), log_path, Sink(out_path, "certificate.json", out, err), out, err);
    if (*cert) return cmd_certify(certify_input, certify_seed, certify_strategy, bound_constant, Sink(out_path, "certificate.json", out, err));
    if (*enumerate) return cmd_enumerate(Sink(out_path, "enumerate.csv", out, err));
    if (*algebra) return cmd_algebra_check(samples, algebra_seed, Sink(out_path, "algebra_check.json", out, err));
    if (*curve) return cmd_qm_curve(start, stop, step, Sink(out_path, "qm_curve.csv", out, err));
    if (*sweep) return cmd_sweep(load_spec(config_path, overrides), start, stop, step, Sink(out_path, "sweep.csv", out, err));
    if (*audit) return cmd_audit(load_spec(config_path, overrides), log_path, Sink(out_path, "audit.json", out, err));
  } catch (const Error& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "bellsim: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "bellsim: no subcommand\n";
  return kExitUsage;
}

}  // namespace bellsim::cli
