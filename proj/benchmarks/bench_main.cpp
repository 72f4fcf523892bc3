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

#include <benchmark/benchmark.h>

#include "bellsim/certify.hpp"
#include "bellsim/clifford.hpp"
#include "bellsim/protocol.hpp"
#include "bellsim/qmoracle.hpp"
#include "bellsim/rng.hpp"

namespace {

using namespace bellsim;

void BM_CliffordProduct(benchmark::State& state) {
  Rng rng(1);
  clifford::RealMultivector::Coefficients ca{}, cb{};
  for (double& v : ca) v = rng.uniform(-1, 1);
  for (double& v : cb) v = rng.uniform(-1, 1);
  clifford::RealMultivector a(ca), b(cb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a = a * b);
    a = clifford::RealMultivector(ca);
  }
}
BENCHMARK(BM_CliffordProduct);

void BM_ExhaustiveAssociativity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(clifford::associativity_check(0, 0));
}
BENCHMARK(BM_ExhaustiveAssociativity);

void BM_HermitianEigen(benchmark::State& state) {
  const Settings s = Settings::canonical();
  const qm::Observable op = qm::chsh_operator(s.a1, s.a2, s.b1, s.b2);
  for (auto _ : state) benchmark::DoNotOptimize(qm::hermitian_eigen(op.matrix()));
}
BENCHMARK(BM_HermitianEigen);

void BM_ProtocolThroughput(benchmark::State& state, const char* strategy, bool diagnosis) {
  ExperimentSpec spec;
  spec.strategy = strategy;
  spec.trials = static_cast<std::uint64_t>(state.range(0));
  spec.settings = Settings::canonical();
  spec.diagnosis_mode = diagnosis;
  spec.regime = make_strategy(strategy)->memory_mode();
  for (auto _ : state) {
    ChshTally tally;
    stream_experiment(spec, [&](const TrialRecord& r, const double*) { tally.add(r.i, r.j, r.x * r.y); });
    benchmark::DoNotOptimize(tally.estimate());
    ++spec.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_ProtocolThroughput, sign, "sign", false)->Arg(100000);
BENCHMARK_CAPTURE(BM_ProtocolThroughput, flawed_diagnosis, "flawed", true)->Arg(100000);
BENCHMARK_CAPTURE(BM_ProtocolThroughput, memory_adversary, "memory_adversary", false)->Arg(100000);

void BM_LocalityAudit(benchmark::State& state) {
  ExperimentSpec spec;
  spec.strategy = "sign";
  spec.trials = 10000;
  spec.settings = Settings::canonical();
  const auto records = run_experiment(spec).records;
  for (auto _ : state) benchmark::DoNotOptimize(replay_locality_audit(records, spec));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_LocalityAudit);

}  // namespace

BENCHMARK_MAIN();
