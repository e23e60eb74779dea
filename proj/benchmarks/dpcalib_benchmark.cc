//
// Copyright 2026 The dpcalib Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "dpcalib/calibration.h"
#include "dpcalib/dataset.h"
#include "dpcalib/laplace.h"
#include "dpcalib/predicate.h"
#include "dpcalib/query_engine.h"
#include "dpcalib/random.h"
#include "dpcalib/verification.h"

namespace dpcalib {
namespace {

void BM_LaplaceSample(benchmark::State& state) {
  const LaplaceDistribution d(*PrivacyLevel::Create(0.08));
  SeededUniform uniform(1);
  for (auto _ : state) benchmark::DoNotOptimize(d.Sample(uniform));
}
BENCHMARK(BM_LaplaceSample);

void BM_EpsilonFor(benchmark::State& state) {
  const ConfidenceSpec spec = *ConfidenceSpec::Create(0.2, 0.8);
  const ReferenceCount ref = *ReferenceCount::Create(100);
  for (auto _ : state) benchmark::DoNotOptimize(EpsilonFor(spec, ref));
}
BENCHMARK(BM_EpsilonFor);

Dataset SyntheticDataset(int rows) {
  std::vector<std::vector<Value>> data;
  data.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    data.push_back({Value::FromNumber(i % 90),
                    Value::FromText(i % 10 == 0 ? "Rome" : "Milan")});
  }
  return *Dataset::Create({"age", "city"}, std::move(data));
}

void BM_TrueCount(benchmark::State& state) {
  const Dataset dataset = SyntheticDataset(static_cast<int>(state.range(0)));
  const CountPredicate predicate = *ParsePredicate("age >= 65");
  for (auto _ : state) benchmark::DoNotOptimize(TrueCount(dataset, predicate));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrueCount)->Range(1 << 10, 1 << 20);

void BM_EmpiricalCoverage(benchmark::State& state) {
  const PrivacyLevel level = *PrivacyLevel::Create(0.080472);
  const ReferenceCount ref = *ReferenceCount::Create(100);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EmpiricalCoverage(level, 0.2, ref, 1 << 20, 7, workers));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_EmpiricalCoverage)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
}  // namespace dpcalib

BENCHMARK_MAIN();
