// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "stormrider/eval.hpp"
#include "stormrider/features.hpp"
#include "stormrider/geo.hpp"
#include "stormrider/learn/forest.hpp"
#include "stormrider/learn/gbdt.hpp"
#include "stormrider/panel.hpp"
#include "stormrider/pipeline.hpp"
#include "stormrider/rng.hpp"
#include "stormrider/synth.hpp"

namespace {

using namespace stormrider;

const StopHourPanel& shared_panel() {
  static const StopHourPanel panel = [] {
    synth::SynthConfig cfg;
    cfg.city.n_stops = 40;
    cfg.days = 21;
    return pipeline::build_features(pipeline::from_corpus(synth::generate(cfg))).panel;
  }();
  return panel;
}

const PanelTable& shared_table() {
  static const PanelTable table = shared_panel().materialize_all();
  return table;
}

void BM_PanelMaterialize(benchmark::State& state) {
  const auto& panel = shared_panel();
  std::vector<std::size_t> rows(panel.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(panel.materialize(rows));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.size()));
}
BENCHMARK(BM_PanelMaterialize)->Unit(benchmark::kMillisecond);

void BM_FitBoosting(benchmark::State& state) {
  const auto& t = shared_table();
  auto hp = learn::Hyperparameters::xgboost();
  hp.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learn::fit_gbdt(t.features, t.target, hp));
}
BENCHMARK(BM_FitBoosting)->Arg(10)->Arg(55)->Unit(benchmark::kMillisecond);

void BM_FitTweedie(benchmark::State& state) {
  const auto& t = shared_table();
  auto hp = learn::Hyperparameters::tweedie();
  hp.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learn::fit_gbdt(t.features, t.target, hp));
}
BENCHMARK(BM_FitTweedie)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FitForest(benchmark::State& state) {
  const auto& t = shared_table();
  auto hp = learn::Hyperparameters::random_forest();
  hp.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(learn::fit_random_forest(t.features, t.target, hp));
}
BENCHMARK(BM_FitForest)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_AmenityDensity(benchmark::State& state) {
  Rng rng(3);
  const LonLat centre{153.0251, -27.4698};
  std::vector<LonLat> stops;
  AmenityPoints points;
  for (int i = 0; i < 500; ++i) stops.push_back(offset_metres(centre, rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3)));
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    points[rng.below(kAmenityCategoryCount)].push_back(
        offset_metres(centre, rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(amenity_density(stops, points));
}
BENCHMARK(BM_AmenityDensity)->Arg(1'000)->Arg(20'000)->Unit(benchmark::kMillisecond);

void BM_IdwSurface(benchmark::State& state) {
  Rng rng(5);
  std::vector<eval::ValuePoint> pts;
  for (int i = 0; i < 500; ++i) {
    pts.push_back({{153.0 + rng.uniform(0, 0.2), -27.6 + rng.uniform(0, 0.2)}, rng.normal(0, 3)});
  }
  const auto box = eval::bounding_box(pts);
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval::idw_surface(pts, box, side, side));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_IdwSurface)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Jenks(benchmark::State& state) {
  Rng rng(9);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = std::round(rng.gamma(2.0, 7.0) * 4.0) / 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(jenks_breaks(values, 5));
}
BENCHMARK(BM_Jenks)->Arg(10'000)->Arg(200'000)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
