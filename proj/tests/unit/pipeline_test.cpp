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

#include <algorithm>
#include <filesystem>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "stormrider/errors.hpp"
#include "stormrider/io.hpp"
#include "stormrider/pipeline.hpp"
#include "test_support.hpp"

namespace stormrider::pipeline {
namespace {

namespace fs = std::filesystem;
using stormrider::testing::ScratchDir;

void expect_partition(const DataSplit& s, std::size_t n) {
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), n);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(all[i], i);
}

TEST(Split, RandomSizesDisjointAndRepeatable) {
  const auto s = random_split(10, 0.2, 3);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  expect_partition(s, 10);
  const auto again = random_split(10, 0.2, 3);
  EXPECT_EQ(again.test, s.test);
  EXPECT_EQ(again.train, s.train);
  EXPECT_NE(random_split(1000, 0.2, 4).test, random_split(1000, 0.2, 5).test);
  EXPECT_THROW(random_split(10, 1.0, 1), ConfigError);
  EXPECT_THROW(random_split(10, 0.0, 1), ConfigError);
}

TEST(Split, HoldoutOfPublishedPanel) { EXPECT_EQ(holdout_size(10'661'040, 0.2), 2'132'208u); }

TEST(Split, TimeSplitHoldsOutFinalHours) {
  synth::SynthConfig cfg;
  cfg.city.n_stops = 4;
  cfg.days = 9;
  const auto fb = build_features(from_corpus(synth::generate(cfg)));
  const auto s = time_split(fb.panel, 0.25);
  expect_partition(s, fb.panel.size());
  std::int64_t last_train = 0, first_test = 1 << 30;
  for (const auto r : s.train) last_train = std::max(last_train, fb.panel.hour_of(r));
  for (const auto r : s.test) first_test = std::min(first_test, fb.panel.hour_of(r));
  EXPECT_LT(last_train, first_test);
  const auto table_split = time_split(fb.panel.materialize_all(), 0.25);
  EXPECT_EQ(table_split.test, s.test);
}

TEST(Features, BuildFromCorpusFilesMatchesInMemory) {
  synth::SynthConfig cfg;
  cfg.city.n_stops = 6;
  cfg.days = 9;
  const auto corpus = synth::generate(cfg);
  ScratchDir dir;
  synth::write_corpus(corpus, dir.path());
  const auto from_files = build_features(load_sources(corpus_paths(dir.path())));
  const auto in_memory = build_features(from_corpus(corpus));
  ASSERT_EQ(from_files.panel.size(), in_memory.panel.size());
  EXPECT_EQ(from_files.panel.counts(), in_memory.panel.counts());
  EXPECT_EQ(from_files.breaks.interior_breaks, in_memory.breaks.interior_breaks);
  const auto a = from_files.panel.materialize_all();
  const auto b = in_memory.panel.materialize_all();
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.target, b.target);
}

TEST(Features, PanelCsvRoundTrip) {
  synth::SynthConfig cfg;
  cfg.city.n_stops = 3;
  cfg.days = 8;
  const auto fb = build_features(from_corpus(synth::generate(cfg)));
  ScratchDir dir;
  io::write_panel_csv(dir.path() / "panel.csv", fb.panel);
  EXPECT_TRUE(fs::exists(io::schema_path(dir.path() / "panel.csv")));
  const auto back = io::read_panel_csv(dir.path() / "panel.csv");
  const auto table = fb.panel.materialize_all();
  EXPECT_EQ(back.features, table.features);
  EXPECT_EQ(back.target, table.target);
  EXPECT_EQ(back.row_hour, table.row_hour);
  EXPECT_EQ(back.stop_ids, table.stop_ids);
}

TEST(Baselines, ReadLagColumns) {
  synth::SynthConfig cfg;
  cfg.city.n_stops = 2;
  cfg.days = 8;
  const auto fb = build_features(from_corpus(synth::generate(cfg)));
  const auto table = fb.panel.materialize_all();
  const auto persistence = persistence_forecast(table);
  const auto seasonal = seasonal_naive_forecast(table);
  const auto& counts = fb.panel.counts();
  for (std::size_t r = 0; r < table.size(); ++r) {
    EXPECT_EQ(persistence[r], counts.at(table.row_stop[r], table.row_hour[r] - 1));
    EXPECT_EQ(seasonal[r], counts.at(table.row_stop[r], table.row_hour[r] - 168));
  }
}

std::string small_run_config(const std::string& extra = "") {
  return "[run]\n"
         "output = \"out\"\n"
         "seed = 9\n"
         "algorithms = [\"rf\", \"xgb\", \"tweedie\"]\n"
         "surface_grid = [12, 10]\n" +
         extra +
         "\n[params.rf]\nn_trees = 8\n"
         "[params.tweedie]\nn_trees = 40\nlearning_rate = 0.2\n"
         "[synth]\nstops = 12\ndays = 10\n";
}

TEST(Run, UnknownAlgorithmFailsBeforeCompute) {
  const auto cfg = KvConfig::parse("[run]\nalgorithms = [\"rf\", \"svm\"]\n");
  EXPECT_THROW(parse_run_config(cfg, {}), ConfigError);
  EXPECT_THROW(parse_run_config(KvConfig::parse("[run]\nholdout = 1.5\n"), {}), ConfigError);
  EXPECT_THROW(parse_run_config(KvConfig::parse("[run]\nsplit = \"sideways\"\n"), {}), ConfigError);
  EXPECT_THROW(parse_run_config(KvConfig::parse("[params.rf]\nmtry = 99\n"), {}), ConfigError);
}

TEST(Run, EndToEndArtifactsAndDeterminism) {
  ScratchDir dir;
  const auto cfg_path = dir.write("run.toml", small_run_config());
  auto cfg = load_run_config(cfg_path);
  EXPECT_EQ(cfg.output_dir, dir.path() / "out");
  const auto ex = run(cfg);
  ASSERT_EQ(ex.models.size(), 3u);
  for (const auto& m : ex.models) {
    EXPECT_TRUE(std::isfinite(m.metrics.rmse)) << m.name;
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "models" / (m.name + ".srm")));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "metrics" / (m.name + ".json")));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "errors" / (m.name + ".csv")));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "surfaces" / (m.name + "_all.csv")));
  }
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "importance.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "panel.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "out" / "FAILED"));
  const auto manifest = testing::slurp(dir.path() / "out" / "manifest.json");
  EXPECT_NE(manifest.find("\"config_hash\": \"" + fnv1a_hex(testing::slurp(cfg_path)) + "\""), std::string::npos);
  EXPECT_NE(manifest.find("training_time_minutes"), std::string::npos);

  // Disjoint, covering split.
  std::vector<std::size_t> all = ex.split.train;
  all.insert(all.end(), ex.split.test.begin(), ex.split.test.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());

  // Rerun into a second directory: identical metrics and models.
  cfg.output_dir = dir.path() / "again";
  run(cfg);
  for (const auto& m : ex.models) {
    EXPECT_EQ(testing::slurp(dir.path() / "out" / "metrics" / (m.name + ".json")),
              testing::slurp(dir.path() / "again" / "metrics" / (m.name + ".json")));
    EXPECT_EQ(testing::slurp(dir.path() / "out" / "models" / (m.name + ".srm")),
              testing::slurp(dir.path() / "again" / "models" / (m.name + ".srm")));
  }
}

TEST(Run, FailureLeavesMarker) {
  ScratchDir dir;
  const auto cfg_path = dir.write("run.toml",
                                  "[run]\noutput = \"out\"\n[inputs]\ndir = \"missing\"\n");
  const auto cfg = load_run_config(cfg_path);
  EXPECT_ANY_THROW(run(cfg));
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "FAILED"));
  EXPECT_NE(testing::slurp(dir.path() / "out" / "manifest.json").find("failed"), std::string::npos);
}

TEST(Run, TuningUsesSearchSpace) {
  ScratchDir dir;
  const auto cfg_path = dir.write("run.toml",
                                  "[run]\noutput = \"out\"\nalgorithms = [\"xgb\"]\ntune = true\nbudget = 2\n"
                                  "cv_folds = 2\nwrite_panel = false\nsurface_filters = [\"all\"]\n"
                                  "[space.xgb]\nmax_depth = [1, 3]\n[synth]\nstops = 6\ndays = 9\n");
  const auto ex = run(load_run_config(cfg_path));
  ASSERT_EQ(ex.models.size(), 1u);
  ASSERT_TRUE(ex.models[0].search.has_value());
  EXPECT_EQ(ex.models[0].search->trials.size(), 2u);
  EXPECT_EQ(ex.models[0].params, ex.models[0].search->best);
}

}  // namespace
}  // namespace stormrider::pipeline
