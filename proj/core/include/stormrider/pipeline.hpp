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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stormrider/eval.hpp"
#include "stormrider/features.hpp"
#include "stormrider/ingest.hpp"
#include "stormrider/kv_config.hpp"
#include "stormrider/learn/ensemble.hpp"
#include "stormrider/learn/hyperparameters.hpp"
#include "stormrider/learn/model_selection.hpp"
#include "stormrider/panel.hpp"
#include "stormrider/synth.hpp"

namespace stormrider::pipeline {

// Splitting

struct DataSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// floor(n * fraction), guarded against representation error.
std::size_t holdout_size(std::size_t n, double fraction);

/// Uniform row-level split without replacement. fraction in (0, 1).
DataSplit random_split(std::size_t n, double fraction, std::uint64_t seed);

/// Holds out the last floor(hours * fraction) target hours of every stop.
DataSplit time_split(const StopHourPanel& panel, double fraction);
/// Same rule on a materialised table: the last hours of each stop are held out.
DataSplit time_split(const PanelTable& table, double fraction);

enum class SplitMode : std::uint8_t { kRandom, kTime };

// Inputs to panel

struct InputPaths {
  std::filesystem::path trips;
  std::filesystem::path weather;
  std::filesystem::path stops;
  std::filesystem::path amenities;
  std::filesystem::path calendar;  // [calendar], [geography], [panel]
  std::filesystem::path windows;   // optional
};

/// Standard file names inside a corpus directory; windows only if present.
InputPaths corpus_paths(const std::filesystem::path& dir);

struct SourceData {
  std::vector<StopSite> stops;
  AmenityPoints amenities;
  std::vector<TripRecord> trips;
  std::vector<WeatherReading> weather;
  std::vector<ServiceWindow> windows;
  CalendarConfig calendar;
  GeographyConfig geography;
  Timestamp origin;
  std::int64_t hours = 0;
  std::vector<std::string> notes;  // parse diagnostics worth reporting
};

/// Reads every input file. Without a `[panel]` window the span runs from
/// midnight before the first boarding to midnight after the last.
SourceData load_sources(const InputPaths& paths);
SourceData from_corpus(synth::Corpus corpus);

enum class BreakSource : std::uint8_t { kFitted, kReference };

struct FeatureBuild {
  StopHourPanel panel;
  JenksBreaks breaks;
  CleanReport cleaning;
  std::size_t outside_window = 0;
  CalendarConfig calendar;
};

/// Cleans trips, counts boardings, fixes journey-time classes (fitted on
/// durations boarding before `break_cutoff`, or the reference breaks),
/// derives stop attributes and assembles the panel.
FeatureBuild build_features(SourceData data, BreakSource breaks = BreakSource::kFitted,
                            std::optional<Timestamp> break_cutoff = std::nullopt);

// Training and evaluation

struct ModelSpec {
  std::string name;  // rf, xgb or tweedie
  learn::Hyperparameters params;
};

/// Preset settings for an algorithm name; ConfigError for unknown names.
ModelSpec model_spec(std::string_view name, std::uint64_t seed);

struct ExperimentOptions {
  SplitMode split_mode = SplitMode::kRandom;
  double holdout = 0.2;
  std::uint64_t seed = 42;
  std::vector<ModelSpec> models;
  bool tune = false;
  std::map<std::string, learn::SearchSpace> spaces;
  std::uint64_t budget = 10;
  int cv_folds = 5;
};

struct ModelResult {
  std::string name;
  learn::Hyperparameters params;
  learn::TreeEnsemble model;
  std::vector<eval::PredictionRecord> records;
  eval::MetricsReport metrics;
  double training_seconds = 0.0;
  std::vector<double> importance;
  std::optional<learn::SearchResult> search;
};

struct BaselineResult {
  std::string name;
  std::vector<eval::PredictionRecord> records;
  eval::MetricsReport metrics;
};

struct Experiment {
  DataSplit split;
  std::vector<ModelResult> models;
  std::vector<BaselineResult> baselines;  // persistence, seasonal_naive
};

/// Splits, optionally tunes (CV inside the training rows), trains each model
/// and scores it and the two naive baselines on the held-out rows.
Experiment run_experiment(const StopHourPanel& panel, const ExperimentOptions& options);

std::vector<eval::PredictionRecord> prediction_records(const PanelTable& table, std::span<const double> predicted);

/// Next hour equals this hour (the HourLag column).
std::vector<double> persistence_forecast(const PanelTable& table);
/// Next hour equals the same hour a week earlier (the WeekLag column).
std::vector<double> seasonal_naive_forecast(const PanelTable& table);

struct Surface {
  eval::TimeFilter filter = eval::TimeFilter::kAll;
  eval::StopErrors stops;
  eval::ErrorSurfaceGrid grid;
};

struct SurfaceOptions {
  std::vector<eval::TimeFilter> filters{eval::TimeFilter::kAll};
  int n_cols = 100;
  int n_rows = 100;
  double power = 2.0;
};

/// Stop errors and IDW surfaces per filter, on the box around all stops.
std::vector<Surface> error_surfaces(std::span<const eval::PredictionRecord> records, const CalendarConfig& calendar,
                                    Timestamp origin, const SurfaceOptions& options);

// Declarative runs

struct RunConfig {
  std::optional<InputPaths> inputs;  // synthetic corpus when absent
  synth::SynthConfig synth;
  BreakSource breaks = BreakSource::kFitted;
  ExperimentOptions experiment;
  SurfaceOptions surfaces;
  std::vector<eval::WeatherVariable> extreme_variables{eval::WeatherVariable::kRainfall};
  bool write_panel = true;
  std::filesystem::path output_dir = "stormrider-run";
  std::string text;  // source text, hashed into the manifest
};

/// Sections: [run], [synth] or [inputs], [params.<algo>], [space.<algo>].
/// Validates algorithm names and parameters before returning.
RunConfig parse_run_config(const KvConfig& config, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

/// Executes the workflow into config.output_dir: panel, models, metrics,
/// errors, surfaces, extremes, importance and manifest.json. On failure
/// writes a FAILED marker next to whatever was produced and rethrows.
Experiment run(const RunConfig& config);

}  // namespace stormrider::pipeline
