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

// Command-line front end: one subcommand per pipeline stage plus `run`.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/eval.hpp"
#include "stormrider/io.hpp"
#include "stormrider/kv_config.hpp"
#include "stormrider/learn/model_selection.hpp"
#include "stormrider/parallel.hpp"
#include "stormrider/pipeline.hpp"
#include "stormrider/synth.hpp"

namespace fs = std::filesystem;
namespace sr = stormrider;
namespace pl = stormrider::pipeline;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string config;
};

struct SplitArgs {
  double holdout = 0.2;
  std::string mode = "random";
};

void add_split_options(CLI::App* cmd, SplitArgs& s) {
  cmd->add_option("--holdout", s.holdout, "Held-out fraction of panel rows")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--split", s.mode, "random (row-level) or time (last hours of each stop)")
      ->check(CLI::IsMember({"random", "time"}));
}

pl::DataSplit make_split(const sr::PanelTable& table, const SplitArgs& s, std::uint64_t seed) {
  return s.mode == "time" ? pl::time_split(table, s.holdout) : pl::random_split(table.size(), s.holdout, seed);
}

std::optional<sr::KvConfig> load_config(const Globals& g) {
  if (g.config.empty()) return std::nullopt;
  return sr::KvConfig::load(g.config);
}

// Preset, then [params.<name>] from --config, then --set overrides.
sr::learn::Hyperparameters resolve_params(const std::string& algorithm, const Globals& g,
                                          const std::vector<std::string>& overrides) {
  auto hp = pl::model_spec(algorithm, g.seed).params;
  if (auto cfg = load_config(g)) {
    const std::string section = "params." + algorithm;
    for (const auto& key : cfg->keys_in(section)) {
      const auto v = cfg->as_strings(section + "." + key);
      if (!v || v->size() != 1) throw sr::ConfigError(section + "." + key + " must be a single value");
      hp.set(key, v->front());
    }
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sr::ConfigError("--set expects key=value, got '" + kv + "'");
    hp.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  hp.validate(sr::kFeatureCount);
  return hp;
}

sr::CalendarConfig calendar_from(const std::string& path) {
  return path.empty() ? sr::CalendarConfig{} : sr::load_calendar(sr::KvConfig::load(path));
}

sr::Timestamp origin_from(const std::string& calendar, const std::string& origin_text) {
  if (!origin_text.empty()) {
    const auto t = sr::parse_timestamp(origin_text);
    if (!t) throw sr::ConfigError("bad --origin '" + origin_text + "'");
    return *t;
  }
  if (!calendar.empty()) {
    if (const auto w = sr::load_panel_window(sr::KvConfig::load(calendar))) return w->origin;
  }
  throw sr::ConfigError("panel origin unknown: pass --origin or a calendar file with a [panel] section");
}

void print_metrics(const std::string& name, const sr::eval::MetricsReport& m) {
  std::printf("%-16s rmse %.4f  median %.2f  zero-error %.2f%%\n", name.c_str(), m.rmse, m.median,
              m.bucket_percent[4]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stormrider: stop-hour ridership panels, tree ensembles and error analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::vector<std::pair<CLI::App*, std::function<void()>>> actions;
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--config", g.config, "Run or parameter configuration file")->check(CLI::ExistingFile);

  // synth -------------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic city, weather and trip corpus");
  std::string synth_out;
  std::size_t synth_stops = 200;
  int synth_days = 90;
  std::string synth_origin;
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--stops", synth_stops, "Number of stops")->check(CLI::Range(2, 1000000));
  synth_cmd->add_option("--days", synth_days, "Days of data")->check(CLI::Range(1, 3660));
  synth_cmd->add_option("--origin", synth_origin, "First day, YYYY-MM-DD");
  actions.emplace_back(synth_cmd, [&] {
    sr::synth::SynthConfig cfg;
    cfg.seed = g.seed;
    cfg.city.n_stops = synth_stops;
    cfg.days = synth_days;
    if (!synth_origin.empty()) {
      const auto t = sr::parse_timestamp(synth_origin);
      if (!t) throw sr::ConfigError("bad --origin '" + synth_origin + "'");
      cfg.origin = *t;
    }
    const auto corpus = sr::synth::generate(cfg);
    sr::synth::write_corpus(corpus, synth_out);
    std::printf("wrote %zu stops, %zu trips, %zu weather readings to %s\n", corpus.city.stops.size(),
                corpus.trips.size(), corpus.weather.size(), synth_out.c_str());
  });

  // ingest ------------------------------------------------------------------
  auto* ingest_cmd = app.add_subcommand("ingest", "Clean trips and aggregate boardings per stop-hour");
  std::string ingest_data, ingest_out;
  ingest_cmd->add_option("--data", ingest_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  ingest_cmd->add_option("--out", ingest_out, "Counts CSV (stop_id, hour_index, count)")->required();
  actions.emplace_back(ingest_cmd, [&] {
    auto data = pl::load_sources(pl::corpus_paths(ingest_data));
    for (const auto& n : data.notes) std::fprintf(stderr, "note: %s\n", n.c_str());
    std::unordered_set<std::string> known;
    std::vector<std::string> ids;
    for (const auto& s : data.stops) {
      known.insert(s.stop_id);
      ids.push_back(s.stop_id);
    }
    const auto cleaned = sr::clean_trips(data.trips, known);
    const auto in_window = sr::filter_window(cleaned.kept, data.origin, data.hours);
    const auto counts = sr::aggregate_ridership(in_window, ids, data.origin, data.hours);
    sr::CsvWriter out(ingest_out);
    out.row({"stop_id", "hour_index", "count"});
    for (std::size_t s = 0; s < counts.stop_count(); ++s) {
      for (std::int64_t h = 0; h < counts.hours(); ++h) {
        out.field(counts.stop_ids()[s]);
        out.field(static_cast<long long>(h));
        out.field(static_cast<long long>(counts.at(s, h)));
        out.end_row();
      }
    }
    const auto& r = cleaned.report;
    std::printf("trips %zu kept %zu (ungeocodable %zu, overlong %zu, negative %zu, outside window %zu)\n", r.input,
                in_window.size(), r.ungeocodable, r.overlong, r.negative_duration, cleaned.kept.size() - in_window.size());
  });

  // features ----------------------------------------------------------------
  auto* features_cmd = app.add_subcommand("features", "Build the 43-feature stop-hour panel");
  std::string features_data, features_out, features_breaks = "fitted";
  features_cmd->add_option("--data", features_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  features_cmd->add_option("--out", features_out, "Panel CSV")->required();
  features_cmd->add_option("--breaks", features_breaks, "Journey-time classes: fitted or reference")
      ->check(CLI::IsMember({"fitted", "reference"}));
  actions.emplace_back(features_cmd, [&] {
    auto fb = pl::build_features(pl::load_sources(pl::corpus_paths(features_data)),
                                 features_breaks == "fitted" ? pl::BreakSource::kFitted : pl::BreakSource::kReference);
    sr::io::write_panel_csv(features_out, fb.panel);
    std::printf("panel: %zu stops x %zu hours = %zu rows\n", fb.panel.stop_count(), fb.panel.rows_per_stop(),
                fb.panel.size());
  });

  // train -------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Fit one model on the training part of a panel");
  std::string train_panel, train_algo, train_out;
  std::vector<std::string> train_set;
  SplitArgs train_split;
  train_cmd->add_option("--panel", train_panel, "Panel CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--algorithm", train_algo, "rf, xgb or tweedie")->required();
  train_cmd->add_option("--out", train_out, "Model file")->required();
  train_cmd->add_option("--set", train_set, "Override a hyperparameter, key=value");
  add_split_options(train_cmd, train_split);
  actions.emplace_back(train_cmd, [&] {
    const auto hp = resolve_params(train_algo, g, train_set);
    const auto table = sr::io::read_panel_csv(train_panel);
    const auto split = make_split(table, train_split, g.seed);
    const auto train = table.subset(split.train);
    const auto start = std::chrono::steady_clock::now();
    const auto model = sr::learn::fit(train.features, train.target, hp);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    model.save(train_out);
    std::printf("%s: %zu trees on %zu rows in %.1f s\n", train_algo.c_str(), model.trees.size(), train.size(), secs);
  });

  // tune --------------------------------------------------------------------
  auto* tune_cmd = app.add_subcommand("tune", "Random grid search with k-fold CV on the training part");
  std::string tune_panel, tune_algo, tune_out;
  std::uint64_t tune_budget = 10;
  int tune_folds = 5;
  SplitArgs tune_split;
  tune_cmd->add_option("--panel", tune_panel, "Panel CSV")->required()->check(CLI::ExistingFile);
  tune_cmd->add_option("--algorithm", tune_algo, "Space section [space.<algorithm>] in --config")->required();
  tune_cmd->add_option("--budget", tune_budget, "Combinations to evaluate")->check(CLI::PositiveNumber);
  tune_cmd->add_option("--folds", tune_folds, "Cross-validation folds")->check(CLI::Range(2, 100));
  tune_cmd->add_option("--out", tune_out, "Output stem: <out>.toml best params, <out>_trials.csv")->required();
  add_split_options(tune_cmd, tune_split);
  actions.emplace_back(tune_cmd, [&] {
    const auto cfg = load_config(g);
    if (!cfg) throw sr::ConfigError("tune needs --config with a [space." + tune_algo + "] section");
    auto space = sr::learn::load_search_space(*cfg, "space." + tune_algo);
    if (!cfg->has("space." + tune_algo + ".preset")) space.base = pl::model_spec(tune_algo, g.seed).params;
    space.base.seed = pl::model_spec(tune_algo, g.seed).params.seed;
    const auto table = sr::io::read_panel_csv(tune_panel);
    const auto train = table.subset(make_split(table, tune_split, g.seed).train);
    const auto result =
        sr::learn::random_grid_search(train.features, train.target, space, tune_budget, space.base.seed, tune_folds);

    std::string toml = "[params." + tune_algo + "]\n";
    for (const auto& [k, v] : result.best.to_pairs()) {
      if (k == "algorithm" || k == "objective") continue;
      toml += k + " = " + v + "\n";
    }
    sr::io::write_text(tune_out + ".toml", toml);
    sr::CsvWriter trials(tune_out + "_trials.csv");
    std::vector<std::string> header{"combination", "cv_mse"};
    for (const auto& axis : space.axes) header.push_back(axis.first);
    trials.row(header);
    for (const auto& t : result.trials) {
      trials.field(static_cast<long long>(t.combination));
      trials.field(t.cv_mse);
      const auto pairs = t.params.to_pairs();
      for (const auto& axis : space.axes) {
        for (const auto& [k, v] : pairs) {
          if (k == axis.first) trials.field(v);
        }
      }
      trials.end_row();
    }
    std::printf("best CV MSE %.6f over %zu draws\n", result.best_mse, result.trials.size());
  });

  // evaluate ----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on the held-out part of a panel");
  std::string eval_panel, eval_model, eval_out;
  SplitArgs eval_split;
  eval_cmd->add_option("--panel", eval_panel, "Panel CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--model", eval_model, "Model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Output directory")->required();
  add_split_options(eval_cmd, eval_split);
  actions.emplace_back(eval_cmd, [&] {
    const auto model = sr::learn::TreeEnsemble::load(eval_model);
    const auto table = sr::io::read_panel_csv(eval_panel);
    const auto test = table.subset(make_split(table, eval_split, g.seed).test);
    const auto records = pl::prediction_records(test, sr::learn::predict(model, test.features));
    const fs::path out(eval_out);
    const auto report = sr::eval::metrics(records);
    sr::io::write_text(out / "metrics.json", sr::io::metrics_json(report));
    sr::io::write_errors_csv(out / "errors.csv", records);
    sr::io::write_hourly_errors_csv(out / "hourly.csv", sr::eval::hourly_mean_error(records));
    print_metrics("model", report);
    const std::pair<const char*, std::vector<double>> baselines[] = {
        {"persistence", pl::persistence_forecast(test)}, {"seasonal_naive", pl::seasonal_naive_forecast(test)}};
    for (const auto& [name, forecast] : baselines) {
      const auto m = sr::eval::metrics(pl::prediction_records(test, forecast));
      sr::io::write_text(out / (std::string(name) + ".json"), sr::io::metrics_json(m));
      print_metrics(name, m);
    }
  });

  // surface -----------------------------------------------------------------
  auto* surface_cmd = app.add_subcommand("surface", "Interpolate stop-level mean error onto a grid");
  std::string surface_errors, surface_calendar, surface_origin, surface_filter = "all", surface_out;
  std::vector<int> surface_grid{100, 100};
  double surface_power = 2.0;
  surface_cmd->add_option("--errors", surface_errors, "Errors CSV from evaluate")->required()->check(CLI::ExistingFile);
  surface_cmd->add_option("--calendar", surface_calendar, "Calendar file (peaks, holidays, [panel] origin)")
      ->check(CLI::ExistingFile);
  surface_cmd->add_option("--origin", surface_origin, "Panel origin if the calendar has no [panel] section");
  surface_cmd->add_option("--filter", surface_filter, "all, peak, offpeak, weekday or weekend");
  surface_cmd->add_option("--grid", surface_grid, "Columns and rows")->expected(2)->check(CLI::PositiveNumber);
  surface_cmd->add_option("--power", surface_power, "Distance-decay power")->check(CLI::PositiveNumber);
  surface_cmd->add_option("--out", surface_out, "Grid CSV; stop means go to <out stem>_stops.csv")->required();
  actions.emplace_back(surface_cmd, [&] {
    const auto records = sr::io::read_errors_csv(surface_errors);
    pl::SurfaceOptions opts;
    opts.filters = {sr::eval::parse_time_filter(surface_filter)};
    opts.n_cols = surface_grid[0];
    opts.n_rows = surface_grid[1];
    opts.power = surface_power;
    const auto surfaces = pl::error_surfaces(records, calendar_from(surface_calendar),
                                             origin_from(surface_calendar, surface_origin), opts);
    const fs::path out(surface_out);
    sr::io::write_surface_csv(out, surfaces.front().grid);
    sr::io::write_stop_errors_csv(out.parent_path() / (out.stem().string() + "_stops.csv"), surfaces.front().stops);
    for (const auto& w : surfaces.front().stops.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  });

  // extremes ----------------------------------------------------------------
  auto* extremes_cmd = app.add_subcommand("extremes", "Error and ridership under extreme weather");
  std::string ext_errors, ext_weather, ext_calendar, ext_origin, ext_panel, ext_out;
  std::vector<std::string> ext_vars{"rainfall"};
  int ext_bins = 10;
  bool ext_sample_sd = false;
  extremes_cmd->add_option("--errors", ext_errors, "Errors CSV from evaluate")->required()->check(CLI::ExistingFile);
  extremes_cmd->add_option("--weather", ext_weather, "Raw weather CSV")->required()->check(CLI::ExistingFile);
  extremes_cmd->add_option("--calendar", ext_calendar, "Calendar file with a [panel] window")->check(CLI::ExistingFile);
  extremes_cmd->add_option("--origin", ext_origin, "Panel origin if the calendar has no [panel] section");
  extremes_cmd->add_option("--panel", ext_panel, "Panel CSV, for extreme-vs-normal ridership differences")
      ->check(CLI::ExistingFile);
  extremes_cmd->add_option("--variable", ext_vars, "temperature, humidity, wind_speed, apparent_temperature, rainfall");
  extremes_cmd->add_option("--bins", ext_bins, "Bins for the error-vs-weather curve")->check(CLI::PositiveNumber);
  extremes_cmd->add_flag("--sample-sd", ext_sample_sd, "Use the sample rather than population SD for thresholds");
  extremes_cmd->add_option("--out", ext_out, "Output directory")->required();
  actions.emplace_back(extremes_cmd, [&] {
    const auto records = sr::io::read_errors_csv(ext_errors);
    const sr::Timestamp origin = origin_from(ext_calendar, ext_origin);
    std::int64_t hours = 0;
    if (!ext_calendar.empty()) {
      if (const auto w = sr::load_panel_window(sr::KvConfig::load(ext_calendar))) hours = w->hours;
    }
    for (const auto& r : records) hours = std::max(hours, r.hour_index + 1);
    const auto weather = sr::hourly_weather(sr::parse_weather(ext_weather).records, origin, hours);
    sr::eval::ExtremeOptions opts;
    opts.sample_sd = ext_sample_sd;
    const auto mask = sr::eval::extreme_mask(weather, opts);
    std::optional<sr::StopHourCounts> counts;
    if (!ext_panel.empty()) counts = sr::io::counts_from_panel(sr::io::read_panel_csv(ext_panel));
    const fs::path out(ext_out);
    for (const auto& name : ext_vars) {
      const auto v = sr::eval::parse_weather_variable(name);
      const std::string stem(sr::eval::to_string(v));
      sr::io::write_stop_errors_csv(out / (stem + "_stops.csv"), sr::eval::extreme_stop_error(records, mask, v));
      sr::io::write_weather_bins_csv(out / (stem + "_curve.csv"),
                                     sr::eval::error_vs_weather(records, weather, v, ext_bins));
      if (counts) {
        sr::io::write_differences_csv(out / (stem + "_ridership.csv"),
                                      sr::eval::extreme_vs_normal_diff(*counts, mask, v));
      }
    }
  });

  // importance --------------------------------------------------------------
  auto* imp_cmd = app.add_subcommand("importance", "Gain importance scaled to a maximum of 1");
  std::string imp_model, imp_out;
  imp_cmd->add_option("--model", imp_model, "Model file")->required()->check(CLI::ExistingFile);
  imp_cmd->add_option("--out", imp_out, "Importance CSV")->required();
  actions.emplace_back(imp_cmd, [&] {
    const auto model = sr::learn::TreeEnsemble::load(imp_model);
    sr::io::write_importance_csv(imp_out, model.feature_schema, sr::learn::variable_importance(model));
  });

  // run ---------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "End-to-end experiment from --config");
  std::string run_out;
  run_cmd->add_option("--out", run_out, "Output directory (overrides the config)");
  actions.emplace_back(run_cmd, [&] {
    if (g.config.empty()) throw sr::ConfigError("run needs --config");
    auto cfg = pl::load_run_config(g.config);
    if (!run_out.empty()) cfg.output_dir = run_out;
    if (cfg.output_dir.empty()) throw sr::ConfigError("no output directory: set run.output or pass --out");
    const auto ex = pl::run(cfg);
    for (const auto& b : ex.baselines) print_metrics(b.name, b.metrics);
    for (const auto& m : ex.models) {
      print_metrics(m.name, m.metrics);
      std::printf("%-16s trained in %.2f min\n", "", m.training_seconds / 60.0);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  sr::set_thread_count(g.threads);
  try {
    for (const auto& [cmd, action] : actions) {
      if (cmd->parsed()) action();
    }
  } catch (const sr::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const sr::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
