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

#include "stormrider/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/io.hpp"
#include "stormrider/learn/gbdt.hpp"
#include "stormrider/rng.hpp"

namespace stormrider::pipeline {
namespace {

using nlohmann::json;

constexpr std::uint64_t kSplitStream = 0x73706c6974;

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("holdout fraction must lie in (0, 1)");
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return Rng::mix64(seed ^ h);
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> taken) {
  std::vector<std::uint8_t> mark(n, 0);
  for (const auto r : taken) mark[r] = 1;
  std::vector<std::size_t> out;
  out.reserve(n - taken.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (!mark[r]) out.push_back(r);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Splitting

std::size_t holdout_size(std::size_t n, double fraction) {
  check_fraction(fraction);
  return static_cast<std::size_t>(std::floor(static_cast<long double>(n) * fraction + 1e-9L));
}

DataSplit random_split(std::size_t n, double fraction, std::uint64_t seed) {
  const std::size_t k = holdout_size(n, fraction);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, kSplitStream);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }
  DataSplit split;
  split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(split.test.begin(), split.test.end());
  split.train = complement(n, split.test);
  return split;
}

DataSplit time_split(const StopHourPanel& panel, double fraction) {
  const std::size_t per_stop = panel.rows_per_stop();
  const std::size_t held = holdout_size(per_stop, fraction);
  DataSplit split;
  for (std::size_t r = 0; r < panel.size(); ++r) {
    (r % per_stop >= per_stop - held ? split.test : split.train).push_back(r);
  }
  return split;
}

DataSplit time_split(const PanelTable& table, double fraction) {
  std::vector<std::int64_t> first(table.stop_ids.size(), std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> last(table.stop_ids.size(), std::numeric_limits<std::int64_t>::min());
  for (std::size_t r = 0; r < table.size(); ++r) {
    first[table.row_stop[r]] = std::min(first[table.row_stop[r]], table.row_hour[r]);
    last[table.row_stop[r]] = std::max(last[table.row_stop[r]], table.row_hour[r]);
  }
  DataSplit split;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto s = table.row_stop[r];
    const auto span = static_cast<std::size_t>(last[s] - first[s] + 1);
    const auto held = static_cast<std::int64_t>(holdout_size(span, fraction));
    (table.row_hour[r] > last[s] - held ? split.test : split.train).push_back(r);
  }
  return split;
}

// ---------------------------------------------------------------------------
// Inputs

InputPaths corpus_paths(const std::filesystem::path& dir) {
  InputPaths p{dir / "trips.csv", dir / "weather.csv", dir / "stops.csv", dir / "amenities.csv",
               dir / "calendar.toml", {}};
  if (std::filesystem::exists(dir / "service_windows.csv")) p.windows = dir / "service_windows.csv";
  return p;
}

SourceData load_sources(const InputPaths& paths) {
  SourceData d;
  d.stops = parse_stops(paths.stops);
  auto amenities = parse_amenities(paths.amenities);
  d.amenities = group_amenities(amenities.records);
  auto trips = parse_trips(paths.trips);
  d.trips = std::move(trips.records);
  auto weather = parse_weather(paths.weather);
  d.weather = std::move(weather.records);
  if (!paths.windows.empty()) d.windows = parse_service_windows(paths.windows);

  for (const auto* report : {&amenities.report, &trips.report, &weather.report}) {
    if (report->malformed > 0) {
      d.notes.push_back(std::to_string(report->malformed) + " malformed row(s) skipped");
      for (const auto& line : report->diagnostics) d.notes.push_back(line);
    }
  }

  const KvConfig cfg = KvConfig::load(paths.calendar);
  d.calendar = load_calendar(cfg);
  d.geography = load_geography(cfg);
  if (const auto window = load_panel_window(cfg)) {
    d.origin = window->origin;
    d.hours = window->hours;
  } else {
    if (d.trips.empty()) throw DataError("no trips and no [panel] window: cannot infer the panel span");
    auto [first, last] = std::minmax_element(d.trips.begin(), d.trips.end(), [](const auto& a, const auto& b) {
      return a.board_time < b.board_time;
    });
    d.origin = Timestamp::from_civil(first->board_time.date(), 0, 0);
    const Timestamp end = Timestamp::from_civil(last->board_time.date(), 0, 0).plus_hours(24);
    d.hours = hours_between(d.origin, end);
  }
  return d;
}

SourceData from_corpus(synth::Corpus corpus) {
  SourceData d;
  d.stops = std::move(corpus.city.stops);
  d.amenities = std::move(corpus.city.amenities);
  d.trips = std::move(corpus.trips);
  d.weather = std::move(corpus.weather);
  d.windows = std::move(corpus.city.service_windows);
  d.calendar = std::move(corpus.calendar);
  d.geography = corpus.city.geography;
  d.origin = corpus.origin;
  d.hours = corpus.hours;
  return d;
}

FeatureBuild build_features(SourceData data, BreakSource source, std::optional<Timestamp> break_cutoff) {
  std::unordered_set<std::string> known;
  std::vector<std::string> ids;
  for (const auto& s : data.stops) {
    known.insert(s.stop_id);
    ids.push_back(s.stop_id);
  }
  CleanResult cleaned = clean_trips(data.trips, known);
  data.trips.clear();
  data.trips.shrink_to_fit();
  const std::vector<TripRecord> trips = filter_window(cleaned.kept, data.origin, data.hours);
  const std::size_t outside = cleaned.kept.size() - trips.size();
  cleaned.kept.clear();
  cleaned.kept.shrink_to_fit();

  StopHourCounts counts = aggregate_ridership(trips, ids, data.origin, data.hours);

  JenksBreaks breaks = reference_journey_breaks();
  if (source == BreakSource::kFitted) {
    const auto durations = trip_durations(trips, break_cutoff);
    std::vector<double> distinct(durations);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() >= kJourneyClassCount) breaks = jenks_breaks(durations, static_cast<int>(kJourneyClassCount));
  }
  const auto shares = journey_time_shares(trips, breaks);

  std::vector<LonLat> positions;
  for (const auto& s : data.stops) positions.push_back(s.position);
  const AmenityDensity density = amenity_density(positions, data.amenities);

  std::vector<StopRecord> records;
  records.reserve(data.stops.size());
  for (std::size_t i = 0; i < data.stops.size(); ++i) {
    StopRecord r = locate_stop(data.stops[i], data.geography);
    r.amenity_density = density.normalized[i];
    if (auto it = shares.find(r.stop_id); it != shares.end()) r.journey_shares = it->second;
    records.push_back(std::move(r));
  }

  auto hourly = hourly_weather(data.weather, data.origin, data.hours);
  StopHourPanel panel = build_panel(std::move(counts), std::move(hourly), data.calendar, std::move(records), data.windows);
  return FeatureBuild{std::move(panel), std::move(breaks), cleaned.report, outside, std::move(data.calendar)};
}

// ---------------------------------------------------------------------------
// Training and evaluation

ModelSpec model_spec(std::string_view name, std::uint64_t seed) {
  if (!learn::is_known_preset(name)) {
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected rf, xgb or tweedie)");
  }
  ModelSpec spec{std::string(name), learn::Hyperparameters::preset(name)};
  spec.params.seed = derive_seed(seed, name);
  return spec;
}

std::vector<eval::PredictionRecord> prediction_records(const PanelTable& table, std::span<const double> predicted) {
  if (predicted.size() != table.size()) throw std::invalid_argument("prediction_records: length mismatch");
  std::vector<eval::PredictionRecord> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto s = table.row_stop[r];
    out.push_back(eval::make_record(table.stop_ids[s], table.row_hour[r], table.stop_positions[s], table.target[r],
                                    predicted[r]));
  }
  return out;
}

std::vector<double> persistence_forecast(const PanelTable& table) {
  const auto col = table.features.column(index_of(Feature::kHourLag));
  return {col.begin(), col.end()};
}

std::vector<double> seasonal_naive_forecast(const PanelTable& table) {
  const auto col = table.features.column(index_of(Feature::kWeekLag));
  return {col.begin(), col.end()};
}

Experiment run_experiment(const StopHourPanel& panel, const ExperimentOptions& options) {
  if (panel.size() == 0) throw DataError("run_experiment: empty panel");
  Experiment ex;
  ex.split = options.split_mode == SplitMode::kTime ? time_split(panel, options.holdout)
                                                    : random_split(panel.size(), options.holdout, options.seed);
  const PanelTable train = panel.materialize(ex.split.train);
  const PanelTable test = panel.materialize(ex.split.test);

  for (const auto& [name, forecast] : {std::pair{"persistence", persistence_forecast(test)},
                                       std::pair{"seasonal_naive", seasonal_naive_forecast(test)}}) {
    BaselineResult b{name, prediction_records(test, forecast), {}};
    b.metrics = eval::metrics(b.records);
    ex.baselines.push_back(std::move(b));
  }

  for (const auto& spec : options.models) {
    ModelResult m;
    m.name = spec.name;
    m.params = spec.params;
    const auto start = std::chrono::steady_clock::now();
    if (options.tune) {
      if (auto it = options.spaces.find(spec.name); it != options.spaces.end()) {
        learn::SearchSpace space = it->second;
        space.base.seed = spec.params.seed;
        m.search = learn::random_grid_search(train.features, train.target, space, options.budget,
                                             spec.params.seed, options.cv_folds);
        m.params = m.search->best;
      }
    }
    m.model = learn::fit(train.features, train.target, m.params);
    m.training_seconds = seconds_since(start);
    const auto predicted = learn::predict(m.model, test.features);
    m.records = prediction_records(test, predicted);
    m.metrics = eval::metrics(m.records);
    m.importance = learn::variable_importance(m.model);
    ex.models.push_back(std::move(m));
  }
  return ex;
}

std::vector<Surface> error_surfaces(std::span<const eval::PredictionRecord> records, const CalendarConfig& calendar,
                                    Timestamp origin, const SurfaceOptions& options) {
  const auto all = eval::stop_mean_error(records, eval::TimeFilter::kAll, calendar, origin);
  const auto points = eval::to_points(all);
  if (points.empty()) throw DataError("error_surfaces: no stop errors to interpolate");
  const eval::BoundingBox box = eval::bounding_box(points);
  std::vector<Surface> out;
  for (const auto filter : options.filters) {
    Surface s;
    s.filter = filter;
    s.stops = filter == eval::TimeFilter::kAll ? all : eval::stop_mean_error(records, filter, calendar, origin);
    const auto pts = eval::to_points(s.stops);
    if (pts.empty()) {
      s.grid = {box, options.n_cols, options.n_rows,
                std::vector<double>(static_cast<std::size_t>(options.n_cols) * static_cast<std::size_t>(options.n_rows),
                                    std::numeric_limits<double>::quiet_NaN())};
      s.stops.warnings.push_back("no records pass the " + std::string(eval::to_string(filter)) + " filter");
    } else {
      s.grid = eval::idw_surface(pts, box, options.n_cols, options.n_rows, options.power);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

RunConfig parse_run_config(const KvConfig& cfg, const std::filesystem::path& base_dir) {
  RunConfig rc;
  rc.text = cfg.text();
  auto& ex = rc.experiment;
  const auto seed_value = cfg.number("run.seed");
  if (seed_value && (*seed_value < 0 || *seed_value != std::floor(*seed_value))) throw ConfigError("run.seed must be a non-negative integer");
  ex.seed = seed_value ? static_cast<std::uint64_t>(*seed_value) : 42;

  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  if (auto out = cfg.string("run.output")) rc.output_dir = resolve(*out);

  const std::string split = cfg.string_or("run.split", "random");
  if (split == "random") {
    ex.split_mode = SplitMode::kRandom;
  } else if (split == "time") {
    ex.split_mode = SplitMode::kTime;
  } else {
    throw ConfigError("run.split must be 'random' or 'time'");
  }
  ex.holdout = cfg.number_or("run.holdout", 0.2);
  check_fraction(ex.holdout);
  ex.cv_folds = static_cast<int>(cfg.number_or("run.cv_folds", 5));
  if (ex.cv_folds < 2) throw ConfigError("run.cv_folds must be at least 2");
  ex.tune = cfg.boolean("run.tune").value_or(false);
  const double budget = cfg.number_or("run.budget", 10);
  if (budget < 1) throw ConfigError("run.budget must be at least 1");
  ex.budget = static_cast<std::uint64_t>(budget);

  const auto algorithms = cfg.strings("run.algorithms").value_or(std::vector<std::string>{"rf", "xgb", "tweedie"});
  if (algorithms.empty()) throw ConfigError("run.algorithms is empty");
  std::unordered_set<std::string> seen;
  for (const auto& name : algorithms) {
    if (!seen.insert(name).second) throw ConfigError("algorithm '" + name + "' listed twice");
    ModelSpec spec = model_spec(name, ex.seed);
    const std::string section = "params." + name;
    for (const auto& key : cfg.keys_in(section)) {
      const auto value = cfg.as_strings(section + "." + key);
      if (!value || value->size() != 1) throw ConfigError(section + "." + key + " must be a single value");
      spec.params.set(key, value->front());
    }
    spec.params.validate(kFeatureCount);
    if (cfg.has_section("space." + name)) {
      learn::SearchSpace space = learn::load_search_space(cfg, "space." + name);
      if (!cfg.has("space." + name + ".preset")) space.base = spec.params;
      ex.spaces.emplace(name, std::move(space));
    }
    ex.models.push_back(std::move(spec));
  }
  if (ex.tune && ex.spaces.empty()) throw ConfigError("run.tune is set but no [space.<algorithm>] section exists");

  const std::string breaks = cfg.string_or("run.journey_breaks", "fitted");
  if (breaks == "fitted") {
    rc.breaks = BreakSource::kFitted;
  } else if (breaks == "reference") {
    rc.breaks = BreakSource::kReference;
  } else {
    throw ConfigError("run.journey_breaks must be 'fitted' or 'reference'");
  }
  rc.write_panel = cfg.boolean("run.write_panel").value_or(true);

  if (auto grid = cfg.numbers("run.surface_grid")) {
    if (grid->size() != 2 || (*grid)[0] < 1 || (*grid)[1] < 1) throw ConfigError("run.surface_grid needs [cols, rows]");
    rc.surfaces.n_cols = static_cast<int>((*grid)[0]);
    rc.surfaces.n_rows = static_cast<int>((*grid)[1]);
  }
  rc.surfaces.power = cfg.number_or("run.surface_power", 2.0);
  if (!(rc.surfaces.power > 0.0)) throw ConfigError("run.surface_power must be positive");
  if (auto filters = cfg.strings("run.surface_filters")) {
    rc.surfaces.filters.clear();
    for (const auto& f : *filters) rc.surfaces.filters.push_back(eval::parse_time_filter(f));
  } else {
    rc.surfaces.filters = {eval::TimeFilter::kAll, eval::TimeFilter::kPeak, eval::TimeFilter::kOffPeak,
                           eval::TimeFilter::kWeekday, eval::TimeFilter::kWeekend};
  }
  if (auto vars = cfg.strings("run.extreme_variables")) {
    rc.extreme_variables.clear();
    for (const auto& v : *vars) rc.extreme_variables.push_back(eval::parse_weather_variable(v));
  }

  if (auto dir = cfg.string("inputs.dir")) {
    rc.inputs = corpus_paths(resolve(*dir));
  } else if (cfg.has_section("inputs")) {
    InputPaths p;
    auto required = [&](const char* key) {
      auto v = cfg.string(std::string("inputs.") + key);
      if (!v) throw ConfigError(std::string("inputs.") + key + " is required");
      return resolve(*v);
    };
    p.trips = required("trips");
    p.weather = required("weather");
    p.stops = required("stops");
    p.amenities = required("amenities");
    p.calendar = required("calendar");
    if (auto w = cfg.string("inputs.windows")) p.windows = resolve(*w);
    rc.inputs = p;
  } else {
    auto& s = rc.synth;
    s.seed = ex.seed;
    s.city.n_stops = static_cast<std::size_t>(cfg.number_or("synth.stops", 200));
    s.days = static_cast<int>(cfg.number_or("synth.days", 90));
    if (s.days < 8) throw ConfigError("synth.days must be at least 8 to cover the lag warm-up");
    if (auto origin = cfg.string("synth.origin")) {
      const auto t = parse_timestamp(*origin);
      if (!t) throw ConfigError("synth.origin: bad timestamp '" + *origin + "'");
      s.origin = *t;
    }
    s.city.busway_fraction = cfg.number_or("synth.busway_fraction", s.city.busway_fraction);
    s.demand.zero_inflation = cfg.number_or("synth.zero_inflation", s.demand.zero_inflation);
    s.demand.noise = cfg.number_or("synth.noise", s.demand.noise);
    s.city.validate();
    s.demand.validate();
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(KvConfig::load(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Runs

Experiment run(const RunConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  fs::remove(out / "FAILED");

  json manifest;
  manifest["tool"] = "stormrider";
  manifest["format"] = 1;
  manifest["config_hash"] = fnv1a_hex(config.text);
  manifest["seed"] = config.experiment.seed;
  manifest["split"] = {{"mode", config.experiment.split_mode == SplitMode::kTime ? "time" : "random"},
                       {"holdout", config.experiment.holdout},
                       {"seed", config.experiment.seed}};
  manifest["status"] = "running";
  std::vector<std::string> artifacts;
  auto save_manifest = [&] {
    manifest["artifacts"] = artifacts;
    io::write_text(out / "manifest.json", manifest.dump(2) + "\n");
  };

  try {
    SourceData data = config.inputs ? load_sources(*config.inputs) : from_corpus(synth::generate(config.synth));
    manifest["source"] = config.inputs ? "files" : "synthetic";
    if (!config.inputs) manifest["synth_seed"] = config.synth.seed;
    manifest["notes"] = data.notes;

    std::optional<Timestamp> cutoff;
    if (config.experiment.split_mode == SplitMode::kTime) {
      const std::int64_t per_stop = data.hours - StopHourPanel::kWarmUpHours;
      if (per_stop > 0) {
        const auto held = static_cast<std::int64_t>(holdout_size(static_cast<std::size_t>(per_stop), config.experiment.holdout));
        cutoff = data.origin.plus_hours(data.hours - held);
      }
    }
    FeatureBuild fb = build_features(std::move(data), config.breaks, cutoff);
    manifest["panel"] = {{"rows", fb.panel.size()},
                         {"stops", fb.panel.stop_count()},
                         {"hours", fb.panel.counts().hours()},
                         {"origin", format_timestamp(fb.panel.origin())}};
    manifest["journey_breaks"] = fb.breaks.interior_breaks;
    manifest["cleaning"] = {{"input", fb.cleaning.input},
                            {"kept", fb.cleaning.kept},
                            {"ungeocodable", fb.cleaning.ungeocodable},
                            {"overlong", fb.cleaning.overlong},
                            {"negative_duration", fb.cleaning.negative_duration},
                            {"outside_window", fb.outside_window}};
    if (config.write_panel) {
      io::write_panel_csv(out / "panel.csv", fb.panel);
      artifacts.push_back("panel.csv");
    }

    Experiment ex = run_experiment(fb.panel, config.experiment);
    const Timestamp origin = fb.panel.origin();

    json models = json::array();
    for (const auto& b : ex.baselines) {
      io::write_text(out / "metrics" / (b.name + ".json"), io::metrics_json(b.metrics));
      artifacts.push_back("metrics/" + b.name + ".json");
    }
    const auto mask = eval::extreme_mask(fb.panel.weather());
    for (const auto& m : ex.models) {
      fs::create_directories(out / "models");
      m.model.save(out / "models" / (m.name + ".srm"));
      io::write_text(out / "metrics" / (m.name + ".json"), io::metrics_json(m.metrics));
      fs::create_directories(out / "errors");
      io::write_errors_csv(out / "errors" / (m.name + ".csv"), m.records);
      io::write_hourly_errors_csv(out / "errors" / (m.name + "_hourly.csv"), eval::hourly_mean_error(m.records));
      artifacts.insert(artifacts.end(), {"models/" + m.name + ".srm", "metrics/" + m.name + ".json",
                                         "errors/" + m.name + ".csv", "errors/" + m.name + "_hourly.csv"});

      fs::create_directories(out / "surfaces");
      for (const auto& s : error_surfaces(m.records, fb.calendar, origin, config.surfaces)) {
        const std::string stem = m.name + "_" + std::string(eval::to_string(s.filter));
        io::write_surface_csv(out / "surfaces" / (stem + ".csv"), s.grid);
        io::write_stop_errors_csv(out / "surfaces" / (stem + "_stops.csv"), s.stops);
        artifacts.insert(artifacts.end(), {"surfaces/" + stem + ".csv", "surfaces/" + stem + "_stops.csv"});
      }

      fs::create_directories(out / "extremes");
      for (const auto v : config.extreme_variables) {
        const std::string stem = m.name + "_" + std::string(eval::to_string(v));
        io::write_stop_errors_csv(out / "extremes" / (stem + "_stops.csv"), eval::extreme_stop_error(m.records, mask, v));
        io::write_weather_bins_csv(out / "extremes" / (stem + "_curve.csv"),
                                   eval::error_vs_weather(m.records, fb.panel.weather(), v, 10));
        artifacts.insert(artifacts.end(), {"extremes/" + stem + "_stops.csv", "extremes/" + stem + "_curve.csv"});
      }

      json entry;
      entry["name"] = m.name;
      entry["algorithm"] = std::string(learn::to_string(m.params.algorithm));
      entry["seed"] = m.params.seed;
      entry["training_time_minutes"] = m.training_seconds / 60.0;
      json params = json::object();
      for (const auto& [k, v] : m.params.to_pairs()) params[k] = v;
      entry["params"] = params;
      if (m.search) {
        entry["search"] = {{"draws", m.search->trials.size()}, {"best_cv_mse", m.search->best_mse}};
      }
      models.push_back(entry);
    }
    for (const auto v : config.extreme_variables) {
      const std::string name = "extremes/ridership_" + std::string(eval::to_string(v)) + ".csv";
      io::write_differences_csv(out / name, eval::extreme_vs_normal_diff(fb.panel.counts(), mask, v,
                                                                          StopHourPanel::kWarmUpHours));
      artifacts.push_back(name);
    }

    {
      CsvWriter imp(out / "importance.csv");
      std::vector<std::string> header{"feature"};
      for (const auto& m : ex.models) header.push_back(m.name);
      imp.row(header);
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        imp.field(feature_names()[f]);
        for (const auto& m : ex.models) imp.field(m.importance[f]);
        imp.end_row();
      }
      artifacts.push_back("importance.csv");
    }

    manifest["models"] = models;
    manifest["status"] = "ok";
    save_manifest();
    return ex;
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    try {
      io::write_text(out / "FAILED", std::string(e.what()) + "\n");
      save_manifest();
    } catch (...) {
    }
    throw;
  }
}

}  // namespace stormrider::pipeline
