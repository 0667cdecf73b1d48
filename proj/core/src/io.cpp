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

#include "stormrider/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "stormrider/csv.hpp"
#include "stormrider/errors.hpp"

namespace stormrider::io {
namespace {

using nlohmann::json;

constexpr std::size_t kChunkRows = 1 << 16;

void write_panel_header(CsvWriter& out) {
  std::vector<std::string> header{"stop_id", "hour_index", "lon", "lat"};
  for (const auto name : feature_names()) header.emplace_back(name);
  header.emplace_back("target");
  out.row(header);
}

void write_panel_rows(CsvWriter& out, const PanelTable& t) {
  for (std::size_t r = 0; r < t.size(); ++r) {
    const auto s = t.row_stop[r];
    out.field(t.stop_ids[s]).field(static_cast<long long>(t.row_hour[r]));
    out.field(t.stop_positions[s].lon).field(t.stop_positions[s].lat);
    for (std::size_t c = 0; c < t.features.cols(); ++c) out.field(static_cast<double>(t.features(r, c)));
    out.field(t.target[r]);
    out.end_row();
  }
}

void write_schema(const std::filesystem::path& panel_csv, Timestamp origin) {
  json j;
  j["format"] = "stormrider-panel v1";
  j["origin"] = format_timestamp(origin);
  std::vector<std::string> features;
  for (const auto name : feature_names()) features.emplace_back(name);
  j["features"] = features;
  j["key_columns"] = {"stop_id", "hour_index", "lon", "lat"};
  j["target"] = "target";
  write_text(schema_path(panel_csv), j.dump(2) + "\n");
}

double need_number(std::string_view text, const CsvReader& reader, std::string_view column) {
  const auto v = parse_double(text);
  if (!v) {
    throw DataError(reader.path().string() + ":" + std::to_string(reader.line_number()) + ": bad " +
                    std::string(column) + " value '" + std::string(text) + "'");
  }
  return *v;
}

}  // namespace

std::filesystem::path schema_path(const std::filesystem::path& panel_csv) {
  return std::filesystem::path(panel_csv.string() + ".schema.json");
}

void write_panel_csv(const std::filesystem::path& path, const PanelTable& table) {
  CsvWriter out(path);
  write_panel_header(out);
  write_panel_rows(out, table);
  write_schema(path, table.origin);
}

void write_panel_csv(const std::filesystem::path& path, const StopHourPanel& panel) {
  CsvWriter out(path);
  write_panel_header(out);
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < panel.size(); start += kChunkRows) {
    rows.resize(std::min(kChunkRows, panel.size() - start));
    std::iota(rows.begin(), rows.end(), start);
    write_panel_rows(out, panel.materialize(rows));
  }
  write_schema(path, panel.origin());
}

PanelTable read_panel_csv(const std::filesystem::path& path) {
  CsvReader reader(path);
  PanelTable t;
  const auto sidecar = schema_path(path);
  if (std::filesystem::exists(sidecar)) {
    const json j = json::parse(read_text(sidecar));
    const auto origin = parse_timestamp(j.at("origin").get<std::string>());
    if (!origin) throw DataError(sidecar.string() + ": bad origin");
    t.origin = *origin;
  }
  const auto c_stop = reader.require_column("stop_id");
  const auto c_hour = reader.require_column("hour_index");
  const auto c_lon = reader.require_column("lon");
  const auto c_lat = reader.require_column("lat");
  const auto c_target = reader.require_column("target");
  std::array<std::size_t, kFeatureCount> c_feature{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) c_feature[f] = reader.require_column(feature_names()[f]);

  std::unordered_map<std::string, std::uint32_t> stop_index;
  std::vector<std::vector<float>> columns(kFeatureCount);
  std::vector<std::string_view> fields;
  while (reader.next(fields)) {
    if (fields.size() != reader.header().size()) {
      throw DataError(path.string() + ":" + std::to_string(reader.line_number()) + ": expected " +
                      std::to_string(reader.header().size()) + " fields, found " + std::to_string(fields.size()));
    }
    const std::string id(fields[c_stop]);
    auto [it, fresh] = stop_index.emplace(id, static_cast<std::uint32_t>(t.stop_ids.size()));
    if (fresh) {
      t.stop_ids.push_back(id);
      t.stop_positions.push_back({need_number(fields[c_lon], reader, "lon"), need_number(fields[c_lat], reader, "lat")});
    }
    t.row_stop.push_back(it->second);
    t.row_hour.push_back(static_cast<std::int64_t>(need_number(fields[c_hour], reader, "hour_index")));
    t.target.push_back(need_number(fields[c_target], reader, "target"));
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      columns[f].push_back(static_cast<float>(need_number(fields[c_feature[f]], reader, feature_names()[f])));
    }
  }
  t.features = FeatureMatrix(t.target.size(), kFeatureCount);
  for (std::size_t f = 0; f < kFeatureCount; ++f) std::copy(columns[f].begin(), columns[f].end(), t.features.column(f).begin());
  return t;
}

StopHourCounts counts_from_panel(const PanelTable& table) {
  std::int64_t hours = 0;
  for (const auto h : table.row_hour) hours = std::max(hours, h + 1);
  StopHourCounts counts(table.stop_ids, table.origin, hours);
  for (std::size_t r = 0; r < table.size(); ++r) {
    counts.at(table.row_stop[r], table.row_hour[r]) = static_cast<std::uint32_t>(std::llround(table.target[r]));
  }
  return counts;
}

void write_errors_csv(const std::filesystem::path& path, std::span<const eval::PredictionRecord> records) {
  CsvWriter out(path);
  out.row({"stop_id", "hour_index", "lon", "lat", "observed", "predicted", "residual"});
  for (const auto& r : records) {
    out.field(r.stop_id).field(static_cast<long long>(r.hour_index)).field(r.position.lon).field(r.position.lat);
    out.field(r.observed).field(r.predicted).field(r.residual);
    out.end_row();
  }
}

std::vector<eval::PredictionRecord> read_errors_csv(const std::filesystem::path& path) {
  CsvReader reader(path);
  const auto c_stop = reader.require_column("stop_id");
  const auto c_hour = reader.require_column("hour_index");
  const auto c_lon = reader.require_column("lon");
  const auto c_lat = reader.require_column("lat");
  const auto c_obs = reader.require_column("observed");
  const auto c_pred = reader.require_column("predicted");
  std::vector<eval::PredictionRecord> out;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    out.push_back(eval::make_record(std::string(f.at(c_stop)),
                                    static_cast<std::int64_t>(need_number(f.at(c_hour), reader, "hour_index")),
                                    {need_number(f.at(c_lon), reader, "lon"), need_number(f.at(c_lat), reader, "lat")},
                                    need_number(f.at(c_obs), reader, "observed"),
                                    need_number(f.at(c_pred), reader, "predicted")));
  }
  return out;
}

void write_surface_csv(const std::filesystem::path& path, const eval::ErrorSurfaceGrid& grid) {
  CsvWriter out(path);
  out.comment("bbox min_lon=" + format_double(grid.bbox.min_lon) + " min_lat=" + format_double(grid.bbox.min_lat) +
              " max_lon=" + format_double(grid.bbox.max_lon) + " max_lat=" + format_double(grid.bbox.max_lat) +
              " cols=" + std::to_string(grid.n_cols) + " rows=" + std::to_string(grid.n_rows));
  out.row({"lon", "lat", "value"});
  for (int r = 0; r < grid.n_rows; ++r) {
    for (int c = 0; c < grid.n_cols; ++c) {
      const LonLat p = grid.cell_centre(c, r);
      out.field(p.lon).field(p.lat).field(grid.at(c, r));
      out.end_row();
    }
  }
}

void write_stop_errors_csv(const std::filesystem::path& path, const eval::StopErrors& errors) {
  CsvWriter out(path);
  for (const auto& w : errors.warnings) out.comment(w);
  out.row({"stop_id", "lon", "lat", "mean_residual", "count"});
  for (const auto& s : errors.stops) {
    out.field(s.stop_id).field(s.position.lon).field(s.position.lat).field(s.mean_residual);
    out.field(static_cast<long long>(s.count));
    out.end_row();
  }
}

void write_weather_bins_csv(const std::filesystem::path& path, std::span<const eval::WeatherBin> bins) {
  CsvWriter out(path);
  out.row({"lower", "upper", "mean_residual", "count"});
  for (const auto& b : bins) {
    out.field(b.lower).field(b.upper).field(b.mean_residual).field(static_cast<long long>(b.count));
    out.end_row();
  }
}

void write_differences_csv(const std::filesystem::path& path, const eval::RidershipDifferences& diffs) {
  CsvWriter out(path);
  for (const auto& w : diffs.warnings) out.comment(w);
  out.row({"stop_id", "extreme_mean", "normal_mean", "difference"});
  for (const auto& d : diffs.stops) {
    out.field(d.stop_id).field(d.extreme_mean).field(d.normal_mean).field(d.difference);
    out.end_row();
  }
}

void write_hourly_errors_csv(const std::filesystem::path& path, std::span<const eval::HourlyError> series) {
  CsvWriter out(path);
  out.row({"hour_index", "mean_residual", "count"});
  for (const auto& h : series) {
    out.field(static_cast<long long>(h.hour_index)).field(h.mean_residual).field(static_cast<long long>(h.count));
    out.end_row();
  }
}

void write_importance_csv(const std::filesystem::path& path, std::span<const std::string> names,
                          std::span<const double> scores) {
  if (names.size() != scores.size()) throw std::invalid_argument("importance: names and scores differ in length");
  CsvWriter out(path);
  out.row({"feature", "importance"});
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.field(names[i]).field(scores[i]);
    out.end_row();
  }
}

std::string metrics_json(const eval::MetricsReport& m) {
  json j;
  j["count"] = m.count;
  j["rmse"] = m.rmse;
  j["residual_quartiles"] = {{"q1", m.q1}, {"median", m.median}, {"q3", m.q3}};
  j["interquartile_range"] = m.q3 - m.q1;
  json buckets = json::object();
  for (std::size_t b = 0; b < eval::kBucketCount; ++b) buckets[std::string(eval::bucket_labels()[b])] = m.bucket_percent[b];
  j["bucket_percent"] = buckets;
  j["pearson"] = m.pearson ? json(*m.pearson) : json(nullptr);
  j["within_band_fraction"] = m.within_band_fraction;
  if (m.training_time_minutes) j["training_time_minutes"] = *m.training_time_minutes;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace stormrider::io
