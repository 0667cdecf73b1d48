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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stormrider/eval.hpp"
#include "stormrider/learn/ensemble.hpp"
#include "stormrider/panel.hpp"

namespace stormrider::io {

/// Panel rows as CSV: stop_id, hour_index, lon, lat, the 43 features, target.
/// A sidecar `<path>.schema.json` records the column order and origin.
void write_panel_csv(const std::filesystem::path& path, const PanelTable& table);
/// Streams a normalised panel in chunks without materialising it whole.
void write_panel_csv(const std::filesystem::path& path, const StopHourPanel& panel);
/// Reads a panel written by write_panel_csv. The origin comes from the
/// sidecar when present.
PanelTable read_panel_csv(const std::filesystem::path& path);
std::filesystem::path schema_path(const std::filesystem::path& panel_csv);

/// Target counts of a panel regrouped per stop; hours without a row are 0.
StopHourCounts counts_from_panel(const PanelTable& table);

/// Columns: stop_id, hour_index, lon, lat, observed, predicted, residual.
void write_errors_csv(const std::filesystem::path& path, std::span<const eval::PredictionRecord> records);
std::vector<eval::PredictionRecord> read_errors_csv(const std::filesystem::path& path);

/// A `# bbox ...` comment, then lon, lat, value per cell ("nan" for no data).
void write_surface_csv(const std::filesystem::path& path, const eval::ErrorSurfaceGrid& grid);

void write_stop_errors_csv(const std::filesystem::path& path, const eval::StopErrors& errors);
void write_weather_bins_csv(const std::filesystem::path& path, std::span<const eval::WeatherBin> bins);
void write_differences_csv(const std::filesystem::path& path, const eval::RidershipDifferences& diffs);
void write_hourly_errors_csv(const std::filesystem::path& path, std::span<const eval::HourlyError> series);

/// Columns: feature, importance; in feature order.
void write_importance_csv(const std::filesystem::path& path, std::span<const std::string> names,
                          std::span<const double> scores);

/// Metrics as a JSON object (pearson is null when undefined).
std::string metrics_json(const eval::MetricsReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace stormrider::io
