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

// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any fails. Every expected value comes from an oracle
// written here, independent of the library code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "stormrider/eval.hpp"
#include "stormrider/features.hpp"
#include "stormrider/learn/ensemble.hpp"
#include "stormrider/learn/forest.hpp"
#include "stormrider/learn/gbdt.hpp"
#include "stormrider/learn/objective.hpp"
#include "stormrider/panel.hpp"
#include "stormrider/parallel.hpp"
#include "stormrider/pipeline.hpp"
#include "stormrider/rng.hpp"
#include "stormrider/synth.hpp"

namespace fs = std::filesystem;
using namespace stormrider;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }
  Outcome result(const std::string& summary) {
    out_.detail = out_.pass ? summary : out_.detail + " | " + summary;
    return out_;
  }

 private:
  Outcome out_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Tweedie derivatives ------------------------------------------------------

long double deviance(long double y, long double f, long double p) {
  return -y * expl((1 - p) * f) / (1 - p) + expl((2 - p) * f) / (2 - p);
}

Outcome tweedie_derivatives() {
  Check c;
  double worst_g = 0, worst_h = 0;
  for (const double y : {0.0, 1.0, 5.0, 50.0}) {
    for (const double f : {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
      for (const double p : {1.06, 1.5, 1.9}) {
        const long double hg = 1e-5L, hh = 1e-4L;
        const long double g_fd = (deviance(y, f + hg, p) - deviance(y, f - hg, p)) / (2 * hg);
        const long double h_fd =
            (deviance(y, f + hh, p) - 2 * deviance(y, f, p) + deviance(y, f - hh, p)) / (hh * hh);
        const auto gh = learn::tweedie_grad_hess(y, f, p);
        // Relative error, floored at unit scale where the gradient vanishes.
        const double eg = static_cast<double>(fabsl(gh.grad - g_fd) / std::max(fabsl(g_fd), 1.0L));
        const double eh = static_cast<double>(fabsl(gh.hess - h_fd) / fabsl(h_fd));
        worst_g = std::max(worst_g, eg);
        worst_h = std::max(worst_h, eh);
        c.expect(eg < 1e-6, fmt("gradient rel err %.3g at y=%g f=%g", eg, y, f));
        c.expect(eh < 1e-6, fmt("hessian rel err %.3g at y=%g f=%g", eh, y, f));
        c.expect(gh.hess > 0, fmt("hessian not positive at y=%g f=%g p=%g", y, f, p));
      }
    }
  }
  return c.result(fmt("worst relative error: gradient %.2g, hessian %.2g", worst_g, worst_h));
}

// Exact fit ----------------------------------------------------------------

Outcome exact_fit() {
  Check c;
  FeatureMatrix x(64, 2);
  std::vector<double> y(64);
  Rng rng(2026);
  for (std::size_t r = 0; r < 64; ++r) {
    x(r, 0) = static_cast<float>(r) * 0.25f - 3.0f;
    x(r, 1) = static_cast<float>(rng.uniform());
    y[r] = static_cast<double>(rng.below(40));
  }
  auto rmse_of = [&](const learn::TreeEnsemble& m) {
    const auto p = learn::predict(m, x);
    double s = 0;
    for (std::size_t i = 0; i < 64; ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
    return std::sqrt(s / 64);
  };
  auto gb = learn::Hyperparameters::xgboost();
  gb.n_trees = 1;
  gb.learning_rate = 1;
  gb.lambda = 0;
  gb.gamma = 0;
  gb.min_obs_leaf = 1;
  gb.max_depth = 0;
  gb.row_sample_rate = 1;
  gb.col_sample_rate_per_tree = 1;
  const double e_gb = rmse_of(learn::fit_gbdt(x, y, gb));
  auto rf = learn::Hyperparameters::random_forest();
  rf.n_trees = 1;
  rf.mtry = 0;
  rf.max_depth = 0;
  rf.min_obs_leaf = 1;
  rf.row_sample_rate = 1;
  rf.n_bins = 256;
  const double e_rf = rmse_of(learn::fit_random_forest(x, y, rf));
  c.expect(e_gb < 1e-9, fmt("boosting training rmse %.3g", e_gb));
  c.expect(e_rf < 1e-9, fmt("forest training rmse %.3g", e_rf));
  return c.result(fmt("training rmse: boosting %.2g, single tree %.2g", e_gb, e_rf));
}

// Jenks --------------------------------------------------------------------

// Within-class SSD of integer data scaled by lcm(1..12) so it is an exact integer.
constexpr long long kScale = 27720;

long long scaled_ssd(const std::vector<long long>& sorted, std::size_t a, std::size_t b) {
  long long s = 0, q = 0;
  const auto n = static_cast<long long>(b - a);
  for (std::size_t i = a; i < b; ++i) {
    s += sorted[i];
    q += sorted[i] * sorted[i];
  }
  return (n * q - s * s) * (kScale / n);
}

long long brute_force_min(const std::vector<long long>& sorted, int k) {
  const std::size_t n = sorted.size();
  long long best = std::numeric_limits<long long>::max();
  std::function<void(int, std::size_t, long long)> rec = [&](int left, std::size_t start, long long acc) {
    if (left == 1) {
      best = std::min(best, acc + scaled_ssd(sorted, start, n));
      return;
    }
    for (std::size_t cut = start + 1; cut + static_cast<std::size_t>(left - 1) <= n; ++cut) {
      if (sorted[cut - 1] == sorted[cut]) continue;  // classes never split equal values
      rec(left - 1, cut, acc + scaled_ssd(sorted, start, cut));
    }
  };
  rec(k, 0, 0);
  return best;
}

Outcome jenks_optimality() {
  Check c;
  Rng rng(77);
  int tested = 0;
  while (tested < 200) {
    const std::size_t n = 2 + rng.below(11);
    std::vector<long long> v(n);
    for (auto& x : v) x = static_cast<long long>(rng.below(60));
    std::vector<long long> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<long long> uniq = sorted;
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() < 2) continue;
    const int k = 2 + static_cast<int>(rng.below(std::min<std::size_t>(3, uniq.size() - 1)));
    std::vector<double> values(v.begin(), v.end());
    const auto breaks = jenks_breaks(values, k);
    // Partition induced by the breaks: class j holds values <= break j.
    long long got = 0;
    std::size_t start = 0;
    for (int j = 0; j < k; ++j) {
      std::size_t end = start;
      while (end < n && (j == k - 1 || static_cast<double>(sorted[end]) <= breaks.interior_breaks[static_cast<std::size_t>(j)])) ++end;
      if (end == start) {
        c.expect(false, "empty class in jenks partition");
        break;
      }
      got += scaled_ssd(sorted, start, end);
      start = end;
    }
    const long long want = brute_force_min(sorted, k);
    c.expect(got == want, fmt("ssd mismatch: got %g want %g (n=%g)", static_cast<double>(got) / kScale,
                              static_cast<double>(want) / kScale, static_cast<double>(n)));
    ++tested;
  }
  return c.result("200 arrays: optimal SSD equals exhaustive search");
}

// Buffer counts ------------------------------------------------------------

double oracle_haversine(LonLat a, LonLat b) {
  const double rad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * rad, dlon = (b.lon - a.lon) * rad;
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * 6'371'000.0 * std::asin(std::min(1.0, std::sqrt(s)));
}

Outcome buffer_counts() {
  Check c;
  Rng rng(404);
  std::size_t compared = 0;
  for (int city = 0; city < 50; ++city) {
    const LonLat centre{153.0 + rng.uniform(-1, 1), -27.5 + rng.uniform(-1, 1)};
    std::vector<LonLat> stops;
    AmenityPoints points;
    for (int i = 0; i < 200; ++i) stops.push_back({centre.lon + rng.uniform(-0.05, 0.05), centre.lat + rng.uniform(-0.05, 0.05)});
    for (int i = 0; i < 500; ++i) {
      points[rng.below(kAmenityCategoryCount)].push_back(
          {centre.lon + rng.uniform(-0.05, 0.05), centre.lat + rng.uniform(-0.05, 0.05)});
    }
    if (city == 0) {
      // Boundary fixtures: about 395 m and 494 m east of a stop at -27.5.
      stops[0] = {153.0, -27.5};
      points[0].push_back({153.004, -27.5});
      points[0].push_back({153.005, -27.5});
    }
    const auto d = amenity_density(stops, points);
    for (std::size_t s = 0; s < stops.size(); ++s) {
      for (std::size_t k = 0; k < kAmenityCategoryCount; ++k) {
        std::uint32_t want = 0;
        for (const auto& p : points[k]) want += oracle_haversine(stops[s], p) <= 400.0;
        c.expect(d.raw[s][k] == want, fmt("city %g stop %g: count mismatch", city, static_cast<double>(s)));
        ++compared;
      }
    }
    if (city == 0) {
      c.expect(oracle_haversine({153.0, -27.5}, {153.004, -27.5}) <= 400.0, "395 m fixture outside buffer");
      c.expect(oracle_haversine({153.0, -27.5}, {153.005, -27.5}) > 400.0, "494 m fixture inside buffer");
    }
  }
  return c.result(fmt("%g stop-category counts match brute force", static_cast<double>(compared)));
}

// Panel identity -----------------------------------------------------------

Outcome panel_identity() {
  Check c;
  const std::size_t n_stops = 5226;
  const std::int64_t hours = 2208;
  const Timestamp origin = Timestamp::from_civil({2019, 2, 4}, 0, 0);
  std::vector<std::string> ids(n_stops);
  std::vector<StopRecord> stops(n_stops);
  for (std::size_t i = 0; i < n_stops; ++i) {
    ids[i] = "S" + std::to_string(i);
    stops[i].stop_id = ids[i];
  }
  std::vector<HourlyWeather> weather(static_cast<std::size_t>(hours));
  for (std::int64_t h = 0; h < hours; ++h) weather[static_cast<std::size_t>(h)].hour_index = h;
  const auto panel = build_panel(StopHourCounts(ids, origin, hours), std::move(weather), CalendarConfig{}, std::move(stops));
  c.expect(panel.size() == 10'661'040u, fmt("panel rows %g", static_cast<double>(panel.size())));
  const auto split = pipeline::random_split(panel.size(), 0.2, 42);
  c.expect(split.test.size() == 2'132'208u, fmt("test rows %g", static_cast<double>(split.test.size())));
  c.expect(split.train.size() + split.test.size() == panel.size(), "split does not cover the panel");
  return c.result(fmt("%.0f rows, %.0f held out", static_cast<double>(panel.size()), static_cast<double>(split.test.size())));
}

// Apparent temperature -----------------------------------------------------

Outcome apparent_temperature_grid() {
  Check c;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      for (int k = 0; k < 10; ++k) {
        const long double t = -10.0L + 5.0L * i, h = 100.0L * j / 9.0L, ws = 1.5L * k;
        const long double e = (h / 100.0L) * 6.105L * expl(17.27L * t / (237.7L + t));
        const long double want = t + 0.33L * e - 0.70L * ws - 4.00L;
        const double got = apparent_temperature(static_cast<double>(t), static_cast<double>(h), static_cast<double>(ws));
        worst = std::max(worst, static_cast<double>(fabsl(got - want)));
      }
    }
  }
  c.expect(worst < 1e-9, fmt("max deviation %.3g", worst));
  for (const double t : {-12.5, 0.0, 23.0, 38.25}) {
    c.expect(apparent_temperature(t, 0, 0) == t - 4.0, fmt("AT(%g, 0, 0) != T - 4", t));
  }
  return c.result(fmt("1000 points, max deviation %.2g", worst));
}

// IDW ----------------------------------------------------------------------

Outcome idw_properties() {
  Check c;
  Rng rng(707);
  const eval::BoundingBox box{153.0, -27.6, 153.1, -27.5};
  std::size_t cells = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<eval::ValuePoint> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({{153.0 + rng.uniform(0, 0.1), -27.6 + rng.uniform(0, 0.1)}, rng.uniform(-20, 20)});
    const auto g = eval::idw_surface(pts, box, 10, 10);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : pts) {
      lo = std::min(lo, p.value);
      hi = std::max(hi, p.value);
    }
    for (int r = 0; r < 10; ++r) {
      for (int col = 0; col < 10; ++col) {
        const double v = g.at(col, r);
        c.expect(v >= lo && v <= hi, "cell outside [min, max] of inputs");
        // Oracle value.
        const LonLat at = g.cell_centre(col, r);
        double num = 0, den = 0;
        for (const auto& p : pts) {
          const double w = 1.0 / std::pow(oracle_haversine(at, p.position), 2.0);
          num += w * p.value;
          den += w;
        }
        c.expect(std::abs(v - num / den) < 1e-9 * std::max(1.0, std::abs(v)), "cell differs from weighted mean");
        ++cells;
      }
    }
  }
  // Single point: constant surface.
  const std::vector<eval::ValuePoint> one{{{153.03, -27.57}, 4.25}};
  for (const double v : eval::idw_surface(one, box, 10, 10).values) c.expect(v == 4.25, "single point not constant");
  // Exact hit and equidistant pair at a cell centre.
  const auto probe = eval::idw_surface(one, box, 10, 10);
  const LonLat centre = probe.cell_centre(4, 6);
  const std::vector<eval::ValuePoint> hit{{centre, -7.0}, {{153.0, -27.6}, 50.0}};
  c.expect(eval::idw_surface(hit, box, 10, 10).at(4, 6) == -7.0, "exact hit not honoured");
  const std::vector<eval::ValuePoint> pair{{offset_metres(centre, 0, 700), 1.0}, {offset_metres(centre, 0, -700), 3.0}};
  c.expect(std::abs(eval::idw_surface(pair, box, 10, 10).at(4, 6) - 2.0) < 1e-6, "equidistant pair not averaged");
  // High power approaches the nearest point: one point at distance d from
  // the cell centre, two more at 2.5d to 4d.
  const auto unit = eval::idw_surface(one, box, 1, 1, 16.0);
  const LonLat middle = unit.cell_centre(0, 0);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double d = rng.uniform(100, 300);
    auto place = [&](double dist) {
      const double bearing = rng.uniform(0, 2 * std::numbers::pi);
      return offset_metres(middle, dist * std::cos(bearing), dist * std::sin(bearing));
    };
    const std::vector<eval::ValuePoint> three{{place(d), rng.uniform(-10, 10)},
                                              {place(d * rng.uniform(2.5, 4)), rng.uniform(-10, 10)},
                                              {place(d * rng.uniform(2.5, 4)), rng.uniform(-10, 10)}};
    const double err = std::abs(eval::idw_surface(three, box, 1, 1, 16.0).values[0] - three[0].value);
    worst = std::max(worst, err);
    c.expect(err < 1e-3, fmt("power 16 off the nearest value by %.3g", err));
  }
  return c.result(fmt("%g randomized cells within bounds and matching the oracle; power 16 within %.2g", static_cast<double>(cells), worst));
}

// Metrics ------------------------------------------------------------------

Outcome metric_identities() {
  Check c;
  Rng rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<eval::PredictionRecord> recs;
    const auto n = 1 + rng.below(300);
    for (std::uint64_t i = 0; i < n; ++i) {
      recs.push_back(eval::make_record("S", static_cast<std::int64_t>(i), {}, rng.uniform(0, 40), rng.normal(20, 80)));
    }
    const auto m = eval::metrics(recs);
    const double total = std::accumulate(m.bucket_percent.begin(), m.bucket_percent.end(), 0.0);
    c.expect(std::abs(total - 100.0) <= 1e-9, fmt("bucket total %.12g", total));
  }
  std::vector<eval::PredictionRecord> fixture;
  for (const double r : {0.0, 0.0, 0.0, 1.0, -1.0, 30.0}) fixture.push_back(eval::make_record("S", 0, {}, 5, 5 + r));
  const auto m = eval::metrics(fixture);
  const double sixth = 100.0 / 6.0;
  const double want[eval::kBucketCount] = {0, 0, 0, sixth, 50, sixth, sixth, 0, 0};
  for (std::size_t b = 0; b < eval::kBucketCount; ++b) {
    c.expect(std::abs(m.bucket_percent[b] - want[b]) < 1e-9, fmt("fixture bucket %g share %g", static_cast<double>(b), m.bucket_percent[b]));
  }
  std::vector<eval::PredictionRecord> perfect;
  for (int i = 0; i < 50; ++i) perfect.push_back(eval::make_record("S", i, {}, i % 9, i % 9));
  const auto p = eval::metrics(perfect);
  c.expect(p.rmse == 0.0, "perfect prediction rmse not 0");
  c.expect(p.pearson && std::abs(*p.pearson - 1.0) < 1e-12, "perfect prediction pearson not 1");
  return c.result("bucket shares sum to 100; fixture shares 50/16.7/16.7/16.7; perfect fit rmse 0, r 1");
}

// Synthetic experiment -----------------------------------------------------

struct Experiment {
  pipeline::RunConfig config;
  pipeline::Experiment result;
  double seconds = 0;
};

pipeline::RunConfig experiment_config(const fs::path& out) {
  pipeline::RunConfig cfg;
  cfg.synth.city.n_stops = 200;
  cfg.synth.days = 90;
  cfg.synth.seed = 42;
  cfg.experiment.seed = 42;
  for (const char* name : {"rf", "xgb", "tweedie"}) cfg.experiment.models.push_back(pipeline::model_spec(name, 42));
  cfg.write_panel = false;
  cfg.surfaces.filters = {eval::TimeFilter::kAll, eval::TimeFilter::kPeak, eval::TimeFilter::kWeekend};
  cfg.output_dir = out;
  cfg.text = "acceptance synthetic experiment";
  return cfg;
}

Experiment run_synthetic(const fs::path& out, int threads) {
  set_thread_count(threads);
  Experiment e{experiment_config(out), {}, 0};
  const auto start = std::chrono::steady_clock::now();
  e.result = pipeline::run(e.config);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return e;
}

const pipeline::ModelResult& model(const Experiment& e, const std::string& name) {
  for (const auto& m : e.result.models) {
    if (m.name == name) return m;
  }
  throw std::runtime_error("missing model " + name);
}

Outcome synthetic_experiment(const Experiment& e) {
  Check c;
  double persistence = 0, seasonal = 0;
  for (const auto& b : e.result.baselines) {
    // Baseline RMSE recomputed from the records.
    double s = 0;
    for (const auto& r : b.records) s += (r.predicted - r.observed) * (r.predicted - r.observed);
    const double rmse = std::sqrt(s / static_cast<double>(b.records.size()));
    (b.name == "persistence" ? persistence : seasonal) = rmse;
  }
  std::string summary;
  for (const auto& m : e.result.models) {
    double s = 0;
    for (const auto& r : m.records) s += (r.predicted - r.observed) * (r.predicted - r.observed);
    const double rmse = std::sqrt(s / static_cast<double>(m.records.size()));
    c.expect(rmse <= 0.9 * persistence, m.name + fmt(" rmse %.4f above 0.9 x persistence %.4f", rmse, persistence));
    c.expect(rmse <= 0.9 * seasonal, m.name + fmt(" rmse %.4f above 0.9 x seasonal naive %.4f", rmse, seasonal));
    summary += m.name + fmt(" %.3f ", rmse / persistence);
  }

  // Heavy-rain hours of the corpus weather (target hour > 3 mm).
  const auto corpus = synth::generate(e.config.synth);
  const auto weather = hourly_weather(corpus.weather, corpus.origin, corpus.hours);
  auto rain_range = [&](const pipeline::ModelResult& m) {
    double lo = 1e300, hi = -1e300;
    std::size_t n = 0;
    for (const auto& r : m.records) {
      if (weather[static_cast<std::size_t>(r.hour_index)].rainfall > 3.0) {
        lo = std::min(lo, r.residual);
        hi = std::max(hi, r.residual);
        ++n;
      }
    }
    return std::pair{n == 0 ? 0.0 : hi - lo, n};
  };
  const auto [tweedie_range, n_rain] = rain_range(model(e, "tweedie"));
  const auto [xgb_range, n_rain2] = rain_range(model(e, "xgb"));
  (void)n_rain2;
  c.expect(n_rain > 0, "no held-out records in heavy-rain hours");
  c.expect(tweedie_range <= xgb_range,
           fmt("heavy-rain residual range: tweedie %.3f wider than squared-loss %.3f", tweedie_range, xgb_range));
  c.expect(e.seconds < 15 * 60, fmt("runtime %.0f s", e.seconds));
  summary += fmt("(model/persistence rmse); rain range tweedie %.2f vs squared %.2f; %.0f s", tweedie_range,
                 xgb_range, e.seconds);
  return c.result(summary);
}

std::vector<std::string> artifact_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const char* sub : {"models", "metrics", "surfaces"}) {
    for (const auto& f : fs::directory_iterator(root / sub)) out.push_back(std::string(sub) + "/" + f.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome thread_determinism(const Experiment& one, const Experiment& many) {
  Check c;
  const auto a = artifact_files(one.config.output_dir);
  const auto b = artifact_files(many.config.output_dir);
  c.expect(a == b, "different artifact sets");
  std::size_t compared = 0;
  for (const auto& f : a) {
    c.expect(slurp(one.config.output_dir / f) == slurp(many.config.output_dir / f), f + " differs between thread counts");
    ++compared;
  }
  for (std::size_t i = 0; i < one.result.models.size(); ++i) {
    c.expect(one.result.models[i].model == many.result.models[i].model, one.result.models[i].name + " model differs");
  }
  return c.result(fmt("%g model, metric and surface files identical at 1 and 8 threads", static_cast<double>(compared)));
}

Outcome importance_ranking(const Experiment& e) {
  Check c;
  const auto& imp = model(e, "tweedie").importance;
  const double lag = imp[index_of(Feature::kHourLag)];
  double top_weather = 0;
  std::string top_name;
  for (std::size_t f = 0; f < imp.size(); ++f) {
    c.expect(imp[f] >= 0.0 && imp[f] <= 1.0, "importance outside [0, 1]");
    if (is_weather_feature(f) && imp[f] > top_weather) {
      top_weather = imp[f];
      top_name = std::string(feature_names()[f]);
    }
  }
  c.expect(*std::max_element(imp.begin(), imp.end()) == 1.0, "maximum importance is not exactly 1");
  c.expect(lag > top_weather, fmt("hour lag %.3f not above top weather feature %.3f", lag, top_weather));
  return c.result(fmt("HourLag %.3f > ", lag) + top_name + fmt(" %.3f; max exactly 1", top_weather));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "stormrider_acceptance";
  if (argc > 1) work = argv[1];
  fs::remove_all(work);

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("[%s] %2d %-34s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "tweedie derivatives", tweedie_derivatives);
  report(2, "exact-fit oracle", exact_fit);
  report(3, "jenks optimality", jenks_optimality);
  report(4, "buffer counts", buffer_counts);
  report(5, "panel row identity", panel_identity);
  report(6, "apparent temperature", apparent_temperature_grid);
  report(7, "idw properties", idw_properties);
  report(8, "metric identities", metric_identities);

  std::optional<Experiment> single, multi;
  report(9, "synthetic end-to-end", [&] {
    single = run_synthetic(work / "threads1", 1);
    return synthetic_experiment(*single);
  });
  report(10, "thread-count determinism", [&] {
    if (!single) return Outcome{false, "end-to-end run did not complete"};
    multi = run_synthetic(work / "threads8", 8);
    return thread_determinism(*single, *multi);
  });
  report(11, "variable importance", [&] {
    if (!single) return Outcome{false, "end-to-end run did not complete"};
    return importance_ranking(*single);
  });

  std::printf("%d of 11 checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}
