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
#include <limits>
#include <stdexcept>

#include "stormrider/features.hpp"

namespace stormrider {

JenksBreaks jenks_breaks(std::span<const double> values, int k) {
  if (values.empty()) throw std::invalid_argument("jenks_breaks: no values");
  if (k < 2) throw std::invalid_argument("jenks_breaks: need at least two classes");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct;
  std::vector<double> weight;
  for (double v : sorted) {
    if (distinct.empty() || v != distinct.back()) {
      distinct.push_back(v);
      weight.push_back(1.0);
    } else {
      weight.back() += 1.0;
    }
  }
  const std::size_t m = distinct.size();
  const auto classes = static_cast<std::size_t>(k);
  if (classes > m) {
    throw std::invalid_argument("jenks_breaks: " + std::to_string(k) + " classes but only " +
                                std::to_string(m) + " distinct values");
  }

  // Centred prefix sums keep Q - S^2/W well conditioned.
  double centre = 0.0;
  for (double v : sorted) centre += v;
  centre /= static_cast<double>(sorted.size());
  std::vector<double> pw(m + 1, 0.0), ps(m + 1, 0.0), pq(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = distinct[i] - centre;
    pw[i + 1] = pw[i] + weight[i];
    ps[i + 1] = ps[i] + weight[i] * x;
    pq[i + 1] = pq[i] + weight[i] * x * x;
  }
  // SSD of distinct values [i, j).
  auto ssd = [&](std::size_t i, std::size_t j) {
    const double w = pw[j] - pw[i];
    const double s = ps[j] - ps[i];
    return std::max(0.0, (pq[j] - pq[i]) - s * s / w);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[c][j]: best SSD of the first j distinct values in c + 1 classes.
  std::vector<std::vector<double>> cost(classes, std::vector<double>(m + 1, kInf));
  std::vector<std::vector<std::size_t>> cut(classes, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t j = 1; j <= m; ++j) cost[0][j] = ssd(0, j);
  for (std::size_t c = 1; c < classes; ++c) {
    for (std::size_t j = c + 1; j <= m; ++j) {
      for (std::size_t i = c; i < j; ++i) {
        const double candidate = cost[c - 1][i] + ssd(i, j);
        if (candidate < cost[c][j]) {
          cost[c][j] = candidate;
          cut[c][j] = i;
        }
      }
    }
  }

  JenksBreaks out;
  out.k = k;
  out.interior_breaks.resize(classes - 1);
  std::size_t j = m;
  for (std::size_t c = classes - 1; c >= 1; --c) {
    const std::size_t i = cut[c][j];
    out.interior_breaks[c - 1] = distinct[i - 1];
    j = i;
  }
  return out;
}

double class_ssd(std::span<const double> values, const JenksBreaks& breaks) {
  const std::size_t classes = breaks.interior_breaks.size() + 1;
  std::vector<double> sum(classes, 0.0), count(classes, 0.0);
  for (double v : values) {
    const auto c = journey_class(v, breaks);
    sum[c] += v;
    count[c] += 1.0;
  }
  double total = 0.0;
  for (double v : values) {
    const auto c = journey_class(v, breaks);
    const double d = v - sum[c] / count[c];
    total += d * d;
  }
  return total;
}

}  // namespace stormrider
