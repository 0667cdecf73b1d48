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

// Helpers shared by the learners; not installed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stormrider/learn/ensemble.hpp"
#include "stormrider/panel.hpp"
#include "stormrider/rng.hpp"

namespace stormrider::learn::detail {

inline void check_training_data(const FeatureMatrix& x, std::span<const double> y, bool non_negative) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("fit: empty training matrix");
  if (y.size() != x.rows()) throw std::invalid_argument("fit: target length differs from row count");
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (const float v : x.column(c)) {
      if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite value in feature column " + std::to_string(c));
    }
  }
  for (const double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite target");
    if (non_negative && v < 0.0) throw std::invalid_argument("fit: negative target under the Tweedie objective");
  }
}

inline std::vector<std::string> resolve_schema(std::vector<std::string> schema, std::size_t cols) {
  if (schema.empty()) {
    if (cols == kFeatureCount) return panel_schema();
    for (std::size_t c = 0; c < cols; ++c) schema.push_back("x" + std::to_string(c));
  }
  if (schema.size() != cols) throw std::invalid_argument("fit: schema width differs from column count");
  return schema;
}

inline std::size_t sample_size(double rate, std::size_t n) {
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(rate * static_cast<double>(n))), 1, n);
}

/// First k entries of a partial Fisher-Yates pass over `pool`, ascending.
/// `pool` is left permuted, which later draws depend on.
inline std::vector<std::uint32_t> draw_sorted(std::vector<std::uint32_t>& pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::uint32_t> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::uint32_t> iota_u32(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0U);
  return v;
}

}  // namespace stormrider::learn::detail
