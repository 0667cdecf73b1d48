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

#include "stormrider/learn/binning.hpp"

#include <algorithm>
#include <stdexcept>

namespace stormrider::learn {

BinMapper BinMapper::fit(const FeatureMatrix& x, int n_bins) {
  if (n_bins < 2 || n_bins > 256) throw std::invalid_argument("BinMapper: n_bins must lie in [2, 256]");
  BinMapper mapper;
  mapper.cuts_.resize(x.cols());
  const auto cols = static_cast<std::ptrdiff_t>(x.cols());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ci = 0; ci < cols; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    auto col = x.column(c);
    std::vector<float> sorted(col.begin(), col.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<float> distinct;
    std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));
    auto& cuts = mapper.cuts_[c];
    if (distinct.size() <= static_cast<std::size_t>(n_bins)) {
      cuts.assign(distinct.begin(), distinct.end());
    } else {
      const std::size_t n = sorted.size();
      for (int b = 1; b < n_bins; ++b) {
        const std::size_t pos = (n * static_cast<std::size_t>(b)) / static_cast<std::size_t>(n_bins);
        const float v = sorted[std::min(pos, n - 1)];
        if (cuts.empty() || v > cuts.back()) cuts.push_back(v);
      }
    }
    // The maximum needs no cut of its own: it is the top bin.
    if (!cuts.empty() && !distinct.empty() && cuts.back() >= distinct.back()) cuts.pop_back();
  }
  return mapper;
}

std::uint8_t BinMapper::bin(std::size_t f, float x) const {
  const auto& c = cuts_[f];
  return static_cast<std::uint8_t>(std::lower_bound(c.begin(), c.end(), x) - c.begin());
}

BinnedMatrix::BinnedMatrix(const FeatureMatrix& x, const BinMapper& mapper)
    : rows_(x.rows()), cols_(x.cols()), data_(x.rows() * x.cols()) {
  if (mapper.features() != x.cols()) throw std::invalid_argument("BinnedMatrix: mapper width mismatch");
  const auto cols = static_cast<std::ptrdiff_t>(cols_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < cols; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    auto col = x.column(c);
    std::uint8_t* out = data_.data() + c * rows_;
    for (std::size_t r = 0; r < rows_; ++r) out[r] = mapper.bin(c, col[r]);
  }
}

}  // namespace stormrider::learn
