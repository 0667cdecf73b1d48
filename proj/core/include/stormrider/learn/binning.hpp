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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stormrider/panel.hpp"

namespace stormrider::learn {

/// Per-feature histogram cut points, frozen from training data.
///
/// Bin b of feature f holds values in (cut[b-1], cut[b]]; a value above the
/// last cut falls in the final bin. Cuts are taken from the data: every
/// distinct value when there are at most n_bins of them, otherwise the
/// n_bins-quantiles.
class BinMapper {
 public:
  BinMapper() = default;
  static BinMapper fit(const FeatureMatrix& x, int n_bins);

  [[nodiscard]] std::size_t features() const { return cuts_.size(); }
  [[nodiscard]] std::size_t bins(std::size_t f) const { return cuts_[f].size() + 1; }
  [[nodiscard]] const std::vector<float>& cuts(std::size_t f) const { return cuts_[f]; }
  [[nodiscard]] std::uint8_t bin(std::size_t f, float x) const;

 private:
  std::vector<std::vector<float>> cuts_;
};

/// Column-major matrix of bin indices.
class BinnedMatrix {
 public:
  BinnedMatrix(const FeatureMatrix& x, const BinMapper& mapper);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::span<const std::uint8_t> column(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  [[nodiscard]] std::uint8_t operator()(std::size_t r, std::size_t c) const {
    return data_[c * rows_ + r];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace stormrider::learn
