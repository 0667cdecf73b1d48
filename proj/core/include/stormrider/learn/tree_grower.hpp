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

#include "stormrider/learn/binning.hpp"
#include "stormrider/learn/ensemble.hpp"
#include "stormrider/rng.hpp"

namespace stormrider::learn {

struct GrowerSettings {
  int max_depth = 0;  // 0: unlimited
  int min_obs_leaf = 1;
  double lambda = 0.0;
  double gamma = 0.0;
  /// Features drawn per node from `features`; 0 uses them all.
  int per_node_features = 0;
  /// Derive the larger child's histogram from parent minus smaller child.
  bool subtract_histograms = true;
};

/// A leaf and the slice of GrowResult::rows that landed in it.
struct LeafRange {
  std::int32_t node = 0;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

struct GrowResult {
  Tree tree;
  std::vector<std::uint32_t> rows;  // training rows grouped by leaf
  std::vector<LeafRange> leaves;
};

/// Greedy second-order histogram tree growth.
///
/// A node splits on the (feature, bin) maximising
///   0.5 * [GL^2/(HL+lambda) + GR^2/(HR+lambda) - G^2/(H+lambda)] - gamma
/// provided the gain is positive and both sides keep min_obs_leaf rows.
/// Leaves take -G/(H+lambda). With g = -y, h = 1 and lambda = 0 this is a
/// CART regression tree with leaf means.
class TreeGrower {
 public:
  TreeGrower(const BinnedMatrix& bins, const BinMapper& mapper);

  /// `rows` must be ascending; `features` ascending and non-empty. `rng` is
  /// only consulted when per-node feature sampling is on (node k draws from
  /// rng.split(k)).
  GrowResult grow(std::span<const double> grad, std::span<const double> hess,
                  std::vector<std::uint32_t> rows, std::span<const std::uint32_t> features,
                  const GrowerSettings& settings, const Rng& rng) const;

 private:
  const BinnedMatrix& bins_;
  const BinMapper& mapper_;
  std::vector<std::uint32_t> offset_;  // histogram offset of each feature
  std::uint32_t total_bins_ = 0;
};

/// Follows binned splits; equivalent to Tree::predict on the raw row.
inline double predict_binned(const Tree& tree, const BinnedMatrix& bins, std::size_t row) {
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& n = tree.nodes[i];
    i = static_cast<std::size_t>(bins(row, static_cast<std::size_t>(n.feature)) <= n.bin ? n.left : n.right);
  }
  return tree.nodes[i].value;
}

}  // namespace stormrider::learn
