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

#include "stormrider/learn/forest.hpp"

#include <numeric>

#include "common.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/learn/binning.hpp"
#include "stormrider/learn/tree_grower.hpp"

namespace stormrider::learn {

TreeEnsemble fit_random_forest(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                               std::vector<std::string> schema) {
  if (hp.algorithm != Algorithm::kRandomForest) throw ConfigError("fit_random_forest: settings are not for a forest");
  hp.validate(x.cols());
  detail::check_training_data(x, y, false);

  const std::size_t n = x.rows();
  TreeEnsemble model;
  model.kind = ModelKind::kRandomForest;
  model.objective = Objective::kSquared;
  model.tweedie_power = hp.tweedie_power;
  model.learning_rate = 1.0;
  model.feature_schema = detail::resolve_schema(std::move(schema), x.cols());
  model.params = hp.to_pairs();
  model.base_score = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

  const BinMapper mapper = BinMapper::fit(x, hp.n_bins);
  const BinnedMatrix bins(x, mapper);
  const TreeGrower grower(bins, mapper);
  // CART as a Newton step: g = -y, h = 1 and no regulariser give leaf means
  // and half the squared-error reduction as the gain.
  std::vector<double> grad(n), hess(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) grad[i] = -y[i];
  const GrowerSettings settings{hp.max_depth, hp.min_obs_leaf, 0.0, hp.gamma, hp.mtry, false};
  const std::vector<std::uint32_t> all_features = detail::iota_u32(x.cols());
  const std::size_t row_count = detail::sample_size(hp.row_sample_rate, n);
  const Rng master(hp.seed);

  model.trees.resize(static_cast<std::size_t>(hp.n_trees));
  const auto n_trees = static_cast<std::ptrdiff_t>(hp.n_trees);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < n_trees; ++t) {
    Rng rng = master.split(static_cast<std::uint64_t>(t));
    std::vector<std::uint32_t> rows = detail::iota_u32(n);
    if (row_count < n) rows = detail::draw_sorted(rows, row_count, rng);
    GrowResult grown = grower.grow(grad, hess, std::move(rows), all_features, settings, rng.split(1));
    model.trees[static_cast<std::size_t>(t)] = std::move(grown.tree);
  }
  return model;
}

}  // namespace stormrider::learn
