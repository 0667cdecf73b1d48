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

#include "stormrider/learn/gbdt.hpp"

#include <cmath>
#include <numeric>

#include "common.hpp"
#include "stormrider/errors.hpp"
#include "stormrider/learn/binning.hpp"
#include "stormrider/learn/objective.hpp"
#include "stormrider/learn/tree_grower.hpp"

namespace stormrider::learn {

TreeEnsemble fit_gbdt(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                      std::vector<std::string> schema) {
  if (hp.algorithm != Algorithm::kGbdt) throw ConfigError("fit_gbdt: settings are not for boosting");
  hp.validate(x.cols());
  const bool tweedie = hp.objective == Objective::kTweedie;
  detail::check_training_data(x, y, tweedie);

  const std::size_t n = x.rows();
  const std::size_t n_features = x.cols();

  TreeEnsemble model;
  model.kind = ModelKind::kGbdt;
  model.objective = hp.objective;
  model.tweedie_power = hp.tweedie_power;
  model.learning_rate = hp.learning_rate;
  model.feature_schema = detail::resolve_schema(std::move(schema), n_features);
  model.params = hp.to_pairs();
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  model.base_score = tweedie ? std::log(mean_y + 1e-8) : mean_y;

  const BinMapper mapper = BinMapper::fit(x, hp.n_bins);
  const BinnedMatrix bins(x, mapper);
  const TreeGrower grower(bins, mapper);
  const GrowerSettings settings{hp.max_depth, hp.min_obs_leaf, hp.lambda, hp.gamma, 0, true};

  std::vector<double> scores(n, model.base_score);
  std::vector<double> grad(n, 0.0), hess(n, 0.0);
  std::vector<std::uint32_t> row_pool = detail::iota_u32(n);
  std::vector<std::uint32_t> feature_pool = detail::iota_u32(n_features);
  std::vector<std::uint8_t> in_sample(n, 0);
  const std::size_t row_count = detail::sample_size(hp.row_sample_rate, n);
  const std::size_t feature_count = detail::sample_size(hp.col_sample_rate_per_tree, n_features);
  const Rng master(hp.seed);

  model.trees.reserve(static_cast<std::size_t>(hp.n_trees));
  for (int round = 0; round < hp.n_trees; ++round) {
    Rng rng = master.split(static_cast<std::uint64_t>(round));
    std::vector<std::uint32_t> rows =
        row_count == n ? detail::iota_u32(n) : detail::draw_sorted(row_pool, row_count, rng);
    const std::vector<std::uint32_t> features = feature_count == n_features
                                                    ? detail::iota_u32(n_features)
                                                    : detail::draw_sorted(feature_pool, feature_count, rng);

    const auto m = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const std::uint32_t r = rows[static_cast<std::size_t>(i)];
      const GradHess gh = tweedie ? tweedie_grad_hess(y[r], scores[r], hp.tweedie_power)
                                  : squared_grad_hess(y[r], scores[r]);
      grad[r] = gh.grad;
      hess[r] = gh.hess;
    }

    GrowResult grown = grower.grow(grad, hess, std::move(rows), features, settings, rng.split(1));
    const Tree& tree = grown.tree;

    // Sampled rows already know their leaf; the rest walk the tree.
    for (const auto& leaf : grown.leaves) {
      const double step = hp.learning_rate * tree.nodes[static_cast<std::size_t>(leaf.node)].value;
      for (std::uint32_t i = leaf.begin; i < leaf.end; ++i) {
        const std::uint32_t r = grown.rows[i];
        scores[r] += step;
        in_sample[r] = 1;
      }
    }
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ri = 0; ri < nn; ++ri) {
      const auto r = static_cast<std::size_t>(ri);
      if (in_sample[r]) {
        in_sample[r] = 0;
      } else {
        scores[r] += hp.learning_rate * predict_binned(tree, bins, r);
      }
    }
    model.trees.push_back(std::move(grown.tree));
  }
  return model;
}

}  // namespace stormrider::learn
