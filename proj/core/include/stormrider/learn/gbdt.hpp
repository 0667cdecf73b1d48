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

#include <span>
#include <string>
#include <vector>

#include "stormrider/learn/ensemble.hpp"
#include "stormrider/learn/hyperparameters.hpp"
#include "stormrider/panel.hpp"

namespace stormrider::learn {

/// Second-order gradient boosting with squared or Tweedie (log link) loss.
///
/// Starts from base_score (mean target, or its log for Tweedie) and adds
/// n_trees histogram trees, each fitted to the gradients at the current
/// scores on a fresh row and column sample. Rounds are sequential; each
/// round draws from its own stream of `hp.seed`.
///
/// `schema` names the columns of `x`; empty means the 43 panel features.
/// Throws std::invalid_argument on an empty or non-finite input and
/// ConfigError on invalid settings.
TreeEnsemble fit_gbdt(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                      std::vector<std::string> schema = {});

}  // namespace stormrider::learn
