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

/// Random forest of CART regression trees. Each tree sees a row sample
/// drawn without replacement and picks among `mtry` random features at
/// every node, splitting on histogram candidates by variance reduction.
/// Trees are grown in parallel; tree k uses stream k of `hp.seed`, so the
/// forest does not depend on the thread count.
TreeEnsemble fit_random_forest(const FeatureMatrix& x, std::span<const double> y, const Hyperparameters& hp,
                               std::vector<std::string> schema = {});

}  // namespace stormrider::learn
