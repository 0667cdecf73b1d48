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

#include "stormrider/learn/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace stormrider::learn {
namespace {
void check_power(double p) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("tweedie variance power must lie in (1, 2)");
}
}  // namespace

double tweedie_loss(double y, double f, double power) {
  check_power(power);
  return -y * std::exp((1.0 - power) * f) / (1.0 - power) + std::exp((2.0 - power) * f) / (2.0 - power);
}

GradHess tweedie_grad_hess(double y, double f, double power) {
  check_power(power);
  const double a = std::exp((1.0 - power) * f);
  const double b = std::exp((2.0 - power) * f);
  return {-y * a + b, -(1.0 - power) * y * a + (2.0 - power) * b};
}

}  // namespace stormrider::learn
