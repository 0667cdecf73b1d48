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

namespace stormrider::learn {

/// First and second derivative of a per-row loss with respect to the raw
/// score.
struct GradHess {
  double grad = 0.0;
  double hess = 0.0;
};

/// L = (f - y)^2 / 2.
inline double squared_loss(double y, double f) { return 0.5 * (f - y) * (f - y); }
inline GradHess squared_grad_hess(double y, double f) { return {f - y, 1.0}; }

/// Tweedie deviance kernel under a log link, mu = exp(f), variance power p:
///   L = -y e^{(1-p) f} / (1-p) + e^{(2-p) f} / (2-p).
double tweedie_loss(double y, double f, double power);

/// g = -y e^{(1-p) f} + e^{(2-p) f};  h = -(1-p) y e^{(1-p) f} + (2-p) e^{(2-p) f}.
/// h > 0 for y >= 0. Throws std::invalid_argument unless 1 < p < 2.
GradHess tweedie_grad_hess(double y, double f, double power);

}  // namespace stormrider::learn
