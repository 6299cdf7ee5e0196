// Copyright 2026 The aigc-chain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>

namespace aigc {

/// Subjective-logic opinion: positive mass, negative mass, uncertainty.
struct Opinion {
  double p = 0.0;
  double n = 0.0;
  double u = 1.0;

  static constexpr Opinion vacuous() { return {0.0, 0.0, 1.0}; }

  bool on_simplex(double tol = 1e-9) const {
    return p >= -tol && n >= -tol && u >= -tol && std::abs(p + n + u - 1.0) <= tol;
  }

  bool operator==(const Opinion&) const = default;
};

}  // namespace aigc
