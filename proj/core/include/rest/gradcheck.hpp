// Copyright 2026 The ReST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rest/tape.hpp"

namespace rest {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_coord = 0;
};

// Compares analytic gradients against central finite differences.
//
// `loss_fn(true)` must rebuild the graph from the current parameter values,
// run backward, and return the loss; `loss_fn(false)` must return the loss
// without touching gradients. All parameter gradients are zeroed before the
// analytic pass. The relative error per coordinate is
// |analytic - numeric| / (|analytic| + 1e-8).
GradCheckResult finite_difference_check(
    const std::vector<Parameter*>& params,
    const std::function<double(bool with_grad)>& loss_fn, double step);

}  // namespace rest
