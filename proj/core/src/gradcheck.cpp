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

#include "rest/gradcheck.hpp"

#include <cmath>

#include "rest/errors.hpp"

namespace rest {

GradCheckResult finite_difference_check(
    const std::vector<Parameter*>& params,
    const std::function<double(bool)>& loss_fn, double step) {
  if (step <= 0.0) throw ContractError("finite_difference_check: step <= 0");

  for (Parameter* p : params) p->zero_grad();
  loss_fn(true);

  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    for (std::size_t i = 0; i < p.value.numel(); ++i) {
      const double x0 = p.value.values()[i];
      p.value.values()[i] = x0 + step;
      const double up = loss_fn(false);
      p.value.values()[i] = x0 - step;
      const double down = loss_fn(false);
      p.value.values()[i] = x0;

      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[pi].values()[i];
      const double err = std::abs(a - numeric) / (std::abs(a) + 1e-8);
      if (err > result.max_rel_err) {
        result.max_rel_err = err;
        result.worst_param = p.name;
        result.worst_coord = i;
      }
    }
  }
  return result;
}

}  // namespace rest
