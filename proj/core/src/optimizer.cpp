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

#include "rest/optimizer.hpp"

#include <cmath>

#include "rest/errors.hpp"

namespace rest {

AdamW::AdamW(std::vector<Parameter*> params, const AdamWConfig& cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Parameter* p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void AdamW::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    Parameter& p = *params_[pi];
    if (!p.grad.same_shape(p.value)) {
      throw DimensionError("adamw: gradient " + p.grad.shape_str() +
                           " vs value " + p.value.shape_str() + " for " +
                           p.name);
    }
    double* val = p.value.data();
    const double* g = p.grad.data();
    double* m = m_[pi].data();
    double* v = v_[pi].data();
    for (std::size_t i = 0; i < p.value.numel(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      val[i] -= lr * (mhat / (std::sqrt(vhat) + cfg_.epsilon) +
                      cfg_.weight_decay * val[i]);
    }
  }
}

}  // namespace rest
