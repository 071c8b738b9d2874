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

#include <cstdint>
#include <vector>

#include "rest/tape.hpp"

namespace rest {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

// Adam with decoupled weight decay and bias correction.
class AdamW {
 public:
  AdamW(std::vector<Parameter*> params, const AdamWConfig& cfg);

  // Consumes the current gradients; does not zero them.
  void step(double lr);

  std::uint64_t steps_taken() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  AdamWConfig cfg_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t t_ = 0;
};

}  // namespace rest
