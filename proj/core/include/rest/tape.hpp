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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rest/tensor.hpp"

namespace rest {

// A trainable tensor. Gradients accumulate additively across a backward
// pass; zero_grad() resets them before the next one.
struct Parameter {
  Tensor value;
  Tensor grad;
  std::string name;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : value(std::move(v)), grad(value.rows(), value.cols()), name(std::move(n)) {}

  void zero_grad() { grad.fill(0.0); }
};

// Define-by-run reverse-mode tape. One tape records one forward pass; the
// training loop builds a fresh tape per batch. Nodes are created in
// topological order, so backward() is a single reverse sweep.
//
// Parameters are not nodes: ops that consume them write straight into
// Parameter::grad during backward. Callers must keep referenced Parameters
// alive (and unmoved) for the tape's lifetime.
class Tape {
 public:
  struct ValueId {
    std::uint32_t index = 0;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves.
  ValueId constant(Tensor t);
  ValueId param(Parameter& p);

  // Row gather from an embedding table; repeated ids accumulate gradient.
  ValueId lookup(Parameter& table, std::vector<std::uint32_t> ids);

  // out = x * W + b (bias broadcast over rows).
  ValueId affine(ValueId x, Parameter& w, Parameter& b);

  ValueId matmul(ValueId a, ValueId b);
  ValueId transpose(ValueId x);

  ValueId sigmoid(ValueId x);
  ValueId relu(ValueId x);
  ValueId softmax_rows(ValueId x);

  ValueId add(ValueId a, ValueId b);
  ValueId sub(ValueId a, ValueId b);
  ValueId mul(ValueId a, ValueId b);
  ValueId scale(ValueId x, double c);

  ValueId concat_cols(std::span<const ValueId> parts);
  ValueId concat_rows(std::span<const ValueId> parts);
  ValueId slice_cols(ValueId x, std::size_t first, std::size_t count);
  ValueId slice_rows(ValueId x, std::size_t first, std::size_t count);

  // 1 x d -> n x d.
  ValueId broadcast_rows(ValueId x, std::size_t n);
  // m x k -> m x (k*times); each source column repeated `times` consecutively.
  ValueId repeat_cols(ValueId x, std::size_t times);
  // m x (fields*w) -> m x fields; mean over each contiguous block of w columns.
  ValueId field_means(ValueId x, std::size_t fields);
  // Row i scaled by factors[i]; factors are constants (no gradient to them).
  ValueId row_scale(ValueId x, std::vector<double> factors);

  ValueId sum_all(ValueId x);
  // m x n -> m x 1, numerically stable.
  ValueId logsumexp_rows(ValueId x);

  // Mean binary cross entropy of a column of probabilities against 0/1
  // labels; probabilities clamped to [1e-12, 1 - 1e-12].
  ValueId bce_mean(ValueId preds, std::vector<double> labels);

  const Tensor& value(ValueId id) const { return nodes_[id.index].value; }

  // Accumulates d(loss)/d(param) into every reachable Parameter's grad.
  // `loss` must be scalar.
  void backward(ValueId loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  using BackFn = std::function<void(Tape&, std::uint32_t self, const Tensor&)>;

  struct Node {
    Tensor value;
    Tensor grad;  // allocated lazily during backward
    BackFn back;  // empty for leaves
  };

  ValueId push(Tensor value, BackFn back);
  Tensor& grad_of(std::uint32_t index);
  void add_grad(std::uint32_t index, const Tensor& g);

  std::vector<Node> nodes_;
};

// Clamp applied by sigmoid() so outputs stay strictly inside (0, 1).
inline constexpr double kSigmoidFloor = 1e-15;

// Clamp applied by bce_mean().
inline constexpr double kProbClamp = 1e-12;

}  // namespace rest
