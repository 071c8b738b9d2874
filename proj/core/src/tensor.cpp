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

#include "rest/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "rest/errors.hpp"

namespace rest {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

Tensor Tensor::row(std::vector<double> values) {
  Tensor t;
  t.rows_ = 1;
  t.cols_ = values.size();
  t.v_ = std::move(values);
  return t;
}

Tensor Tensor::row(std::initializer_list<double> values) {
  return row(std::vector<double>(values));
}

Tensor Tensor::scalar(double v) { return row({v}); }

Tensor Tensor::from_rows(const std::vector<std::vector<double>>& rows) {
  Tensor t(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != t.cols_) {
      throw DimensionError("from_rows: row " + std::to_string(r) + " has " +
                           std::to_string(rows[r].size()) +
                           " columns, expected " + std::to_string(t.cols_));
    }
    std::copy(rows[r].begin(), rows[r].end(), t.v_.begin() + r * t.cols_);
  }
  return t;
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ContractError("item(): tensor of shape " + shape_str() +
                        " is not a scalar");
  }
  return v_[0];
}

bool Tensor::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](double x) { return std::isfinite(x); });
}

void Tensor::fill(double v) { std::fill(v_.begin(), v_.end(), v); }

std::string Tensor::shape_str() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* where) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(where) + ": shape " + a.shape_str() +
                         " vs " + b.shape_str());
  }
}

}  // namespace rest
