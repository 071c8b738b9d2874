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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rest {

// Dense row-major matrix of 64-bit reals. Vectors are 1 x n rows, scalars
// 1 x 1. Every shape this project needs is rank <= 2.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Tensor row(std::vector<double> values);
  static Tensor row(std::initializer_list<double> values);
  static Tensor scalar(double v);
  static Tensor from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t numel() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

  std::span<double> row_span(std::size_t r) {
    return {v_.data() + r * cols_, cols_};
  }
  std::span<const double> row_span(std::size_t r) const {
    return {v_.data() + r * cols_, cols_};
  }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  // Scalar access; throws ContractError unless numel() == 1.
  double item() const;

  bool same_shape(const Tensor& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;
  void fill(double v);

  std::string shape_str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

// Throws DimensionError naming both shapes when they differ.
void check_same_shape(const Tensor& a, const Tensor& b, const char* where);

}  // namespace rest
