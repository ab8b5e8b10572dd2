// Copyright 2026 The Retouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace retouch {

// Dense row-major 2-D tensor of 64-bit reals. Vectors are 1×n; scalars 1×1.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::span<double> row(std::size_t r) { return {data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data() + r * cols_, cols_};
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool same_shape(const Tensor& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  void fill(double v);
  bool all_finite() const;

  bool operator==(const Tensor&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Dense kernels shared by the tape and the tape-free inference path. Each
// output element accumulates its products in increasing inner index, so a
// row's result does not depend on which other rows are in the batch.
namespace kernels {

// c = a · b, with a: n×k, b: k×m, c resized to n×m.
void matmul(const Tensor& a, const Tensor& b, Tensor& c);
// ga += gc · bᵀ
void matmul_grad_a(const Tensor& gc, const Tensor& b, Tensor& ga);
// gb += aᵀ · gc
void matmul_grad_b(const Tensor& a, const Tensor& gc, Tensor& gb);

inline double softsign(double x) { return x / (1.0 + (x < 0.0 ? -x : x)); }
inline double softsign_grad(double x) {
  const double d = 1.0 + (x < 0.0 ? -x : x);
  return 1.0 / (d * d);
}

}  // namespace kernels

}  // namespace retouch
