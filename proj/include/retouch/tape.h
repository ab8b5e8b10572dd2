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
#include <functional>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "retouch/tensor.h"

namespace retouch {

// Handle to a node on a Tape.
struct Var {
  std::size_t id = 0;
};

// Reverse-mode recording of primitive tensor operations. Nodes are appended
// in evaluation order, so the record is topologically sorted by
// construction; backward() walks it once in reverse.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf that takes no gradient.
  Var constant(Tensor value);
  // Leaf that refers to an external tensor without copying it and takes no
  // gradient; the tensor must outlive the tape.
  Var constant_ref(const Tensor& value);
  // Leaf owned by the tape that takes a gradient (read back with grad()).
  Var leaf(Tensor value);
  // Leaf that refers to an external tensor. backward() adds the gradient
  // into `grad_sink`, which must have the same shape and outlive the call.
  Var parameter(const Tensor& value, Tensor& grad_sink);

  const Tensor& value(Var v) const;
  // Gradient of the last backward() loss with respect to v; zero-filled for
  // nodes the loss does not reach.
  const Tensor& grad(Var v);
  std::size_t size() const { return nodes_.size(); }

  // Drops every node but keeps their value and gradient storage for reuse,
  // so a loop that rebuilds the same graph each iteration stops allocating
  // after the first pass. Vars from before the reset are invalid.
  void reset();

  // Seeds d loss / d loss = 1 and propagates to every reachable node.
  // `loss` must be 1×1.
  void backward(Var loss);

  // c = a · b
  Var matmul(Var a, Var b);
  // Elementwise a + b, equal shapes.
  Var add(Var a, Var b);
  // a (n×m) plus a 1×m row added to every row.
  Var add_row(Var a, Var row);
  // a (n×m) plus g (groups×m); row i receives g's row i / rows_per_group.
  Var add_grouped(Var a, Var g, std::size_t rows_per_group);
  // x / (1 + |x|)
  Var softsign(Var a);
  // Clamp to [0, 1]; gradient passes only strictly inside.
  Var clamp01(Var a);
  // Mean of all elements, 1×1.
  Var mean(Var a);
  // Mean absolute difference to a constant target, sign(0) = 0.
  Var l1_loss(Var a, const Tensor& target);
  // Horizontal concatenation of equal-height tensors.
  Var concat_cols(std::span<const Var> parts);
  // Row i multiplied by the constant scale[i].
  Var scale_rows(Var a, std::vector<double> scale);

 private:
  struct Node {
    Tensor owned;
    const Tensor* value = nullptr;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    Tensor* grad_sink = nullptr;
    std::function<void(Tape&, std::size_t)> backward;
  };

  Var push(Tensor value, bool requires_grad,
           std::function<void(Tape&, std::size_t)> backward);
  Node& node(Var v) { return *nodes_[v.id]; }
  const Node& node(Var v) const { return *nodes_[v.id]; }
  bool needs(Var v) const { return node(v).requires_grad; }
  // Zero-initialised gradient buffer of v, allocated on first use.
  Tensor& grad_buffer(Var v);
  // Zero-filled rows × cols tensor, backed by recycled storage when the pool
  // has a buffer of that size.
  Tensor make(std::size_t rows, std::size_t cols);
  void recycle(Tensor& t);

  std::vector<std::unique_ptr<Node>> nodes_;
  std::unordered_map<std::size_t, std::vector<std::vector<double>>> pool_;
};

}  // namespace retouch
