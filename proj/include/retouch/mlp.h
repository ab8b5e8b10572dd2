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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "retouch/tape.h"
#include "retouch/tensor.h"

namespace retouch {

// Shape of the per-pixel renderer network.
struct MlpSpec {
  std::size_t input = 3;
  std::size_t hidden_layers = 4;
  std::size_t hidden_width = 32;
  std::size_t block_width = 32;  // latent = 3 blocks
  std::size_t output = 3;

  std::size_t latent() const { return 3 * block_width; }
  bool operator==(const MlpSpec&) const = default;
};

// Weights of the per-pixel MLP. Matrices are stored input-major (fan_in ×
// fan_out) so a row of pixels multiplies from the left:
//   h_0 = x,  h_{k+1} = s(h_k W_k + b_k + z U_k),
//   y = x + h_L W_out + b_out,          s(x) = x / (1 + |x|).
struct Mlp {
  MlpSpec spec;
  std::vector<Tensor> w;  // w[0]: input × hidden, w[k>0]: hidden × hidden
  std::vector<Tensor> b;  // 1 × hidden
  std::vector<Tensor> u;  // latent × hidden
  Tensor w_out;           // hidden × output, zero-initialised
  Tensor b_out;           // 1 × output, zero-initialised

  // Xavier-uniform hidden weights from a seeded generator; zero biases and a
  // zero output head, so the fresh network is the identity map.
  static Mlp initialize(const MlpSpec& spec, std::uint64_t seed);
  // Zero-filled tensors of the spec's shapes (used for gradients).
  static Mlp zeros(const MlpSpec& spec);

  // Declared layer order: per hidden layer (W_k, b_k, U_k), then W_out, b_out.
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  // Rebuilds from tensors in declared order; the spec is read off the shapes.
  static Mlp from_tensors(std::vector<Tensor> tensors);
  static std::size_t tensor_count(const MlpSpec& spec) {
    return 3 * spec.hidden_layers + 2;
  }
};

// Tape variables bound to an Mlp's weights.
struct MlpVars {
  std::vector<Var> w, b, u;
  Var w_out, b_out;
};

// Registers every weight as a tape parameter whose gradient accumulates into
// the matching tensor of `grads` (same spec).
MlpVars bind_parameters(Tape& tape, const Mlp& net, Mlp& grads);

// Recorded forward pass. x: N×input rows; z: G×latent, one latent per group
// of `rows_per_group` consecutive rows. Returns the unclamped N×output.
Var mlp_forward(Tape& tape, const MlpVars& vars, Var x, Var z,
                std::size_t rows_per_group);

// Tape-free forward with one latent (1×latent) shared by all rows. Performs
// the same floating-point operations in the same order as mlp_forward, so
// results match it bit for bit.
Tensor mlp_infer(const Mlp& net, const Tensor& x, const Tensor& z);

// Rounds every value to the nearest 32-bit float, the checkpoint precision.
void snap_to_float(std::vector<Tensor*> tensors);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction over a fixed list of parameter tensors.
class Adam {
 public:
  Adam(std::vector<Tensor*> params, AdamConfig config = {});
  // grads[i] matches params[i] in shape.
  void step(const std::vector<const Tensor*>& grads, double lr);
  std::int64_t steps() const { return t_; }

 private:
  std::vector<Tensor*> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig config_;
  std::int64_t t_ = 0;
};

// "VRNET1" checkpoint: 6-byte magic, u32 tensor count, (u32 rows, u32 cols)
// per tensor, then every tensor's values as little-endian float32 in order.
void write_checkpoint(const std::filesystem::path& path,
                      const std::vector<const Tensor*>& tensors);
std::vector<Tensor> read_checkpoint(const std::filesystem::path& path);

}  // namespace retouch
