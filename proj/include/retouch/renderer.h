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

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "retouch/image.h"
#include "retouch/mlp.h"
#include "retouch/params.h"
#include "retouch/synth.h"
#include "retouch/tape.h"

namespace retouch {

inline constexpr std::size_t kBlockWidth = 32;
inline constexpr std::size_t kLatentWidth = 3 * kBlockWidth;

using LatentBlock = std::array<float, kBlockWidth>;

// Disentangled control latent: one block per category plus the mask that
// says which blocks take part in the composite.
struct ControlLatent {
  LatentBlock z_l{};
  LatentBlock z_gc{};
  LatentBlock z_sc{};
  CategoryMask mask = CategoryMask::all();

  const LatentBlock& block(Category c) const;
  LatentBlock& block(Category c);
  // Copy with masked-out blocks set to zero (the form stored on disk).
  ControlLatent canonical() const;
  bool operator==(const ControlLatent&) const = default;
};

// concat(m_l·z_l, m_gc·z_gc, m_sc·z_sc); masked blocks are exactly zero.
std::array<float, kLatentWidth> compose_latent(const LatentBlock& z_l, const LatentBlock& z_gc,
                                               const LatentBlock& z_sc, const CategoryMask& mask);
std::array<float, kLatentWidth> compose_latent(const ControlLatent& latent);

// Parameter-to-latent adapter with block-diagonal wiring: block c is
//   z_c = s(x_c A_c) B_c
// where x_c holds only category c's normalized parameters. There are no
// bias terms, so a category whose parameters are all zero yields an exactly
// zero block.
struct ParamAdapter {
  std::array<Tensor, 3> a;  // n_c × hidden
  std::array<Tensor, 3> b;  // hidden × block

  static ParamAdapter initialize(std::size_t hidden, std::size_t block, std::uint64_t seed);
  static ParamAdapter zeros_like(const ParamAdapter& other);
  // Declared order: (A_l, B_l, A_gc, B_gc, A_sc, B_sc).
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  static constexpr std::size_t kTensorCount = 6;

  // Latent for `params` restricted to `mask` (masked categories are zeroed
  // before the adapter sees them, and their blocks are zero).
  ControlLatent latent(const ParamVector& params, const CategoryMask& mask) const;
};

// Adapter weights bound to a tape.
struct AdapterVars {
  std::array<Var, 3> a;
  std::array<Var, 3> b;
};

// Normalized parameters of category c for each row of `params` (rows ×
// n_c), zero when the category is masked out.
Tensor adapter_inputs(const std::vector<ParamVector>& params, const CategoryMask& mask,
                      Category c);

// Batched adapter on a tape: rows × 96 composite latents for the per-category
// inputs built by adapter_inputs. Masked blocks are multiplied by zero, so
// they carry neither value nor gradient. `inputs` must outlive the tape.
Var adapter_forward(Tape& tape, const AdapterVars& vars, const std::array<Tensor, 3>& inputs,
                    const CategoryMask& mask);

// The renderer bundle: per-pixel network plus parameter adapter.
struct RetouchNet {
  Mlp mlp;
  ParamAdapter adapter;

  static RetouchNet initialize(std::uint64_t seed, const MlpSpec& spec = {});
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
};

// Checkpoint = network tensors then adapter tensors, VRNET1 layout.
void save_net(const RetouchNet& net, const std::filesystem::path& path);
RetouchNet load_net(const std::filesystem::path& path);

// Per-pixel network evaluation followed by a hard clamp to [0, 1]. Pixels are
// processed in independent chunks, so the result does not depend on
// `threads`.
Image render(const Mlp& net, const Image& img, const ControlLatent& latent, int threads = 1);

struct DistillConfig {
  std::size_t steps = 20000;
  std::size_t batch = 32;     // crops per step
  std::size_t crop = 16;      // square crop side in pixels
  double lr = 3e-3;           // peak Adam learning rate
  double lr_final = 1e-4;     // cosine-decayed to this by the last step
  std::uint64_t seed = 0;
  SampleMode mode = SampleMode::kParam;
  double scale = 0.25;
  std::vector<CategoryMask> curriculum;  // masks drawn uniformly; empty = all 7
  std::size_t log_every = 500;
  MlpSpec spec;
  std::size_t adapter_hidden = 32;
};

struct DistillLogEntry {
  std::size_t step = 0;
  double loss = 0.0;  // mean L1 over the preceding logging window
};

struct DistillResult {
  RetouchNet net;
  std::vector<DistillLogEntry> log;
};

using DistillProgress = std::function<void(const DistillLogEntry&)>;

// Trains the network and adapter jointly to reproduce apply_category on
// random crops of the corpus. Weights are rounded to float32 at the end so
// the returned net equals its checkpoint.
DistillResult distill(const DistillConfig& config, const std::vector<Image>& corpus,
                      const DistillProgress& progress = {});

struct InvertConfig {
  std::size_t iterations = 500;
  double lr = 0.05;
  std::size_t crop = 64;  // loss evaluated on the centred crop of this side
};

struct InversionResult {
  ControlLatent latent;          // best iterate, canonical, float32
  double loss = 0.0;             // L1 of the returned latent on the crop
  std::size_t best_iteration = 0;
  std::vector<double> losses;    // loss at every evaluated iterate
  std::vector<double> best_losses;  // running minimum of `losses`
};

// Fits a control latent so that render(net, ref_in, latent) matches ref_tar.
// Starts from zero; only blocks active in `mask` are optimized.
InversionResult invert_latents(const Mlp& net, const Image& ref_in, const Image& ref_tar,
                               const CategoryMask& mask, const InvertConfig& config = {});

// "VRLAT1", one mask byte (bit0 L, bit1 GC, bit2 SC), 96 float32 LE.
// The composite is stored, so masked blocks are written as zeros.
void save_latent(const ControlLatent& latent, const std::filesystem::path& path);
ControlLatent load_latent(const std::filesystem::path& path);

}  // namespace retouch
