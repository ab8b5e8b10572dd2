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

#include "retouch/renderer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "retouch/errors.h"
#include "retouch/ops.h"
#include "retouch/parallel.h"

namespace retouch {
namespace {

constexpr Category kCategories[3] = {Category::kLight, Category::kGlobalColor,
                                     Category::kSpecificColor};
constexpr char kLatentMagic[] = "VRLAT1";
constexpr std::size_t kLatentMagicLen = 6;
constexpr std::size_t kLatentFileSize = kLatentMagicLen + 1 + 4 * kLatentWidth;
constexpr std::size_t kRenderChunk = 4096;

Tensor xavier(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& gen) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(fan_in, fan_out);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0) * limit;
  }
  return t;
}

// Normalized parameters of one category as a row, zero when the category is
// masked out.
void category_row(const ParamVector& params, const CategoryMask& mask, Category c,
                  double* out) {
  const CategorySpan span = category_span(c);
  for (std::size_t i = 0; i < span.count; ++i) {
    const std::size_t op = span.first + i;
    out[i] = mask.active(c) ? params[op] / kOperators[op].range_max : 0.0;
  }
}

Tensor latent_row(const ControlLatent& latent) {
  const auto z = compose_latent(latent);
  Tensor t(1, kLatentWidth);
  for (std::size_t i = 0; i < kLatentWidth; ++i) t[i] = z[i];
  return t;
}

Tensor pixels_of(const Image& img) {
  Tensor t(img.pixel_count(), 3);
  const auto& data = img.data();
  for (std::size_t i = 0; i < data.size(); ++i) t[i] = data[i];
  return t;
}

MlpVars constant_vars(Tape& tape, const Mlp& net) {
  MlpVars vars;
  for (std::size_t k = 0; k < net.w.size(); ++k) {
    vars.w.push_back(tape.constant_ref(net.w[k]));
    vars.b.push_back(tape.constant_ref(net.b[k]));
    vars.u.push_back(tape.constant_ref(net.u[k]));
  }
  vars.w_out = tape.constant_ref(net.w_out);
  vars.b_out = tape.constant_ref(net.b_out);
  return vars;
}

void check_latent_spec(const Mlp& net) {
  if (net.spec.latent() != kLatentWidth || net.spec.input != 3 || net.spec.output != 3) {
    throw Error(ErrorCode::kShapeMismatch, "network latent width must be 96 with RGB in/out");
  }
}

}  // namespace

const LatentBlock& ControlLatent::block(Category c) const {
  switch (c) {
    case Category::kLight: return z_l;
    case Category::kGlobalColor: return z_gc;
    default: return z_sc;
  }
}

LatentBlock& ControlLatent::block(Category c) {
  return const_cast<LatentBlock&>(std::as_const(*this).block(c));
}

ControlLatent ControlLatent::canonical() const {
  ControlLatent out = *this;
  for (Category c : kCategories) {
    if (!mask.active(c)) out.block(c).fill(0.0f);
  }
  return out;
}

std::array<float, kLatentWidth> compose_latent(const LatentBlock& z_l, const LatentBlock& z_gc,
                                               const LatentBlock& z_sc,
                                               const CategoryMask& mask) {
  std::array<float, kLatentWidth> z{};
  const LatentBlock* blocks[3] = {&z_l, &z_gc, &z_sc};
  for (std::size_t c = 0; c < 3; ++c) {
    if (!mask.active(kCategories[c])) continue;
    std::copy(blocks[c]->begin(), blocks[c]->end(), z.begin() + c * kBlockWidth);
  }
  return z;
}

std::array<float, kLatentWidth> compose_latent(const ControlLatent& latent) {
  return compose_latent(latent.z_l, latent.z_gc, latent.z_sc, latent.mask);
}

ParamAdapter ParamAdapter::initialize(std::size_t hidden, std::size_t block,
                                      std::uint64_t seed) {
  ParamAdapter adapter;
  std::mt19937_64 gen(seed);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::size_t n = category_span(kCategories[c]).count;
    adapter.a[c] = xavier(n, hidden, gen);
    adapter.b[c] = xavier(hidden, block, gen);
  }
  return adapter;
}

ParamAdapter ParamAdapter::zeros_like(const ParamAdapter& other) {
  ParamAdapter z;
  for (std::size_t c = 0; c < 3; ++c) {
    z.a[c] = Tensor(other.a[c].rows(), other.a[c].cols());
    z.b[c] = Tensor(other.b[c].rows(), other.b[c].cols());
  }
  return z;
}

std::vector<Tensor*> ParamAdapter::tensors() {
  std::vector<Tensor*> out;
  for (std::size_t c = 0; c < 3; ++c) {
    out.push_back(&a[c]);
    out.push_back(&b[c]);
  }
  return out;
}

std::vector<const Tensor*> ParamAdapter::tensors() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<ParamAdapter*>(this)->tensors()) out.push_back(t);
  return out;
}

ControlLatent ParamAdapter::latent(const ParamVector& params, const CategoryMask& mask) const {
  ControlLatent out;
  out.mask = mask;
  for (std::size_t c = 0; c < 3; ++c) {
    const Category cat = kCategories[c];
    if (!mask.active(cat)) continue;
    if (b[c].cols() != kBlockWidth) {
      throw Error(ErrorCode::kShapeMismatch, "adapter block width must be 32");
    }
    Tensor x(1, a[c].rows());
    category_row(params, mask, cat, x.data());
    Tensor h, z;
    kernels::matmul(x, a[c], h);
    for (double& v : h.values()) v = kernels::softsign(v);
    kernels::matmul(h, b[c], z);
    LatentBlock& blk = out.block(cat);
    for (std::size_t j = 0; j < kBlockWidth; ++j) blk[j] = static_cast<float>(z[j]);
  }
  return out;
}

Tensor adapter_inputs(const std::vector<ParamVector>& params, const CategoryMask& mask,
                      Category c) {
  const std::size_t cols = category_span(c).count;
  Tensor out(params.size(), cols);
  for (std::size_t r = 0; r < params.size(); ++r) {
    category_row(params[r], mask, c, out.data() + r * cols);
  }
  return out;
}

Var adapter_forward(Tape& tape, const AdapterVars& vars, const std::array<Tensor, 3>& inputs,
                    const CategoryMask& mask) {
  std::array<Var, 3> blocks;
  for (std::size_t c = 0; c < 3; ++c) {
    const Var h = tape.softsign(tape.matmul(tape.constant_ref(inputs[c]), vars.a[c]));
    const double m = mask.active(kCategories[c]) ? 1.0 : 0.0;
    blocks[c] = tape.scale_rows(tape.matmul(h, vars.b[c]),
                                std::vector<double>(inputs[c].rows(), m));
  }
  return tape.concat_cols(blocks);
}

RetouchNet RetouchNet::initialize(std::uint64_t seed, const MlpSpec& spec) {
  RetouchNet net;
  net.mlp = Mlp::initialize(spec, seed);
  net.adapter = ParamAdapter::initialize(32, spec.block_width, seed ^ 0xADA97E5ull);
  return net;
}

std::vector<Tensor*> RetouchNet::tensors() {
  std::vector<Tensor*> out = mlp.tensors();
  for (Tensor* t : adapter.tensors()) out.push_back(t);
  return out;
}

std::vector<const Tensor*> RetouchNet::tensors() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<RetouchNet*>(this)->tensors()) out.push_back(t);
  return out;
}

void save_net(const RetouchNet& net, const std::filesystem::path& path) {
  write_checkpoint(path, net.tensors());
}

RetouchNet load_net(const std::filesystem::path& path) {
  std::vector<Tensor> tensors = read_checkpoint(path);
  if (tensors.size() < ParamAdapter::kTensorCount + 5) {
    throw Error(ErrorCode::kShapeMismatch, "checkpoint holds too few tensors");
  }
  RetouchNet net;
  const std::size_t split = tensors.size() - ParamAdapter::kTensorCount;
  for (std::size_t c = 0; c < 3; ++c) {
    Tensor& a = tensors[split + 2 * c];
    Tensor& b = tensors[split + 2 * c + 1];
    if (a.rows() != category_span(kCategories[c]).count || a.cols() != b.rows()) {
      throw Error(ErrorCode::kShapeMismatch, "adapter tensors have unexpected shapes");
    }
    net.adapter.a[c] = std::move(a);
    net.adapter.b[c] = std::move(b);
  }
  tensors.resize(split);
  net.mlp = Mlp::from_tensors(std::move(tensors));
  for (std::size_t c = 0; c < 3; ++c) {
    if (net.adapter.b[c].cols() != net.mlp.spec.block_width) {
      throw Error(ErrorCode::kShapeMismatch, "adapter block width differs from the network");
    }
  }
  return net;
}

Image render(const Mlp& net, const Image& img, const ControlLatent& latent, int threads) {
  check_latent_spec(net);
  const Tensor z = latent_row(latent);
  Image out(img.width(), img.height());
  const std::size_t n = img.pixel_count();
  const std::size_t chunks = (n + kRenderChunk - 1) / kRenderChunk;
  const float* src = img.data().data();
  float* dst = out.mutable_data().data();
  parallel_for(chunks, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t chunk = begin; chunk < end; ++chunk) {
      const std::size_t first = chunk * kRenderChunk;
      const std::size_t rows = std::min(kRenderChunk, n - first);
      Tensor x(rows, 3);
      for (std::size_t i = 0; i < 3 * rows; ++i) x[i] = src[3 * first + i];
      const Tensor y = mlp_infer(net, x, z);
      for (std::size_t i = 0; i < 3 * rows; ++i) {
        dst[3 * first + i] = static_cast<float>(std::clamp(y[i], 0.0, 1.0));
      }
    }
  });
  return out;
}

DistillResult distill(const DistillConfig& config, const std::vector<Image>& corpus,
                      const DistillProgress& progress) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "distillation corpus is empty");
  if (config.batch == 0 || config.crop < 8 || config.log_every == 0 ||
      !(config.lr > 0.0) || !(config.lr_final >= 0.0) || !std::isfinite(config.lr) ||
      !std::isfinite(config.lr_final)) {
    throw Error(ErrorCode::kInvalidArgument,
                "distill needs batch > 0, crop >= 8, log_every > 0 and finite positive rates");
  }
  for (const Image& img : corpus) {
    if (img.width() < static_cast<int>(config.crop) ||
        img.height() < static_cast<int>(config.crop)) {
      throw Error(ErrorCode::kInvalidArgument, "corpus image smaller than the crop size");
    }
  }
  const std::vector<CategoryMask> curriculum =
      config.curriculum.empty()
          ? std::vector<CategoryMask>(all_masks().begin(), all_masks().end())
          : config.curriculum;
  for (const CategoryMask& m : curriculum) {
    if (!m.any()) throw Error(ErrorCode::kInvalidArgument, "empty mask in curriculum");
  }

  DistillResult result;
  result.net = RetouchNet::initialize(config.seed, config.spec);
  check_latent_spec(result.net.mlp);
  RetouchNet& net = result.net;
  Mlp mlp_grads = Mlp::zeros(net.mlp.spec);
  ParamAdapter adapter_grads = ParamAdapter::zeros_like(net.adapter);
  std::vector<Tensor*> grad_list = mlp_grads.tensors();
  for (Tensor* t : adapter_grads.tensors()) grad_list.push_back(t);
  const std::vector<const Tensor*> grads(grad_list.begin(), grad_list.end());
  Adam adam(net.tensors());

  SplitMix64 rng(SplitMix64::substream_seed(config.seed, 0xD157));
  const std::size_t crop = config.crop;
  const std::size_t rows_per_crop = crop * crop;
  const std::size_t batch = config.batch;
  Tensor x(batch * rows_per_crop, 3), target(batch * rows_per_crop, 3);
  std::array<Tensor, 3> cat_inputs;
  for (std::size_t c = 0; c < 3; ++c) {
    cat_inputs[c] = Tensor(batch, category_span(kCategories[c]).count);
  }

  double window_loss = 0.0;
  std::size_t window_count = 0;
  // One tape for the whole run: each step rebuilds the same graph, so after
  // the first step its buffers come from the tape's pool.
  Tape tape;
  for (std::size_t step = 0; step < config.steps; ++step) {
    const CategoryMask mask = curriculum[rng.below(curriculum.size())];
    for (std::size_t b = 0; b < batch; ++b) {
      const Image& src = corpus[rng.below(corpus.size())];
      const int x0 = static_cast<int>(rng.below(src.width() - crop + 1));
      const int y0 = static_cast<int>(rng.below(src.height() - crop + 1));
      const ParamVector params = sample_params(mask, config.mode, config.scale, rng);
      const Image in = src.crop(x0, y0, static_cast<int>(crop), static_cast<int>(crop));
      const Image gt = apply_category(params, mask, in);
      for (std::size_t i = 0; i < 3 * rows_per_crop; ++i) {
        x[3 * b * rows_per_crop + i] = in.data()[i];
        target[3 * b * rows_per_crop + i] = gt.data()[i];
      }
      for (std::size_t c = 0; c < 3; ++c) {
        category_row(params, mask, kCategories[c], cat_inputs[c].data() + b * cat_inputs[c].cols());
      }
    }

    for (Tensor* g : grad_list) g->fill(0.0);
    tape.reset();
    const MlpVars vars = bind_parameters(tape, net.mlp, mlp_grads);
    AdapterVars adapter_vars;
    for (std::size_t c = 0; c < 3; ++c) {
      adapter_vars.a[c] = tape.parameter(net.adapter.a[c], adapter_grads.a[c]);
      adapter_vars.b[c] = tape.parameter(net.adapter.b[c], adapter_grads.b[c]);
    }
    const Var z = adapter_forward(tape, adapter_vars, cat_inputs, mask);
    const Var y = tape.clamp01(mlp_forward(tape, vars, tape.constant(x), z, rows_per_crop));
    const Var loss = tape.l1_loss(y, target);
    const double loss_value = tape.value(loss)[0];
    if (!std::isfinite(loss_value)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "non-finite distillation loss at step " + std::to_string(step));
    }
    tape.backward(loss);
    const double t = config.steps > 1 ? static_cast<double>(step) / (config.steps - 1) : 0.0;
    const double lr =
        config.lr_final + 0.5 * (config.lr - config.lr_final) * (1.0 + std::cos(std::numbers::pi * t));
    adam.step(grads, lr);

    window_loss += loss_value;
    ++window_count;
    if ((step + 1) % config.log_every == 0 || step + 1 == config.steps) {
      const DistillLogEntry entry{step + 1, window_loss / window_count};
      result.log.push_back(entry);
      if (progress) progress(entry);
      window_loss = 0.0;
      window_count = 0;
    }
  }
  snap_to_float(net.tensors());
  return result;
}

InversionResult invert_latents(const Mlp& net, const Image& ref_in, const Image& ref_tar,
                               const CategoryMask& mask, const InvertConfig& config) {
  check_latent_spec(net);
  if (ref_in.width() != ref_tar.width() || ref_in.height() != ref_tar.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "reference input and target differ in size");
  }
  if (ref_in.empty()) throw Error(ErrorCode::kEmptyImage, "reference pair is empty");
  if (config.crop == 0 || !(config.lr > 0.0) || !std::isfinite(config.lr)) {
    throw Error(ErrorCode::kInvalidArgument, "inversion needs crop > 0 and a finite lr > 0");
  }
  const int cw = std::min(ref_in.width(), static_cast<int>(config.crop));
  const int ch = std::min(ref_in.height(), static_cast<int>(config.crop));
  const int x0 = (ref_in.width() - cw) / 2, y0 = (ref_in.height() - ch) / 2;
  const Tensor x = pixels_of(ref_in.crop(x0, y0, cw, ch));
  const Tensor target = pixels_of(ref_tar.crop(x0, y0, cw, ch));

  std::array<Tensor, 3> blocks, block_grads;
  std::vector<Tensor*> active;
  std::vector<const Tensor*> active_grads;
  for (std::size_t c = 0; c < 3; ++c) {
    blocks[c] = Tensor(1, kBlockWidth);
    block_grads[c] = Tensor(1, kBlockWidth);
    if (mask.active(kCategories[c])) {
      active.push_back(&blocks[c]);
      active_grads.push_back(&block_grads[c]);
    }
  }
  Adam adam(active);

  // Loss of the current blocks; with `backprop` the block gradients are
  // refreshed too. One tape is reused so its buffers are recycled.
  Tape tape;
  auto evaluate = [&](bool backprop) {
    for (Tensor& g : block_grads) g.fill(0.0);
    tape.reset();
    const MlpVars vars = constant_vars(tape, net);
    std::array<Var, 3> parts;
    for (std::size_t c = 0; c < 3; ++c) {
      parts[c] = mask.active(kCategories[c]) ? tape.parameter(blocks[c], block_grads[c])
                                             : tape.constant(Tensor(1, kBlockWidth));
    }
    const Var z = tape.concat_cols(parts);
    const Var y = tape.clamp01(mlp_forward(tape, vars, tape.constant_ref(x), z, x.rows()));
    const Var loss = tape.l1_loss(y, target);
    if (backprop) tape.backward(loss);
    return tape.value(loss)[0];
  };

  InversionResult result;
  std::array<Tensor, 3> best = blocks;
  double best_loss = INFINITY;
  for (std::size_t it = 0;; ++it) {
    const bool last = it == config.iterations;
    const double loss = evaluate(!last && !active.empty());
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "non-finite inversion loss at iteration " + std::to_string(it));
    }
    result.losses.push_back(loss);
    if (loss < best_loss) {
      best_loss = loss;
      best = blocks;
      result.best_iteration = it;
    }
    result.best_losses.push_back(best_loss);
    if (last || active.empty()) break;
    adam.step(active_grads, config.lr);
  }

  result.latent.mask = mask;
  for (std::size_t c = 0; c < 3; ++c) {
    LatentBlock& blk = result.latent.block(kCategories[c]);
    for (std::size_t j = 0; j < kBlockWidth; ++j) blk[j] = static_cast<float>(best[c][j]);
    blocks[c] = Tensor(1, kBlockWidth);
    for (std::size_t j = 0; j < kBlockWidth; ++j) blocks[c][j] = blk[j];
  }
  result.latent = result.latent.canonical();
  result.loss = evaluate(false);
  return result;
}

void save_latent(const ControlLatent& latent, const std::filesystem::path& path) {
  std::string bytes(kLatentMagic, kLatentMagicLen);
  bytes.push_back(static_cast<char>(latent.mask.bits()));
  for (float v : compose_latent(latent)) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((u >> (8 * i)) & 0xffu));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write latent " + path.string());
}

ControlLatent load_latent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(std::filesystem::exists(path) ? ErrorCode::kIo : ErrorCode::kFileNotFound,
                "cannot open latent " + path.string());
  }
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kLatentMagicLen ||
      std::memcmp(bytes.data(), kLatentMagic, kLatentMagicLen - 1) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a latent file");
  }
  if (bytes[kLatentMagicLen - 1] != static_cast<unsigned char>(kLatentMagic[kLatentMagicLen - 1])) {
    throw Error(ErrorCode::kVersionMismatch, path.string() + " has an unsupported latent version");
  }
  if (bytes.size() != kLatentFileSize || bytes[kLatentMagicLen] > 7) {
    throw Error(ErrorCode::kCorruptData, path.string() + " is truncated or malformed");
  }
  ControlLatent latent;
  latent.mask = CategoryMask::from_bits(bytes[kLatentMagicLen]);
  const unsigned char* p = bytes.data() + kLatentMagicLen + 1;
  for (std::size_t i = 0; i < kLatentWidth; ++i, p += 4) {
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                            (static_cast<std::uint32_t>(p[2]) << 16) |
                            (static_cast<std::uint32_t>(p[3]) << 24);
    const float v = std::bit_cast<float>(u);
    if (!std::isfinite(v)) throw Error(ErrorCode::kCorruptData, path.string() + " holds a non-finite value");
    latent.block(kCategories[i / kBlockWidth])[i % kBlockWidth] = v;
  }
  if (!(latent.canonical() == latent)) {
    throw Error(ErrorCode::kCorruptData, path.string() + " has values in a masked block");
  }
  return latent;
}

}  // namespace retouch
