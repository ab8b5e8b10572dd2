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

#include "retouch/mlp.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "retouch/errors.h"

namespace retouch {
namespace {

constexpr char kMagic[] = "VRNET1";
constexpr std::size_t kMagicLen = 6;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Tensor xavier(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& gen) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(fan_in, fan_out);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = (2.0 * uniform01(gen) - 1.0) * limit;
  }
  return t;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Mlp Mlp::zeros(const MlpSpec& spec) {
  Mlp net;
  net.spec = spec;
  for (std::size_t k = 0; k < spec.hidden_layers; ++k) {
    net.w.emplace_back(k == 0 ? spec.input : spec.hidden_width, spec.hidden_width);
    net.b.emplace_back(1, spec.hidden_width);
    net.u.emplace_back(spec.latent(), spec.hidden_width);
  }
  net.w_out = Tensor(spec.hidden_width, spec.output);
  net.b_out = Tensor(1, spec.output);
  return net;
}

Mlp Mlp::initialize(const MlpSpec& spec, std::uint64_t seed) {
  if (spec.hidden_layers == 0 || spec.hidden_width == 0 || spec.block_width == 0 ||
      spec.input != spec.output) {
    throw Error(ErrorCode::kInvalidArgument, "invalid network spec");
  }
  Mlp net = zeros(spec);
  std::mt19937_64 gen(seed);
  for (std::size_t k = 0; k < spec.hidden_layers; ++k) {
    net.w[k] = xavier(net.w[k].rows(), net.w[k].cols(), gen);
    net.u[k] = xavier(spec.latent(), spec.hidden_width, gen);
  }
  return net;
}

std::vector<Tensor*> Mlp::tensors() {
  std::vector<Tensor*> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    out.push_back(&w[k]);
    out.push_back(&b[k]);
    out.push_back(&u[k]);
  }
  out.push_back(&w_out);
  out.push_back(&b_out);
  return out;
}

std::vector<const Tensor*> Mlp::tensors() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<Mlp*>(this)->tensors()) out.push_back(t);
  return out;
}

Mlp Mlp::from_tensors(std::vector<Tensor> tensors) {
  if (tensors.size() < 5 || (tensors.size() - 2) % 3 != 0) {
    throw Error(ErrorCode::kShapeMismatch, "network tensor count is not 3L+2");
  }
  MlpSpec spec;
  spec.hidden_layers = (tensors.size() - 2) / 3;
  spec.input = tensors[0].rows();
  spec.hidden_width = tensors[0].cols();
  spec.output = tensors.back().cols();
  if (tensors[2].rows() % 3 != 0) {
    throw Error(ErrorCode::kShapeMismatch, "latent width is not a multiple of 3");
  }
  spec.block_width = tensors[2].rows() / 3;
  Mlp net = zeros(spec);
  std::vector<Tensor*> slots = net.tensors();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]->same_shape(tensors[i])) {
      throw Error(ErrorCode::kShapeMismatch,
                  "network tensor " + std::to_string(i) + " has an unexpected shape");
    }
    *slots[i] = std::move(tensors[i]);
  }
  return net;
}

MlpVars bind_parameters(Tape& tape, const Mlp& net, Mlp& grads) {
  if (!(net.spec == grads.spec)) {
    throw Error(ErrorCode::kShapeMismatch, "gradient network spec differs");
  }
  MlpVars vars;
  for (std::size_t k = 0; k < net.w.size(); ++k) {
    vars.w.push_back(tape.parameter(net.w[k], grads.w[k]));
    vars.b.push_back(tape.parameter(net.b[k], grads.b[k]));
    vars.u.push_back(tape.parameter(net.u[k], grads.u[k]));
  }
  vars.w_out = tape.parameter(net.w_out, grads.w_out);
  vars.b_out = tape.parameter(net.b_out, grads.b_out);
  return vars;
}

Var mlp_forward(Tape& tape, const MlpVars& vars, Var x, Var z,
                std::size_t rows_per_group) {
  Var h = x;
  for (std::size_t k = 0; k < vars.w.size(); ++k) {
    const Var inject = tape.add_row(tape.matmul(z, vars.u[k]), vars.b[k]);
    h = tape.softsign(tape.add_grouped(tape.matmul(h, vars.w[k]), inject, rows_per_group));
  }
  const Var head = tape.add_row(tape.matmul(h, vars.w_out), vars.b_out);
  return tape.add(x, head);
}

Tensor mlp_infer(const Mlp& net, const Tensor& x, const Tensor& z) {
  if (x.cols() != net.spec.input || z.rows() != 1 || z.cols() != net.spec.latent()) {
    throw Error(ErrorCode::kShapeMismatch, "mlp_infer input shapes do not match the spec");
  }
  Tensor h = x, pre, inject;
  for (std::size_t k = 0; k < net.w.size(); ++k) {
    kernels::matmul(z, net.u[k], inject);
    for (std::size_t j = 0; j < inject.cols(); ++j) inject[j] = inject[j] + net.b[k][j];
    kernels::matmul(h, net.w[k], pre);
    for (std::size_t i = 0; i < pre.rows(); ++i) {
      double* row = pre.data() + i * pre.cols();
      for (std::size_t j = 0; j < pre.cols(); ++j) {
        row[j] = kernels::softsign(row[j] + inject[j]);
      }
    }
    std::swap(h, pre);
  }
  Tensor head;
  kernels::matmul(h, net.w_out, head);
  for (std::size_t i = 0; i < head.rows(); ++i) {
    for (std::size_t j = 0; j < head.cols(); ++j) {
      head(i, j) = x(i, j) + (head(i, j) + net.b_out[j]);
    }
  }
  return head;
}

void snap_to_float(std::vector<Tensor*> tensors) {
  for (Tensor* t : tensors) {
    for (double& v : t->values()) v = static_cast<double>(static_cast<float>(v));
  }
}

Adam::Adam(std::vector<Tensor*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  for (const Tensor* p : params_) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void Adam::step(const std::vector<const Tensor*>& grads, double lr) {
  if (grads.size() != params_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "Adam gradient list length differs");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    Tensor& w = *params_[p];
    const Tensor& g = *grads[p];
    if (!w.same_shape(g)) {
      throw Error(ErrorCode::kShapeMismatch, "Adam gradient shape differs");
    }
    Tensor& m = m_[p];
    Tensor& v = v_[p];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
}

void write_checkpoint(const std::filesystem::path& path,
                      const std::vector<const Tensor*>& tensors) {
  std::string bytes(kMagic, kMagicLen);
  put_u32(bytes, static_cast<std::uint32_t>(tensors.size()));
  for (const Tensor* t : tensors) {
    put_u32(bytes, static_cast<std::uint32_t>(t->rows()));
    put_u32(bytes, static_cast<std::uint32_t>(t->cols()));
  }
  for (const Tensor* t : tensors) {
    for (double v : t->values()) put_u32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint " + path.string());
}

std::vector<Tensor> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(std::filesystem::exists(path) ? ErrorCode::kIo : ErrorCode::kFileNotFound,
                "cannot open checkpoint " + path.string());
  }
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kMagicLen || std::memcmp(bytes.data(), kMagic, kMagicLen - 1) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a network checkpoint");
  }
  if (bytes[kMagicLen - 1] != static_cast<unsigned char>(kMagic[kMagicLen - 1])) {
    throw Error(ErrorCode::kVersionMismatch,
                path.string() + " has an unsupported checkpoint version");
  }
  const auto corrupt = [&] {
    return Error(ErrorCode::kCorruptData, path.string() + " is truncated or malformed");
  };
  std::size_t pos = kMagicLen;
  if (bytes.size() < pos + 4) throw corrupt();
  const std::uint32_t count = get_u32(&bytes[pos]);
  pos += 4;
  if (count > 4096 || bytes.size() < pos + 8ull * count) throw corrupt();
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  std::size_t total = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t r = get_u32(&bytes[pos]), c = get_u32(&bytes[pos + 4]);
    pos += 8;
    if (r > (1u << 20) || c > (1u << 20)) throw corrupt();
    shapes.emplace_back(r, c);
    total += r * c;
  }
  if (bytes.size() != pos + 4 * total) throw corrupt();
  std::vector<Tensor> out;
  for (const auto& [r, c] : shapes) {
    Tensor t(r, c);
    for (std::size_t i = 0; i < t.size(); ++i, pos += 4) {
      const float f = std::bit_cast<float>(get_u32(&bytes[pos]));
      if (!std::isfinite(f)) throw corrupt();
      t[i] = f;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace retouch
