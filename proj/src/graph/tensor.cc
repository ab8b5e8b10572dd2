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

#include "retouch/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "retouch/errors.h"

namespace retouch {

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw Error(ErrorCode::kShapeMismatch, "tensor value count does not match shape");
  }
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace kernels {

// All three kernels keep, for every output element, the plain sequential
// accumulation order of the textbook loop (start from zero or the existing
// value, add terms in increasing index order). The register blocking below
// only changes which elements are in flight together, so results are
// bit-identical to the naive loops and independent of batch size.
// The hot kernels are compiled twice and dispatched at load time. AVX2 only
// widens the vectors: without FMA contraction every lane performs the same
// IEEE multiply and add, so both clones produce identical bits.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define RETOUCH_KERNEL __attribute__((target_clones("avx2", "default")))
#else
#define RETOUCH_KERNEL
#endif

// The helpers below are always inlined, so their vector arguments never cross
// a call boundary.
#pragma GCC diagnostic ignored "-Wpsabi"

namespace {

// Eight doubles handled as two 4-wide vectors; every lane is an independent
// IEEE multiply/add, identical to the scalar operation.
typedef double Vec4 __attribute__((vector_size(32)));
constexpr std::size_t kLanes = 8;

struct Acc8 {
  Vec4 lo{}, hi{};
};

[[gnu::always_inline]] inline Vec4 load4(const double* p) {
  Vec4 v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

[[gnu::always_inline]] inline void store4(double* p, Vec4 v) { std::memcpy(p, &v, sizeof v); }

[[gnu::always_inline]] inline Acc8 load8(const double* p) { return {load4(p), load4(p + 4)}; }

[[gnu::always_inline]] inline void store8(double* p, const Acc8& a) {
  store4(p, a.lo);
  store4(p + 4, a.hi);
}

[[gnu::always_inline]] inline void madd8(Acc8& acc, double s, const double* row) {
  const Vec4 sv = {s, s, s, s};
  acc.lo += sv * load4(row);
  acc.hi += sv * load4(row + 4);
}

}  // namespace

RETOUCH_KERNEL void matmul(const Tensor& a, const Tensor& b, Tensor& c) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "matmul inner dimensions differ");
  }
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (c.rows() != n || c.cols() != m) c = Tensor(n, m);
  const double* bd = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.data() + i * m;
    const double* arow = a.data() + i * k;
    std::size_t j0 = 0;
    for (; j0 + kLanes <= m; j0 += kLanes) {
      Acc8 acc;
      for (std::size_t p = 0; p < k; ++p) madd8(acc, arow[p], bd + p * m + j0);
      store8(out + j0, acc);
    }
    for (std::size_t j = j0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * bd[p * m + j];
      out[j] = acc;
    }
  }
}

RETOUCH_KERNEL void matmul_grad_a(const Tensor& gc, const Tensor& b, Tensor& ga) {
  const std::size_t n = gc.rows(), m = gc.cols(), k = b.rows();
  // bt = bᵀ (m×k), so the reduction over j reads contiguous rows.
  std::vector<double> bt(m * k);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t j = 0; j < m; ++j) bt[j * k + p] = b.data()[p * m + j];
  }
  const double* btd = bt.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* g = gc.data() + i * m;
    double* out = ga.data() + i * k;
    std::size_t p0 = 0;
    for (; p0 + kLanes <= k; p0 += kLanes) {
      Acc8 acc;
      for (std::size_t j = 0; j < m; ++j) madd8(acc, g[j], btd + j * k + p0);
      Acc8 sum = load8(out + p0);
      sum.lo += acc.lo;
      sum.hi += acc.hi;
      store8(out + p0, sum);
    }
    for (std::size_t p = p0; p < k; ++p) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += g[j] * btd[j * k + p];
      out[p] += acc;
    }
  }
}

RETOUCH_KERNEL void matmul_grad_b(const Tensor& a, const Tensor& gc, Tensor& gb) {
  const std::size_t n = a.rows(), k = a.cols(), m = gc.cols();
  const double* ad = a.data();
  const double* gd = gc.data();
  // Rows are visited in tiles so the slice of gc being reduced stays in L1.
  constexpr std::size_t kTile = 64;
  for (std::size_t i0 = 0; i0 < n; i0 += kTile) {
    const std::size_t i1 = std::min(n, i0 + kTile);
    for (std::size_t p = 0; p < k; ++p) {
      double* out = gb.data() + p * m;
      std::size_t j0 = 0;
      for (; j0 + kLanes <= m; j0 += kLanes) {
        Acc8 acc = load8(out + j0);
        for (std::size_t i = i0; i < i1; ++i) madd8(acc, ad[i * k + p], gd + i * m + j0);
        store8(out + j0, acc);
      }
      for (std::size_t j = j0; j < m; ++j) {
        double acc = out[j];
        for (std::size_t i = i0; i < i1; ++i) acc += ad[i * k + p] * gd[i * m + j];
        out[j] = acc;
      }
    }
  }
}

}  // namespace kernels
}  // namespace retouch
