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

#include "retouch/ops.h"

#include "pixel_pipeline.h"
#include "retouch/parallel.h"

namespace retouch {

PixelRGB apply_pixel_unclamped(const ParamVector& params, const PixelRGB& p) {
  const ops::Rgb<double> out =
      ops::apply_chain<double>(params.raw(), {p.r, p.g, p.b});
  return {out.r, out.g, out.b};
}

PixelRGB apply_pixel(const ParamVector& params, const PixelRGB& p) {
  const PixelRGB out = apply_pixel_unclamped(params, p);
  return {ops::hard_clamp(out.r), ops::hard_clamp(out.g),
          ops::hard_clamp(out.b)};
}

Image apply_pipeline(const ParamVector& params, const Image& img,
                     int threads) {
  params.validate();
  Image out = img;
  if (params.is_zero()) return out;
  parallel_for(img.pixel_count(), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   out.set_pixel(i, apply_pixel(params, img.pixel(i)));
                 }
               });
  return out;
}

Image apply_category(const ParamVector& params, const CategoryMask& mask,
                     const Image& img, int threads) {
  params.validate();
  return apply_pipeline(params.masked(mask), img, threads);
}

PixelJacobian pipeline_jacobian(const ParamVector& params, const PixelRGB& p) {
  constexpr std::size_t kVars = 3 + kNumParams;
  using D = Dual<kVars>;
  std::array<D, kNumParams> raw;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    raw[i] = D::variable(params[i], 3 + i);
  }
  ops::Rgb<D> in{D::variable(p.r, 0), D::variable(p.g, 1),
                 D::variable(p.b, 2)};
  ops::Rgb<D> out = ops::apply_chain(raw, in);
  out.r = ops::hard_clamp(out.r);
  out.g = ops::hard_clamp(out.g);
  out.b = ops::hard_clamp(out.b);

  PixelJacobian jac;
  const D* channels[3] = {&out.r, &out.g, &out.b};
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 3; ++k) jac.pixel[c][k] = channels[c]->d[k];
    for (std::size_t i = 0; i < kNumParams; ++i) {
      jac.param[c][i] = channels[c]->d[3 + i];
    }
  }
  return jac;
}

}  // namespace retouch
