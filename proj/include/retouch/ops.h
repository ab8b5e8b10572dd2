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

#include "retouch/image.h"
#include "retouch/params.h"

namespace retouch {

// Reference per-pixel map of the operator pipeline, hard-clamped to [0, 1].
PixelRGB apply_pixel(const ParamVector& params, const PixelRGB& p);

// Same map without the final hard clamp (the inter-operator soft clamp still
// applies, so values stay within [-0.025, 1.025]).
PixelRGB apply_pixel_unclamped(const ParamVector& params, const PixelRGB& p);

// Throws kOutOfRangeParam for out-of-range vectors.
Image apply_pipeline(const ParamVector& params, const Image& img,
                     int threads = 1);

// apply_pipeline on a copy of `params` with inactive categories zeroed.
Image apply_category(const ParamVector& params, const CategoryMask& mask,
                     const Image& img, int threads = 1);

struct PixelJacobian {
  // pixel[c][k] = d out_c / d in_k
  std::array<std::array<double, 3>, 3> pixel{};
  // param[c][i] = d out_c / d raw_i, in raw slider units.
  std::array<std::array<double, kNumParams>, 3> param{};
};

// Exact chain-rule derivatives of apply_pixel at (params, p).
PixelJacobian pipeline_jacobian(const ParamVector& params, const PixelRGB& p);

}  // namespace retouch
