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

#include <cmath>

#include "retouch/image.h"
#include "retouch/scalar.h"

namespace retouch {

// Rec.709 luma on display-referred values.
template <typename T>
T luma(const T& r, const T& g, const T& b) {
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

inline double luma(const PixelRGB& p) { return luma(p.r, p.g, p.b); }

template <typename T>
struct HsvT {
  T hue;  // degrees, [0, 360)
  T sat;
  T val;
};

using Hsv = HsvT<double>;

// Hexcone conversion. Achromatic pixels get hue 0.
template <typename T>
HsvT<T> rgb_to_hsv(const T& r, const T& g, const T& b) {
  const double gg = value_of(g), bb = value_of(b);
  T mx = r, mn = r;
  int argmax = 0;
  if (gg > value_of(mx)) { mx = g; argmax = 1; }
  if (bb > value_of(mx)) { mx = b; argmax = 2; }
  if (gg < value_of(mn)) mn = g;
  if (bb < value_of(mn)) mn = b;
  const T chroma = mx - mn;
  HsvT<T> out{T(0.0), T(0.0), mx};
  if (value_of(mx) > 0.0) out.sat = chroma / mx;
  if (value_of(chroma) <= 0.0) return out;
  T h;
  switch (argmax) {
    case 0:
      h = 60.0 * ((g - b) / chroma);
      break;
    case 1:
      h = 60.0 * ((b - r) / chroma + 2.0);
      break;
    default:
      h = 60.0 * ((r - g) / chroma + 4.0);
      break;
  }
  if (value_of(h) < 0.0) h = h + 360.0;
  if (value_of(h) >= 360.0) h = h - 360.0;
  out.hue = h;
  return out;
}

template <typename T>
void hsv_to_rgb(const HsvT<T>& hsv, T& r, T& g, T& b) {
  // Wrap into [0, 360) first; the shift carries no derivative.
  T h = hsv.hue - 360.0 * std::floor(value_of(hsv.hue) / 360.0);
  const T chroma = hsv.val * hsv.sat;
  const T hp = h / 60.0;
  int sector = static_cast<int>(std::floor(value_of(hp)));
  if (sector > 5) sector = 5;
  if (sector < 0) sector = 0;
  // Fractional position inside the sector pair, x = c * (1 - |hp mod 2 - 1|).
  const T frac = hp - 2.0 * std::floor(value_of(hp) / 2.0) - 1.0;
  const T x = chroma * (1.0 - (value_of(frac) < 0.0 ? -frac : frac));
  const T m = hsv.val - chroma;
  const T zero(0.0);
  switch (sector) {
    case 0: r = chroma; g = x; b = zero; break;
    case 1: r = x; g = chroma; b = zero; break;
    case 2: r = zero; g = chroma; b = x; break;
    case 3: r = zero; g = x; b = chroma; break;
    case 4: r = x; g = zero; b = chroma; break;
    default: r = chroma; g = zero; b = x; break;
  }
  r = r + m;
  g = g + m;
  b = b + m;
}

inline Hsv rgb_to_hsv(const PixelRGB& p) { return rgb_to_hsv(p.r, p.g, p.b); }

inline PixelRGB hsv_to_rgb(const Hsv& hsv) {
  PixelRGB p;
  hsv_to_rgb(hsv, p.r, p.g, p.b);
  return p;
}

}  // namespace retouch
