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

// Per-pixel transfer functions of the 38 operators, written once over the
// scalar type so the same code yields values (double) and exact Jacobians
// (Dual<N>).

#include <array>
#include <cmath>
#include <numbers>

#include "retouch/color.h"
#include "retouch/params.h"
#include "retouch/scalar.h"

namespace retouch::ops {

inline constexpr double kKneeWidth = 0.05;
inline constexpr double kToneScale = 0.5;
inline constexpr double kParametricScale = 0.35;
inline constexpr double kTemperatureGain = 0.3;
inline constexpr double kTintGreenGain = 0.3;
inline constexpr double kTintMagentaGain = 0.15;
inline constexpr double kHueShiftDegrees = 30.0;
inline constexpr double kBandScale = 0.5;
inline constexpr double kBandHalfWidth = 40.0;
inline constexpr std::array<double, 8> kBandCenters = {0.0,   30.0,  60.0,  120.0,
                                                       180.0, 240.0, 280.0, 315.0};
inline constexpr std::array<double, 4> kRegionCenters = {0.125, 0.375, 0.625,
                                                         0.875};
inline constexpr double kRegionHalfSupport = 0.25;

template <typename T>
struct Rgb {
  T r, g, b;
};

inline bool is_inactive(double x) { return x == 0.0; }

template <std::size_t N>
bool is_inactive(const Dual<N>& x) {
  if (x.v != 0.0) return false;
  for (double d : x.d) {
    if (d != 0.0) return false;
  }
  return true;
}

// Identity on [0, 1]; quadratic knee of width kKneeWidth outside, flat
// beyond the knee. C1 everywhere.
template <typename T>
T soft_clamp(const T& x) {
  const double v = value_of(x);
  if (v >= 0.0 && v <= 1.0) return x;
  if (v > 1.0) {
    if (v >= 1.0 + kKneeWidth) return T(1.0 + 0.5 * kKneeWidth);
    const T e = x - 1.0;
    return x - e * e / (2.0 * kKneeWidth);
  }
  if (v <= -kKneeWidth) return T(-0.5 * kKneeWidth);
  return x + x * x / (2.0 * kKneeWidth);
}

template <typename T>
T hard_clamp(const T& x) {
  const double v = value_of(x);
  if (v < 0.0) return T(0.0);
  if (v > 1.0) return T(1.0);
  return x;
}

template <typename T>
void soft_clamp(Rgb<T>& p) {
  p.r = soft_clamp(p.r);
  p.g = soft_clamp(p.g);
  p.b = soft_clamp(p.b);
}

template <typename T>
T smoothstep(const T& x, double edge0, double edge1) {
  const T t = (x - edge0) / (edge1 - edge0);
  const double tv = value_of(t);
  if (tv <= 0.0) return T(0.0);
  if (tv >= 1.0) return T(1.0);
  return t * t * (3.0 - 2.0 * t);
}

template <typename T>
T pixel_luma(const Rgb<T>& p) {
  return luma(p.r, p.g, p.b);
}

// Raised-cosine luma regions forming a partition of unity on the real line;
// the outer two stay flat beyond their centres.
template <typename T>
T region_weight(std::size_t k, const T& l) {
  const T d = l - kRegionCenters[k];
  const double dv = value_of(d);
  if (k == 0 && dv <= 0.0) return T(1.0);
  if (k == 3 && dv >= 0.0) return T(1.0);
  if (dv <= -kRegionHalfSupport || dv >= kRegionHalfSupport) return T(0.0);
  return 0.5 * (1.0 + cos(std::numbers::pi / kRegionHalfSupport * d));
}

// Raised-cosine weights of the eight hue bands, rescaled so they never sum
// above one.
template <typename T>
std::array<T, 8> band_weights(const T& hue) {
  std::array<T, 8> w;
  double sum = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    T delta = hue - kBandCenters[k];
    delta = delta - 360.0 * std::floor((value_of(delta) + 180.0) / 360.0);
    const double dv = value_of(delta);
    if (dv <= -kBandHalfWidth || dv >= kBandHalfWidth) {
      w[k] = T(0.0);
    } else {
      w[k] = 0.5 * (1.0 + cos(std::numbers::pi / kBandHalfWidth * delta));
    }
    sum += value_of(w[k]);
  }
  if (sum > 1.0) {
    T total = w[0];
    for (std::size_t k = 1; k < 8; ++k) total = total + w[k];
    for (auto& wk : w) wk = wk / total;
  }
  return w;
}

template <typename T>
void temperature(const T& amount, Rgb<T>& p) {
  const T k = amount * (kTemperatureGain / 100.0);
  p.r = p.r * (1.0 + k);
  p.b = p.b * (1.0 - k);
}

template <typename T>
void tint(const T& amount, Rgb<T>& p) {
  const T k = amount / 100.0;
  p.g = p.g * (1.0 - kTintGreenGain * k);
  const T rb = 1.0 + kTintMagentaGain * k;
  p.r = p.r * rb;
  p.b = p.b * rb;
}

template <typename T>
void exposure(const T& stops, Rgb<T>& p) {
  const T k = exp2(stops);
  p.r = p.r * k;
  p.g = p.g * k;
  p.b = p.b * k;
}

template <typename T>
void contrast(const T& amount, Rgb<T>& p) {
  const T k = 1.0 + amount / 100.0;
  p.r = 0.5 + (p.r - 0.5) * k;
  p.g = 0.5 + (p.g - 0.5) * k;
  p.b = 0.5 + (p.b - 0.5) * k;
}

enum class ToneRegion { kHighlights, kShadows, kWhites, kBlacks };

template <typename T>
void tone(ToneRegion region, const T& amount, Rgb<T>& p) {
  const T l = pixel_luma(p);
  T w;
  switch (region) {
    case ToneRegion::kHighlights: w = smoothstep(l, 0.5, 1.0); break;
    case ToneRegion::kShadows: w = smoothstep(1.0 - l, 0.5, 1.0); break;
    case ToneRegion::kWhites: w = smoothstep(l, 0.75, 1.0); break;
    default: w = smoothstep(1.0 - l, 0.75, 1.0); break;
  }
  const T offset = amount / 100.0 * kToneScale * w;
  p.r = p.r + offset;
  p.g = p.g + offset;
  p.b = p.b + offset;
}

template <typename T>
void parametric(std::size_t region, const T& amount, Rgb<T>& p) {
  const T offset =
      amount / 100.0 * kParametricScale * region_weight(region, pixel_luma(p));
  p.r = p.r + offset;
  p.g = p.g + offset;
  p.b = p.b + offset;
}

enum class BandChannel { kHue, kSaturation, kLuminance };

template <typename T>
void hsl_bands(BandChannel channel, const T* amounts, Rgb<T>& p) {
  // Achromatic pixels have no hue and are left untouched by every band
  // channel. Returning early keeps the value identical to the HSV round trip
  // and gives the identity as the pixel derivative, where the round trip
  // would route every channel's derivative through the arg-max channel.
  const double vr = value_of(p.r), vg = value_of(p.g), vb = value_of(p.b);
  if (vr == vg && vg == vb) return;
  HsvT<T> hsv = rgb_to_hsv(p.r, p.g, p.b);
  const std::array<T, 8> w = band_weights(hsv.hue);
  T acc(0.0);
  for (std::size_t k = 0; k < 8; ++k) acc = acc + amounts[k] / 100.0 * w[k];
  switch (channel) {
    case BandChannel::kHue:
      hsv.hue = hsv.hue + kHueShiftDegrees * acc;
      break;
    case BandChannel::kSaturation:
      hsv.sat = hsv.sat * (1.0 + kBandScale * acc);
      break;
    case BandChannel::kLuminance:
      // Gated by saturation so the gray axis (hue undefined) is untouched.
      hsv.val = hsv.val * (1.0 + kBandScale * acc * hsv.sat);
      break;
  }
  hsv_to_rgb(hsv, p.r, p.g, p.b);
}

template <typename T>
void saturation_like(const T& gain, Rgb<T>& p) {
  const T l = pixel_luma(p);
  p.r = l + (p.r - l) * gain;
  p.g = l + (p.g - l) * gain;
  p.b = l + (p.b - l) * gain;
}

template <typename T>
void vibrance(const T& amount, Rgb<T>& p) {
  const HsvT<T> hsv = rgb_to_hsv(p.r, p.g, p.b);
  saturation_like(1.0 + amount / 100.0 * (1.0 - hsv.sat), p);
}

template <typename T>
void saturation(const T& amount, Rgb<T>& p) {
  saturation_like(1.0 + amount / 100.0, p);
}

// Full chain in canonical order: temperature, tint, exposure, contrast,
// highlights, shadows, whites, blacks, parametric regions, HSL hue / sat /
// luminance, vibrance, saturation. Every stage is followed by the soft
// clamp whether or not its operator is active: the clamp is not idempotent
// outside [0, 1], so tying it to activity would make the output jump when a
// parameter leaves zero. Inactive operators themselves are skipped, which
// keeps the zero vector a bit-exact identity on [0, 1] inputs. Output is
// soft-clamped only; the caller applies the final hard clamp.
template <typename T>
Rgb<T> apply_chain(const std::array<T, kNumParams>& raw, Rgb<T> p) {
  auto at = [&](ParamId id) -> const T& { return raw[index_of(id)]; };
  auto step = [&](ParamId id, auto&& op) {
    if (!is_inactive(at(id))) op(at(id));
    soft_clamp(p);
  };
  step(ParamId::kIncrementalTemperature, [&](const T& a) { temperature(a, p); });
  step(ParamId::kIncrementalTint, [&](const T& a) { tint(a, p); });
  step(ParamId::kExposure2012, [&](const T& a) { exposure(a, p); });
  step(ParamId::kContrast2012, [&](const T& a) { contrast(a, p); });
  step(ParamId::kHighlights2012,
       [&](const T& a) { tone(ToneRegion::kHighlights, a, p); });
  step(ParamId::kShadows2012,
       [&](const T& a) { tone(ToneRegion::kShadows, a, p); });
  step(ParamId::kWhites2012, [&](const T& a) { tone(ToneRegion::kWhites, a, p); });
  step(ParamId::kBlacks2012, [&](const T& a) { tone(ToneRegion::kBlacks, a, p); });
  step(ParamId::kParametricShadows, [&](const T& a) { parametric(0, a, p); });
  step(ParamId::kParametricDarks, [&](const T& a) { parametric(1, a, p); });
  step(ParamId::kParametricLights, [&](const T& a) { parametric(2, a, p); });
  step(ParamId::kParametricHighlights, [&](const T& a) { parametric(3, a, p); });

  const std::array<std::pair<ParamId, BandChannel>, 3> groups = {{
      {ParamId::kHueRed, BandChannel::kHue},
      {ParamId::kSatRed, BandChannel::kSaturation},
      {ParamId::kLumRed, BandChannel::kLuminance},
  }};
  for (const auto& [first, channel] : groups) {
    const T* amounts = &raw[index_of(first)];
    bool any = false;
    for (std::size_t k = 0; k < 8; ++k) any = any || !is_inactive(amounts[k]);
    if (any) hsl_bands(channel, amounts, p);
    soft_clamp(p);
  }

  step(ParamId::kVibrance, [&](const T& a) { vibrance(a, p); });
  step(ParamId::kSaturation, [&](const T& a) { saturation(a, p); });
  return p;
}

}  // namespace retouch::ops
