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

#include <algorithm>
#include <cmath>
#include <limits>

#include "retouch/color.h"
#include "retouch/errors.h"
#include "retouch/metrics.h"

namespace retouch {
namespace {

constexpr int kWindow = 8;
// The 8-pixel window around x covers x − 3 … x + 4.
constexpr int kWindowBefore = 3;
constexpr int kWindowAfter = 4;

void require_nonempty(const Image& img, const char* what) {
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, std::string(what) + " is empty");
}

void require_same_size(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "images differ in size: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
  require_nonempty(a, "image");
}

}  // namespace

double Histogram::operator[](std::size_t bin) const {
  return static_cast<double>(counts[bin]) / static_cast<double>(total);
}

std::array<double, kHistogramBins> Histogram::normalized() const {
  std::array<double, kHistogramBins> out{};
  for (std::size_t i = 0; i < kHistogramBins; ++i) out[i] = (*this)[i];
  return out;
}

std::size_t histogram_bin(double value) {
  if (!(value > 0.0)) return 0;  // also catches NaN
  const double scaled = value * static_cast<double>(kHistogramBins);
  return std::min(kHistogramBins - 1, static_cast<std::size_t>(scaled));
}

Histogram histogram(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyImage, "histogram of no values");
  if (values.size() >= (std::uint64_t{1} << 32)) {
    throw Error(ErrorCode::kInvalidArgument, "histogram input too large");
  }
  Histogram h;
  for (double v : values) ++h.counts[histogram_bin(v)];
  h.total = values.size();
  return h;
}

double histogram_intersection(const Histogram& a, const Histogram& b) {
  if (a.total == 0 || b.total == 0) {
    throw Error(ErrorCode::kEmptyImage, "intersection with an empty histogram");
  }
  // Σ min(ca/na, cb/nb) = Σ min(ca·nb, cb·na) / (na·nb), all in integers
  // (totals are below 2³², so every product fits).
  std::uint64_t num = 0;
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    num += std::min(a.counts[i] * b.total, b.counts[i] * a.total);
  }
  return static_cast<double>(num) / (static_cast<double>(a.total) * static_cast<double>(b.total));
}

std::vector<double> luma_values(const Image& img) {
  std::vector<double> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = luma(img.pixel(i));
  return out;
}

std::vector<double> local_contrast_values(const Image& img) {
  const std::vector<double> y = luma_values(img);
  const int w = img.width(), h = img.height();
  std::vector<double> out(y.size());
  for (int py = 0; py < h; ++py) {
    const int y0 = std::max(0, py - kWindowBefore), y1 = std::min(h - 1, py + kWindowAfter);
    for (int px = 0; px < w; ++px) {
      const int x0 = std::max(0, px - kWindowBefore), x1 = std::min(w - 1, px + kWindowAfter);
      double sum = 0.0;
      for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) sum += y[static_cast<std::size_t>(yy) * w + xx];
      }
      const double mean = sum / static_cast<double>((y1 - y0 + 1) * (x1 - x0 + 1));
      const std::size_t i = static_cast<std::size_t>(py) * w + px;
      out[i] = std::clamp(4.0 * std::abs(y[i] - mean), 0.0, 1.0);
    }
  }
  return out;
}

std::vector<double> saturation_values(const Image& img) {
  std::vector<double> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rgb_to_hsv(img.pixel(i)).sat;
  return out;
}

HistScores hist_suite(const Image& a, const Image& b) {
  require_nonempty(a, "first image");
  require_nonempty(b, "second image");
  HistScores s;
  s.hist_l = histogram_intersection(histogram(luma_values(a)), histogram(luma_values(b)));
  s.hist_c = histogram_intersection(histogram(local_contrast_values(a)),
                                    histogram(local_contrast_values(b)));
  s.hist_s = histogram_intersection(histogram(saturation_values(a)),
                                    histogram(saturation_values(b)));
  s.hist_m = (s.hist_l + s.hist_c + s.hist_s) / 3.0;
  return s;
}

double psnr(const Image& a, const Image& b) {
  require_same_size(a, b);
  double sum = 0.0;
  const auto da = a.data(), db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(da.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double l1_distance(const Image& a, const Image& b) {
  require_same_size(a, b);
  double sum = 0.0;
  const auto da = a.data(), db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    sum += std::abs(static_cast<double>(da[i]) - static_cast<double>(db[i]));
  }
  return sum / static_cast<double>(da.size());
}

double ssim(const Image& a, const Image& b) {
  require_same_size(a, b);
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  const std::vector<double> x = luma_values(a), y = luma_values(b);
  const int w = a.width(), h = a.height();
  const int ww = std::min(kWindow, w), wh = std::min(kWindow, h);
  const double n = static_cast<double>(ww * wh);
  double total = 0.0;
  std::size_t windows = 0;
  for (int y0 = 0; y0 + wh <= h; ++y0) {
    for (int x0 = 0; x0 + ww <= w; ++x0) {
      double sx = 0.0, sy = 0.0;
      for (int j = y0; j < y0 + wh; ++j) {
        for (int i = x0; i < x0 + ww; ++i) {
          const std::size_t k = static_cast<std::size_t>(j) * w + i;
          sx += x[k];
          sy += y[k];
        }
      }
      const double mx = sx / n, my = sy / n;
      // Variances and covariance share one formula, so identical windows
      // give exactly 1.
      double vx = 0.0, vy = 0.0, cov = 0.0;
      for (int j = y0; j < y0 + wh; ++j) {
        for (int i = x0; i < x0 + ww; ++i) {
          const std::size_t k = static_cast<std::size_t>(j) * w + i;
          const double dx = x[k] - mx, dy = y[k] - my;
          vx += dx * dx;
          vy += dy * dy;
          cov += dx * dy;
        }
      }
      vx /= n;
      vy /= n;
      cov /= n;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

}  // namespace retouch
