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

#include <cstddef>
#include <span>
#include <vector>

namespace retouch {

struct PixelRGB {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

// Planar-interleaved RGB buffer: row-major, three float channels per pixel,
// display-referred sRGB-encoded values nominally in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int width, int height);
  Image(int width, int height, std::vector<float> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const { return pixel_count() == 0; }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  PixelRGB pixel(std::size_t index) const {
    const float* p = &data_[index * 3];
    return {p[0], p[1], p[2]};
  }
  PixelRGB at(int x, int y) const {
    return pixel(static_cast<std::size_t>(y) * width_ + x);
  }
  void set_pixel(std::size_t index, const PixelRGB& p) {
    float* q = &data_[index * 3];
    q[0] = static_cast<float>(p.r);
    q[1] = static_cast<float>(p.g);
    q[2] = static_cast<float>(p.b);
  }

  // Hard clamp of every channel to [0, 1].
  void clamp();

  // Copies the w x h window whose top-left corner is (x0, y0).
  Image crop(int x0, int y0, int w, int h) const;

  bool operator==(const Image& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Same pixels in a different order: pixel i of the result is pixel
// order[i] of the source, laid out as a single row.
Image permute_pixels(const Image& img, std::span<const std::size_t> order);

}  // namespace retouch
