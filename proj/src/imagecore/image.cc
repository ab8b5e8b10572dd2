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

#include "retouch/image.h"

#include <algorithm>
#include <string>

#include "retouch/errors.h"

namespace retouch {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptData: return "CorruptData";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kOutOfRangeParam: return "OutOfRangeParam";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyImage: return "EmptyImage";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kScorerFailure: return "ScorerFailure";
  }
  return "Unknown";
}

Image::Image(int width, int height)
    : Image(width, height,
            std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                               std::max(height, 0) * 3)) {}

Image::Image(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kShapeMismatch, "negative image dimensions");
  }
  if (data_.size() != pixel_count() * 3) {
    throw Error(ErrorCode::kShapeMismatch,
                "image data holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(pixel_count() * 3));
  }
}

void Image::clamp() {
  for (float& v : data_) v = std::clamp(v, 0.0f, 1.0f);
}

Image Image::crop(int x0, int y0, int w, int h) const {
  if (x0 < 0 || y0 < 0 || w < 0 || h < 0 || x0 + w > width_ ||
      y0 + h > height_) {
    throw Error(ErrorCode::kDimensionMismatch, "crop window outside image");
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    const float* src =
        &data_[(static_cast<std::size_t>(y0 + y) * width_ + x0) * 3];
    std::copy_n(src, static_cast<std::size_t>(w) * 3,
                &out.data_[static_cast<std::size_t>(y) * w * 3]);
  }
  return out;
}

Image permute_pixels(const Image& img, std::span<const std::size_t> order) {
  if (order.size() != img.pixel_count()) {
    throw Error(ErrorCode::kShapeMismatch, "permutation length mismatch");
  }
  Image out(static_cast<int>(order.size()), order.empty() ? 0 : 1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.set_pixel(i, img.pixel(order[i]));
  }
  return out;
}

}  // namespace retouch
