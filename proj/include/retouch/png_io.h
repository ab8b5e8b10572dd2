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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "retouch/image.h"

namespace retouch {

// Reads an 8- or 16-bit RGB / RGBA PNG. Alpha is discarded. Throws
// kFileNotFound, kUnsupportedFormat (non-PNG, palette, grayscale, other bit
// depths) or kCorruptData.
Image load_image(const std::filesystem::path& path);

// Writes an RGB PNG at 8 or 16 bits per channel using quantize(). Throws kIo.
void save_image(const Image& img, const std::filesystem::path& path,
                int depth = 8);

// round(clamp(v, 0, 1) * (2^depth - 1)) with ties rounded up.
std::uint16_t quantize_channel(float v, int depth);
std::vector<std::uint16_t> quantize(const Image& img, int depth);

// Exactly what load_image(save_image(img)) returns, without touching disk.
Image quantized(const Image& img, int depth);

float dequantize_channel(std::uint16_t q, int depth);

}  // namespace retouch
