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

#include "retouch/png_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "retouch/errors.h"

namespace retouch {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports failures through longjmp; the message is stashed here so
// the caller can raise a typed error after unwinding to setjmp.
struct PngErrorSink {
  char message[256] = {0};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink != nullptr) {
    std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  }
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct RawPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::vector<unsigned char> bytes;  // rows packed back to back
  std::size_t row_bytes = 0;
};

// Returns 0 on success, 1 on libpng error, 2 on unsupported layout. Only
// trivially destructible locals live in this frame besides `out`, which is
// constructed by the caller.
int read_png_rows(std::FILE* fp, RawPng& out, PngErrorSink& sink) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           on_png_error, on_png_warning);
  if (png == nullptr) return 1;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return 1;
  }
  png_bytep* volatile rows = nullptr;
  if (setjmp(png_jmpbuf(png))) {
    std::free(rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return 1;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  out.color_type = png_get_color_type(png, info);
  const bool rgb = out.color_type == PNG_COLOR_TYPE_RGB ||
                   out.color_type == PNG_COLOR_TYPE_RGB_ALPHA;
  if (!rgb || (out.bit_depth != 8 && out.bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return 2;
  }
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
    png_set_interlace_handling(png);
  }
  png_read_update_info(png, info);
  out.row_bytes = png_get_rowbytes(png, info);
  out.bytes.resize(out.row_bytes * out.height);
  rows = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * out.height));
  for (png_uint_32 y = 0; y < out.height; ++y) {
    rows[y] = out.bytes.data() + y * out.row_bytes;
  }
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  std::free(rows);
  png_destroy_read_struct(&png, &info, nullptr);
  return 0;
}

int write_png_rows(std::FILE* fp, int width, int height, int depth,
                   const unsigned char* bytes, std::size_t row_bytes,
                   PngErrorSink& sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            on_png_error, on_png_warning);
  if (png == nullptr) return 1;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return 1;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return 1;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, depth, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, bytes + static_cast<std::size_t>(y) * row_bytes);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return 0;
}

}  // namespace

std::uint16_t quantize_channel(float v, int depth) {
  const double max_code = depth == 16 ? 65535.0 : 255.0;
  const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint16_t>(std::floor(c * max_code + 0.5));
}

float dequantize_channel(std::uint16_t q, int depth) {
  const double max_code = depth == 16 ? 65535.0 : 255.0;
  return static_cast<float>(q / max_code);
}

std::vector<std::uint16_t> quantize(const Image& img, int depth) {
  std::vector<std::uint16_t> out(img.data().size());
  std::transform(img.data().begin(), img.data().end(), out.begin(),
                 [depth](float v) { return quantize_channel(v, depth); });
  return out;
}

Image quantized(const Image& img, int depth) {
  std::vector<float> data(img.data().size());
  std::transform(img.data().begin(), img.data().end(), data.begin(),
                 [depth](float v) {
                   return dequantize_channel(quantize_channel(v, depth), depth);
                 });
  return Image(img.width(), img.height(), std::move(data));
}

Image load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "no such file: " + path.string());
  }
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error(ErrorCode::kIo, "cannot open " + path.string());

  unsigned char signature[8] = {0};
  if (std::fread(signature, 1, 8, fp.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "not a PNG file: " + path.string());
  }
  std::rewind(fp.get());

  RawPng raw;
  PngErrorSink sink;
  const int status = read_png_rows(fp.get(), raw, sink);
  if (status == 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": only 8/16-bit RGB or RGBA PNGs are supported");
  }
  if (status != 0) {
    throw Error(ErrorCode::kCorruptData,
                path.string() + ": " + std::string(sink.message));
  }

  const int channels = raw.color_type == PNG_COLOR_TYPE_RGB_ALPHA ? 4 : 3;
  const int bytes_per_sample = raw.bit_depth / 8;
  Image img(static_cast<int>(raw.width), static_cast<int>(raw.height));
  auto data = img.mutable_data();
  for (png_uint_32 y = 0; y < raw.height; ++y) {
    const unsigned char* row = raw.bytes.data() + y * raw.row_bytes;
    for (png_uint_32 x = 0; x < raw.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const unsigned char* s = row + (x * channels + c) * bytes_per_sample;
        const std::uint16_t q =
            bytes_per_sample == 2 ? static_cast<std::uint16_t>((s[0] << 8) | s[1])
                                  : s[0];
        data[(static_cast<std::size_t>(y) * raw.width + x) * 3 + c] =
            dequantize_channel(q, raw.bit_depth);
      }
    }
  }
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path,
                int depth) {
  if (depth != 8 && depth != 16) {
    throw Error(ErrorCode::kInvalidArgument, "PNG depth must be 8 or 16");
  }
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, "cannot save empty image");
  const std::vector<std::uint16_t> codes = quantize(img, depth);
  const int bytes_per_sample = depth / 8;
  const std::size_t row_bytes =
      static_cast<std::size_t>(img.width()) * 3 * bytes_per_sample;
  std::vector<unsigned char> bytes(row_bytes * img.height());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (bytes_per_sample == 2) {
      bytes[2 * i] = static_cast<unsigned char>(codes[i] >> 8);
      bytes[2 * i + 1] = static_cast<unsigned char>(codes[i] & 0xff);
    } else {
      bytes[i] = static_cast<unsigned char>(codes[i]);
    }
  }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  PngErrorSink sink;
  if (write_png_rows(fp.get(), img.width(), img.height(), depth, bytes.data(),
                     row_bytes, sink) != 0) {
    throw Error(ErrorCode::kIo,
                path.string() + ": " + std::string(sink.message));
  }
  if (std::fflush(fp.get()) != 0) {
    throw Error(ErrorCode::kIo, "flush failed for " + path.string());
  }
}

}  // namespace retouch
