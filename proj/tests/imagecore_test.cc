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

#include <png.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "retouch/color.h"
#include "retouch/errors.h"
#include "retouch/png_io.h"
#include "test_util.h"

namespace retouch {
namespace {

// Writes a PNG of arbitrary colour type straight through libpng, bypassing
// save_image, so the loader can be fed layouts the writer never produces.
void write_raw_png(const std::filesystem::path& path, int width, int height,
                   int color_type, int depth,
                   const std::vector<unsigned char>& bytes) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  ASSERT_NE(fp, nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_color palette[2] = {{0, 0, 0}, {255, 255, 255}};
    png_set_PLTE(png, info, palette, 2);
  }
  png_write_info(png, info);
  const std::size_t row_bytes = bytes.size() / height;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, bytes.data() + y * row_bytes);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PngTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::temp_dir("png"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(PngTest, Loads8BitPixelsScaledBy255) {
  write_raw_png(dir_ / "a.png", 2, 1, PNG_COLOR_TYPE_RGB, 8,
                {255, 0, 0, 0, 0, 0});
  const Image img = load_image(dir_ / "a.png");
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 1);
  const std::vector<float> expected = {1, 0, 0, 0, 0, 0};
  EXPECT_EQ(std::vector<float>(img.data().begin(), img.data().end()), expected);
}

TEST_F(PngTest, Loads16BitFullScaleAsOne) {
  write_raw_png(dir_ / "w.png", 1, 1, PNG_COLOR_TYPE_RGB, 16,
                {0xff, 0xff, 0xff, 0xff, 0xff, 0xff});
  const Image img = load_image(dir_ / "w.png");
  EXPECT_EQ(img.pixel(0).r, 1.0);
  EXPECT_EQ(img.pixel(0).g, 1.0);
  EXPECT_EQ(img.pixel(0).b, 1.0);
}

TEST_F(PngTest, DiscardsAlpha) {
  write_raw_png(dir_ / "rgba.png", 1, 1, PNG_COLOR_TYPE_RGB_ALPHA, 8,
                {51, 102, 204, 7});
  const Image img = load_image(dir_ / "rgba.png");
  EXPECT_EQ(img.data().size(), 3u);
  EXPECT_FLOAT_EQ(img.pixel(0).r, 0.2f);
  EXPECT_FLOAT_EQ(img.pixel(0).g, 0.4f);
  EXPECT_FLOAT_EQ(img.pixel(0).b, 0.8f);
}

TEST_F(PngTest, QuantizationRoundsHalfUpAfterClamping) {
  EXPECT_EQ(quantize_channel(0.5f, 8), 128);
  EXPECT_EQ(quantize_channel(1.0f, 16), 65535);
  EXPECT_EQ(quantize_channel(-0.2f, 8), 0);
  EXPECT_EQ(quantize_channel(1.7f, 8), 255);

  Image img(3, 1, {0.5f, 1.0f, -0.2f, 0.5f, 1.0f, -0.2f, 0, 0, 0});
  save_image(img, dir_ / "q8.png", 8);
  const Image back = load_image(dir_ / "q8.png");
  EXPECT_EQ(quantize_channel(back.data()[0], 8), 128);
  EXPECT_EQ(back.data()[1], 1.0f);
  EXPECT_EQ(back.data()[2], 0.0f);

  save_image(img, dir_ / "q16.png", 16);
  EXPECT_EQ(quantize(load_image(dir_ / "q16.png"), 16)[1], 65535);
}

// Round-trip oracle: 100 seeded random images of random codes at both depths.
TEST_F(PngTest, SaveLoadRoundTripIsIdentityOnQuantizedImages) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int depth = trial % 2 == 0 ? 8 : 16;
    const int w = 1 + static_cast<int>(gen() % 13);
    const int h = 1 + static_cast<int>(gen() % 11);
    const std::uint32_t max_code = depth == 8 ? 255 : 65535;
    Image img(w, h);
    for (float& v : img.mutable_data()) {
      v = dequantize_channel(static_cast<std::uint16_t>(gen() % (max_code + 1)),
                             depth);
    }
    const auto path = dir_ / ("rt" + std::to_string(trial) + ".png");
    save_image(img, path, depth);
    const Image back = load_image(path);
    ASSERT_EQ(back, img) << "trial " << trial;
    EXPECT_EQ(quantized(img, depth), img);

    const auto again = dir_ / ("rt_again" + std::to_string(trial) + ".png");
    save_image(back, again, depth);
    ASSERT_EQ(read_bytes(path), read_bytes(again));
  }
}

TEST_F(PngTest, QuantizedMatchesDiskRoundTrip) {
  const Image img = testing::random_image(9, 7, 11);
  for (int depth : {8, 16}) {
    save_image(img, dir_ / "x.png", depth);
    EXPECT_EQ(load_image(dir_ / "x.png"), quantized(img, depth));
  }
}

TEST_F(PngTest, MissingFileIsFileNotFound) {
  try {
    load_image(dir_ / "nope.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

TEST_F(PngTest, RejectsUnsupportedLayouts) {
  {
    std::ofstream(dir_ / "text.png") << "definitely not a png";
  }
  write_raw_png(dir_ / "gray.png", 2, 1, PNG_COLOR_TYPE_GRAY, 8, {0, 255});
  write_raw_png(dir_ / "pal.png", 8, 1, PNG_COLOR_TYPE_PALETTE, 1, {0xaa});
  for (const char* name : {"text.png", "gray.png", "pal.png"}) {
    try {
      load_image(dir_ / name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUnsupportedFormat) << name;
    }
  }
}

TEST_F(PngTest, TruncatedFileIsCorruptData) {
  save_image(testing::random_image(32, 32, 3), dir_ / "full.png", 8);
  std::vector<char> bytes = read_bytes(dir_ / "full.png");
  bytes.resize(bytes.size() / 2);
  std::ofstream(dir_ / "half.png", std::ios::binary)
      .write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  try {
    load_image(dir_ / "half.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptData);
  }
}

TEST_F(PngTest, UnwritablePathIsIoError) {
  try {
    save_image(testing::random_image(2, 2, 1), dir_ / "missing" / "x.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Luma, Rec709Coefficients) {
  EXPECT_DOUBLE_EQ(luma(PixelRGB{1, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(luma(PixelRGB{1, 0, 0}), 0.2126);
  EXPECT_DOUBLE_EQ(luma(PixelRGB{0.18, 0.18, 0.18}), 0.18);
}

TEST(Luma, LinearAndGrayPreserving) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const PixelRGB a{u(gen), u(gen), u(gen)};
    const PixelRGB b{u(gen), u(gen), u(gen)};
    const double k = u(gen);
    const PixelRGB mix{a.r + k * b.r, a.g + k * b.g, a.b + k * b.b};
    EXPECT_NEAR(luma(mix), luma(a) + k * luma(b), 1e-12);
    const double v = u(gen);
    EXPECT_NEAR(luma(PixelRGB{v, v, v}), v, 1e-15);
  }
}

TEST(Hsv, PrimaryAndAchromatic) {
  const Hsv red = rgb_to_hsv(PixelRGB{1, 0, 0});
  EXPECT_EQ(red.hue, 0.0);
  EXPECT_EQ(red.sat, 1.0);
  EXPECT_EQ(red.val, 1.0);

  const Hsv gray = rgb_to_hsv(PixelRGB{0.5, 0.5, 0.5});
  EXPECT_EQ(gray.hue, 0.0);
  EXPECT_EQ(gray.sat, 0.0);
  EXPECT_EQ(gray.val, 0.5);

  const Hsv blue = rgb_to_hsv(PixelRGB{0, 0, 1});
  EXPECT_DOUBLE_EQ(blue.hue, 240.0);
  const Hsv magenta = rgb_to_hsv(PixelRGB{1, 0, 0.5});
  EXPECT_DOUBLE_EQ(magenta.hue, 330.0);
}

TEST(Hsv, RoundTripWithinOneMicro) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const PixelRGB p{u(gen), u(gen), u(gen)};
    const Hsv hsv = rgb_to_hsv(p);
    EXPECT_GE(hsv.hue, 0.0);
    EXPECT_LT(hsv.hue, 360.0);
    const PixelRGB q = hsv_to_rgb(hsv);
    EXPECT_NEAR(q.r, p.r, 1e-6);
    EXPECT_NEAR(q.g, p.g, 1e-6);
    EXPECT_NEAR(q.b, p.b, 1e-6);
  }
}

TEST(Image, RejectsInconsistentBuffer) {
  EXPECT_THROW(Image(2, 2, std::vector<float>(11)), Error);
}

TEST(Image, CropCopiesWindow) {
  const Image img = testing::random_image(5, 4, 1);
  const Image c = img.crop(1, 2, 3, 2);
  EXPECT_EQ(c.width(), 3);
  EXPECT_EQ(c.height(), 2);
  EXPECT_EQ(c.at(0, 0).r, img.at(1, 2).r);
  EXPECT_EQ(c.at(2, 1).b, img.at(3, 3).b);
  EXPECT_THROW(img.crop(3, 0, 3, 1), Error);
}

}  // namespace
}  // namespace retouch
