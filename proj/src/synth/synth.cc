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

#include "retouch/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>

#include "retouch/color.h"
#include "retouch/errors.h"
#include "retouch/ops.h"
#include "retouch/parallel.h"
#include "retouch/png_io.h"

namespace retouch {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string pair_name(std::size_t index, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "pair_%06zu_%s.png", index, suffix);
  return buf;
}

PixelRGB random_color(SplitMix64& rng) {
  Hsv hsv{360.0 * rng.uniform(), rng.uniform(), 0.03 + 0.95 * rng.uniform()};
  // Roughly one colour in five is a near-gray.
  if (rng.uniform() < 0.2) hsv.sat *= 0.15;
  return hsv_to_rgb(hsv);
}

}  // namespace

std::uint64_t SplitMix64::substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64((index + 1) * kGolden));
}

SplitMix64 SplitMix64::derive(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(substream_seed(seed, index));
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "below(0)");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::string sample_mode_name(SampleMode mode) {
  return mode == SampleMode::kAuto ? "auto" : "param";
}

SampleMode parse_sample_mode(std::string_view name) {
  if (name == "auto") return SampleMode::kAuto;
  if (name == "param") return SampleMode::kParam;
  throw Error(ErrorCode::kInvalidArgument,
              "sampling mode must be 'auto' or 'param', got '" + std::string(name) + "'");
}

double sample_stddev(std::size_t op, SampleMode mode, double scale) {
  const OperatorInfo& info = kOperators[op];
  return scale * (mode == SampleMode::kAuto ? info.stddev : info.range_max);
}

ParamVector sample_params(const CategoryMask& mask, SampleMode mode, double scale,
                          SplitMix64& rng) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "sampling scale must be finite and >= 0");
  }
  ParamVector p;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const double draw = rng.normal() * sample_stddev(i, mode, scale);
    if (!mask.active(kOperators[i].category)) continue;
    const double limit = kOperators[i].range_max;
    p[i] = std::clamp(draw, -limit, limit);
  }
  return p;
}

Degraded degrade(const Image& img, SampleMode mode, double scale, std::uint64_t seed,
                 const CategoryMask& mask, int threads) {
  SplitMix64 rng(seed);
  Degraded out;
  out.params = sample_params(mask, mode, scale, rng);
  out.image = apply_pipeline(out.params.negated(), img, threads);
  return out;
}

nlohmann::ordered_json manifest_row_to_json(const ManifestRow& row) {
  nlohmann::ordered_json j;
  j["input"] = row.input;
  j["target"] = row.target;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kNumParams; ++i) params[std::string(kOperators[i].name)] = row.params[i];
  j["params"] = std::move(params);
  j["mask"] = {{"light", row.mask.light},
               {"global_color", row.mask.global_color},
               {"specific_color", row.mask.specific_color}};
  j["seed"] = row.seed;
  j["direction"] = row.direction;
  return j;
}

ManifestRow manifest_row_from_json(const nlohmann::json& j) {
  try {
    ManifestRow row;
    row.input = j.at("input").get<std::string>();
    row.target = j.at("target").get<std::string>();
    row.params = params_from_json(j.at("params"));
    const auto& m = j.at("mask");
    row.mask = {m.at("light").get<bool>(), m.at("global_color").get<bool>(),
                m.at("specific_color").get<bool>()};
    row.seed = j.at("seed").get<std::uint64_t>();
    row.direction = j.at("direction").get<std::string>();
    if (row.direction != "forward" && row.direction != "inverse") {
      throw Error(ErrorCode::kCorruptData, "manifest direction must be forward or inverse");
    }
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptData, std::string("malformed manifest row: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows) {
  std::string text;
  for (const ManifestRow& row : rows) {
    text += manifest_row_to_json(row).dump();
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest " + path.string());
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(std::filesystem::exists(path) ? ErrorCode::kIo : ErrorCode::kFileNotFound,
                "cannot open manifest " + path.string());
  }
  std::vector<ManifestRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kCorruptData, "manifest line is not JSON: " + std::string(e.what()));
    }
    rows.push_back(manifest_row_from_json(j));
  }
  return rows;
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kFileNotFound, "corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no PNG files in " + dir.string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<ManifestRow> gen_param_pairs(const std::filesystem::path& corpus_dir,
                                         const std::filesystem::path& out_dir,
                                         const GenConfig& config) {
  const std::vector<std::filesystem::path> corpus = list_corpus(corpus_dir);
  const std::vector<CategoryMask> masks =
      config.masks.empty()
          ? std::vector<CategoryMask>(all_masks().begin(), all_masks().end())
          : config.masks;
  for (const CategoryMask& m : masks) {
    if (!m.any()) throw Error(ErrorCode::kInvalidArgument, "empty category mask");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + out_dir.string());
  }

  std::vector<ManifestRow> rows(config.count);
  // Per-pair work is independent; errors are collected per slot so the first
  // failing pair (in index order) is reported regardless of thread timing.
  std::vector<std::exception_ptr> errors(config.count);
  parallel_for(config.count, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        ManifestRow& row = rows[k];
        row.mask = masks[k % masks.size()];
        row.seed = SplitMix64::substream_seed(config.seed, k);
        SplitMix64 rng(row.seed);
        row.params = sample_params(row.mask, SampleMode::kParam, config.scale, rng);
        row.input = pair_name(k, "in");
        row.target = pair_name(k, "tar");
        const Image input = quantized(load_image(corpus[k % corpus.size()]), 16);
        const Image target = apply_category(row.params, row.mask, input);
        save_image(input, out_dir / row.input, 16);
        save_image(target, out_dir / row.target, 16);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  write_manifest(out_dir / "manifest.jsonl", rows);
  return rows;
}

Image synthetic_image(int width, int height, std::uint64_t seed) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kEmptyImage, "synthetic image needs positive dimensions");
  }
  SplitMix64 rng(SplitMix64::substream_seed(seed, 0x5EED));
  // A Voronoi mosaic of flat-coloured cells with a per-cell shading ramp,
  // under a smooth global illumination field, plus mild sensor noise. Cells
  // are about a dozen pixels across, so even small crops cover several
  // unrelated colours, dark and bright regions, and near-gray patches.
  struct Cell {
    double cx, cy;
    PixelRGB color;
    double gx, gy;  // shading gradient across the cell
  };
  const double area = static_cast<double>(width) * height;
  const std::size_t cells = std::max<std::size_t>(
      4, static_cast<std::size_t>(area / (110.0 + 80.0 * rng.uniform())));
  std::vector<Cell> mosaic(cells);
  for (Cell& c : mosaic) {
    c.cx = rng.uniform() * width;
    c.cy = rng.uniform() * height;
    c.color = random_color(rng);
    c.gx = (2.0 * rng.uniform() - 1.0) * 0.04;
    c.gy = (2.0 * rng.uniform() - 1.0) * 0.04;
  }
  const double light_x = 2.0 * rng.uniform() - 1.0, light_y = 2.0 * rng.uniform() - 1.0;
  const double light_amount = 0.3 * rng.uniform();
  const double noise = 0.02 * rng.uniform();

  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      const Cell* best = &mosaic[0];
      double best_d2 = std::numeric_limits<double>::infinity();
      for (const Cell& c : mosaic) {
        const double d2 = (px - c.cx) * (px - c.cx) + (py - c.cy) * (py - c.cy);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = &c;
        }
      }
      const double u = px / width - 0.5, v = py / height - 0.5;
      const double shade = 1.0 + best->gx * (px - best->cx) + best->gy * (py - best->cy) +
                           light_amount * (light_x * u + light_y * v);
      const double n = noise * (2.0 * rng.uniform() - 1.0);
      img.set_pixel(static_cast<std::size_t>(y) * width + x,
                    PixelRGB{std::clamp(best->color.r * shade + n, 0.0, 1.0),
                             std::clamp(best->color.g * shade + n, 0.0, 1.0),
                             std::clamp(best->color.b * shade + n, 0.0, 1.0)});
    }
  }
  return img;
}

}  // namespace retouch
