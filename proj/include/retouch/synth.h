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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "retouch/image.h"
#include "retouch/params.h"

namespace retouch {

// Counter-based splitmix64 generator. Substreams derived from (seed, index)
// are independent of each other, so item k of a batch can be regenerated on
// its own and batches can be produced in any order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  // Generator for substream `index` of `seed`.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t index);
  // Seed of substream `index` (what derive() starts from).
  static std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box–Muller (cosine branch; two uniforms per draw).
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Auto mode draws σ_i = scale · table σ_i (the Auto-Retouch perturbation
// table); Param mode draws σ_i = scale · range_max_i.
enum class SampleMode { kAuto, kParam };

std::string sample_mode_name(SampleMode mode);
SampleMode parse_sample_mode(std::string_view name);  // "auto" | "param"

// Per-operator standard deviation used for a draw.
double sample_stddev(std::size_t op, SampleMode mode, double scale);

// One Gaussian per operator (always all 38, so the stream position does not
// depend on the mask), clamped to range; inactive categories exactly zero.
ParamVector sample_params(const CategoryMask& mask, SampleMode mode, double scale,
                          SplitMix64& rng);

struct Degraded {
  Image image;
  ParamVector params;  // forward params that restore the original
};

// Treats `img` as the retouched target: samples params over `mask` and
// applies their negation, producing the "unretouched" input.
Degraded degrade(const Image& img, SampleMode mode, double scale, std::uint64_t seed,
                 const CategoryMask& mask = CategoryMask::all(), int threads = 1);

struct ManifestRow {
  std::string input;   // path relative to the manifest's directory
  std::string target;  // path relative to the manifest's directory
  ParamVector params;
  CategoryMask mask;
  std::uint64_t seed = 0;  // substream seed the params were drawn from
  std::string direction = "forward";

  bool operator==(const ManifestRow&) const = default;
};

nlohmann::ordered_json manifest_row_to_json(const ManifestRow& row);
ManifestRow manifest_row_from_json(const nlohmann::json& j);
// One JSON object per line, LF-terminated.
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

// Sorted list of *.png files directly inside `dir`; EmptyCorpus if none.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

struct GenConfig {
  std::size_t count = 0;
  std::vector<CategoryMask> masks;  // cycled; empty means all seven
  double scale = 0.25;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Param-Retouch pair generation. Pair k uses corpus image k mod |corpus|,
// mask k mod |masks| and substream k of the seed. Inputs and targets are
// written as 16-bit PNGs (pair_NNNNNN_in.png / _tar.png) and the target is
// rendered from the quantized input, so re-rendering the stored input with
// the stored params reproduces the stored target exactly. manifest.jsonl is
// written last, in pair order.
std::vector<ManifestRow> gen_param_pairs(const std::filesystem::path& corpus_dir,
                                         const std::filesystem::path& out_dir,
                                         const GenConfig& config);

// Deterministic synthetic photo-like image: a mosaic of flat colour cells
// (about a dozen pixels across) with per-cell shading, a smooth illumination
// ramp and mild noise. Dense colour variety per crop makes it the
// distillation corpus as well as the held-out evaluation set.
Image synthetic_image(int width, int height, std::uint64_t seed);

}  // namespace retouch
