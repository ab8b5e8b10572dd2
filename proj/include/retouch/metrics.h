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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retouch/image.h"

namespace retouch {

// ---------------------------------------------------------------- histograms

inline constexpr std::size_t kHistogramBins = 64;

// 64 bins over [0, 1]. Bin i holds values in [i/64, (i+1)/64); 1.0 falls in
// the last bin and out-of-range values are clamped into the end bins.
// Counts are kept exactly; the normalized view sums to 1.
struct Histogram {
  std::array<std::uint64_t, kHistogramBins> counts{};
  std::uint64_t total = 0;

  double operator[](std::size_t bin) const;
  std::array<double, kHistogramBins> normalized() const;
};

std::size_t histogram_bin(double value);
// EmptyImage if `values` is empty (a degenerate histogram is an error).
Histogram histogram(std::span<const double> values);
// Σ min(a_i, b_i) of the normalized histograms, evaluated on the exact
// counts; symmetric, in [0, 1], and exactly 1 iff the normalized histograms
// are equal.
double histogram_intersection(const Histogram& a, const Histogram& b);

// Per-pixel feature maps the suite histograms are built from.
std::vector<double> luma_values(const Image& img);
// |luma − mean of the 8×8 window around the pixel| × 4, clamped to [0, 1].
// The window spans x−3 … x+4 and y−3 … y+4, clipped at the borders.
std::vector<double> local_contrast_values(const Image& img);
std::vector<double> saturation_values(const Image& img);  // HSV saturation

struct HistScores {
  double hist_l = 0.0;  // luma
  double hist_c = 0.0;  // local contrast
  double hist_s = 0.0;  // saturation
  double hist_m = 0.0;  // mean of the three
};

// Histogram intersections of a and b; the images may differ in size.
HistScores hist_suite(const Image& a, const Image& b);

// ---------------------------------------------------------------- fidelity

inline constexpr double kPsnrCap = 99.0;

// 10·log10(1 / MSE) over all channels, capped at 99 dB.
double psnr(const Image& a, const Image& b);
// Mean SSIM over every 8×8 window (stride 1) of the luma planes, with
// C1 = 0.01², C2 = 0.03² and population statistics. Images smaller than
// 8×8 are treated as a single window.
double ssim(const Image& a, const Image& b);
// Mean absolute channel difference.
double l1_distance(const Image& a, const Image& b);

// ---------------------------------------------------------------- rewards

// Concatenated per-channel R, G, B histograms (192 values, each channel's
// block sums to 1).
std::array<double, 3 * kHistogramBins> rgb_histogram_features(const Image& img);

inline constexpr double kDefaultGamma = 0.5;
inline constexpr double kDefaultAlpha = 0.4;
inline constexpr double kDefaultBeta = 0.3;

struct SimilarityBreakdown {
  double hist_sim = 0.0;  // cosine similarity of the 192-value features
  double l1 = 0.0;
  double value = 0.0;     // clamp(γ·hist_sim + (1−γ)·(1 − l1), 0, 1)
};

SimilarityBreakdown similarity_breakdown(const Image& out, const Image& tar,
                                         double gamma = kDefaultGamma);
double reward_similarity(const Image& out, const Image& tar, double gamma = kDefaultGamma);

// Aesthetic scorer plugin: a named function image → [0, 1].
struct Scorer {
  std::string name;
  std::function<double(const Image&)> score;
};

struct WeightedScorer {
  Scorer scorer;
  double weight = 0.0;
};

struct AestheticBreakdown {
  std::vector<double> scores;  // per scorer, in input order
  double value = 0.0;
};

// Σ w_i · s_i(img). Weights must be non-negative and sum to 1 (within 1e-9).
// A scorer that throws or returns a value outside [0, 1] raises
// ScorerFailure naming it.
AestheticBreakdown aesthetic_breakdown(const Image& img, const std::vector<WeightedScorer>& scorers);
double reward_aesthetic(const Image& img, const std::vector<WeightedScorer>& scorers);
// α·s_0 + β·s_1 + (1−α−β)·s_2 with α, β ≥ 0 and α + β ≤ 1.
double reward_aesthetic(const Image& img, const std::array<Scorer, 3>& scorers,
                        double alpha = kDefaultAlpha, double beta = kDefaultBeta);

// Built-in deterministic stand-ins for learned aesthetic models.
double score_mean_saturation(const Image& img);
// min(1, 4 · standard deviation of luma over pixels with luma in
// [0.2, 0.8]); 0 when no pixel is a mid-tone.
double score_midtone_contrast(const Image& img);
// 1 − fraction of pixels with any channel that quantizes to 0 or 255 in
// 8 bits.
double score_clipping_complement(const Image& img);
// {mean-saturation, mid-tone-contrast, clipping-complement}, in that order.
std::array<Scorer, 3> stub_scorers();

// ---------------------------------------------------------------- reasoning

// The canonical structural schema (N_required = 12), in template order.
inline constexpr std::array<std::string_view, 12> kReasoningTags = {
    "<content overview start>",       "<content overview end>",
    "<problem light start>",          "<problem light end>",
    "<problem global color start>",   "<problem global color end>",
    "<problem specific color start>", "<problem specific color end>",
    "<plan start>",                   "<plan end>",
    "<retouch tokens start>",         "<retouch tokens end>",
};

enum class RetouchTask { kAuto = 0, kStyle = 1, kParam = 2 };

// Critical task tokens, indexed by RetouchTask.
inline constexpr std::array<std::string_view, 3> kRetouchTokens = {
    "<|Auto Retouch|>", "<|Style Retouch|>", "<|Param Retouch|>"};

std::string task_name(RetouchTask task);            // "auto" | "style" | "param"
RetouchTask parse_task(std::string_view name);      // InvalidArgument otherwise

struct ReasoningEvent {
  enum class Kind { kTag, kToken };
  Kind kind = Kind::kTag;
  std::size_t index = 0;   // into kReasoningTags or kRetouchTokens
  std::size_t offset = 0;  // byte offset in the text
  bool operator==(const ReasoningEvent&) const = default;
};

struct ReasoningDoc {
  std::vector<ReasoningEvent> events;  // every occurrence, in document order
  std::array<bool, 12> tags{};
  std::array<bool, 3> tokens{};

  std::size_t tag_count() const;  // distinct required tags present
};

// Exact-substring scan; free text between and around tags is ignored.
ReasoningDoc parse_reasoning(std::string_view text);

struct FormatBreakdown {
  double tag_ratio = 0.0;  // N_detected / 12
  double penalty = 0.0;    // −5 or 0
  double value = 0.0;      // tag_ratio + penalty
};

// Without a task the penalty fires when any of the three tokens is absent;
// with a task it fires when that task's token is absent.
FormatBreakdown format_breakdown(std::string_view text,
                                 std::optional<RetouchTask> task = std::nullopt);
double reward_format(std::string_view text, std::optional<RetouchTask> task = std::nullopt);

// Reference documents for the format reward.
namespace reasoning_examples {
std::string complete();       // all 12 tags and all 3 tokens → 1.0
std::string half_tags();      // 6 of 12 tags and all 3 tokens → 0.5
std::string missing_token();  // all 12 tags, no "<|Style Retouch|>" → −4.0
}  // namespace reasoning_examples

// ---------------------------------------------------------------- combined

struct RewardReport {
  FormatBreakdown format;
  SimilarityBreakdown similarity;
  std::optional<AestheticBreakdown> aesthetic;  // Auto task only

  double r_f() const { return format.value; }
  double r_s() const { return similarity.value; }
  double r_a() const { return aesthetic ? aesthetic->value : 0.0; }
};

struct RewardConfig {
  double gamma = kDefaultGamma;
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
};

// All three rewards for one rollout. The aesthetic reward is computed only
// for the Auto-Retouch task, with the given scorers.
RewardReport evaluate_rewards(std::string_view reasoning, const Image& out, const Image& tar,
                              RetouchTask task, const RewardConfig& config = {},
                              const std::array<Scorer, 3>& scorers = stub_scorers());

}  // namespace retouch
