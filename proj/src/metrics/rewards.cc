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
#include <exception>

#include "retouch/color.h"
#include "retouch/errors.h"
#include "retouch/metrics.h"

namespace retouch {
namespace {

constexpr double kFormatPenalty = -5.0;
constexpr double kWeightTolerance = 1e-9;

bool clipped_8bit(double v) {
  const long q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
  return q == 0 || q == 255;
}

// Joins fragments with newlines; used to build the reference documents.
std::string lines(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (std::string_view p : parts) {
    out += p;
    out += '\n';
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- similarity

std::array<double, 3 * kHistogramBins> rgb_histogram_features(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, "histogram features of an empty image");
  std::array<std::vector<double>, 3> channels;
  for (auto& c : channels) c.reserve(img.pixel_count());
  const auto data = img.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) channels[c].push_back(data[3 * i + c]);
  }
  std::array<double, 3 * kHistogramBins> out{};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto h = histogram(channels[c]).normalized();
    std::copy(h.begin(), h.end(), out.begin() + c * kHistogramBins);
  }
  return out;
}

SimilarityBreakdown similarity_breakdown(const Image& out, const Image& tar, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
  }
  SimilarityBreakdown s;
  s.l1 = l1_distance(out, tar);  // also checks the dimensions
  const auto fa = rgb_histogram_features(out), fb = rgb_histogram_features(tar);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    dot += fa[i] * fb[i];
    na += fa[i] * fa[i];
    nb += fb[i] * fb[i];
  }
  // sqrt(na·nb) rather than sqrt(na)·sqrt(nb): for identical features it is
  // exactly na, so the similarity is exactly 1.
  s.hist_sim = dot / std::sqrt(na * nb);
  s.value = std::clamp(gamma * s.hist_sim + (1.0 - gamma) * (1.0 - s.l1), 0.0, 1.0);
  return s;
}

double reward_similarity(const Image& out, const Image& tar, double gamma) {
  return similarity_breakdown(out, tar, gamma).value;
}

// ---------------------------------------------------------------- aesthetic

AestheticBreakdown aesthetic_breakdown(const Image& img,
                                       const std::vector<WeightedScorer>& scorers) {
  if (scorers.empty()) throw Error(ErrorCode::kInvalidArgument, "no aesthetic scorers");
  double weight_sum = 0.0;
  for (const WeightedScorer& ws : scorers) {
    if (!(ws.weight >= 0.0) || !std::isfinite(ws.weight)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "scorer weight for '" + ws.scorer.name + "' must be finite and >= 0");
    }
    weight_sum += ws.weight;
  }
  if (std::abs(weight_sum - 1.0) > kWeightTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "aesthetic weights must sum to 1");
  }
  AestheticBreakdown out;
  for (const WeightedScorer& ws : scorers) {
    double s = 0.0;
    try {
      if (!ws.scorer.score) throw std::runtime_error("scorer has no function");
      s = ws.scorer.score(img);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kScorerFailure,
                  "aesthetic scorer '" + ws.scorer.name + "' failed: " + e.what());
    }
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::kScorerFailure, "aesthetic scorer '" + ws.scorer.name +
                                                 "' returned " + std::to_string(s) +
                                                 ", outside [0, 1]");
    }
    out.scores.push_back(s);
    out.value += ws.weight * s;
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

double reward_aesthetic(const Image& img, const std::vector<WeightedScorer>& scorers) {
  return aesthetic_breakdown(img, scorers).value;
}

double reward_aesthetic(const Image& img, const std::array<Scorer, 3>& scorers, double alpha,
                        double beta) {
  if (!(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "aesthetic weights need alpha, beta >= 0 and "
                                             "alpha + beta <= 1");
  }
  return reward_aesthetic(img, {{scorers[0], alpha},
                                {scorers[1], beta},
                                {scorers[2], 1.0 - alpha - beta}});
}

double score_mean_saturation(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, "scoring an empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) sum += rgb_to_hsv(img.pixel(i)).sat;
  return sum / static_cast<double>(img.pixel_count());
}

double score_midtone_contrast(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, "scoring an empty image");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double y = luma(img.pixel(i));
    if (y < 0.2 || y > 0.8) continue;
    sum += y;
    ++n;
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double y = luma(img.pixel(i));
    if (y < 0.2 || y > 0.8) continue;
    var += (y - mean) * (y - mean);
  }
  return std::min(1.0, 4.0 * std::sqrt(var / static_cast<double>(n)));
}

double score_clipping_complement(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::kEmptyImage, "scoring an empty image");
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const PixelRGB p = img.pixel(i);
    if (clipped_8bit(p.r) || clipped_8bit(p.g) || clipped_8bit(p.b)) ++clipped;
  }
  return 1.0 - static_cast<double>(clipped) / static_cast<double>(img.pixel_count());
}

std::array<Scorer, 3> stub_scorers() {
  return {Scorer{"mean-saturation", score_mean_saturation},
          Scorer{"midtone-contrast", score_midtone_contrast},
          Scorer{"clipping-complement", score_clipping_complement}};
}

// ---------------------------------------------------------------- reasoning

std::string task_name(RetouchTask task) {
  switch (task) {
    case RetouchTask::kAuto: return "auto";
    case RetouchTask::kStyle: return "style";
    default: return "param";
  }
}

RetouchTask parse_task(std::string_view name) {
  if (name == "auto") return RetouchTask::kAuto;
  if (name == "style") return RetouchTask::kStyle;
  if (name == "param") return RetouchTask::kParam;
  throw Error(ErrorCode::kInvalidArgument,
              "task must be auto, style or param; got '" + std::string(name) + "'");
}

std::size_t ReasoningDoc::tag_count() const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), true));
}

ReasoningDoc parse_reasoning(std::string_view text) {
  ReasoningDoc doc;
  std::size_t pos = text.find('<');
  while (pos != std::string_view::npos) {
    const std::string_view rest = text.substr(pos);
    std::size_t advance = 1;
    for (std::size_t i = 0; i < kReasoningTags.size(); ++i) {
      if (rest.starts_with(kReasoningTags[i])) {
        doc.events.push_back({ReasoningEvent::Kind::kTag, i, pos});
        doc.tags[i] = true;
        advance = kReasoningTags[i].size();
      }
    }
    for (std::size_t i = 0; i < kRetouchTokens.size(); ++i) {
      if (rest.starts_with(kRetouchTokens[i])) {
        doc.events.push_back({ReasoningEvent::Kind::kToken, i, pos});
        doc.tokens[i] = true;
        advance = kRetouchTokens[i].size();
      }
    }
    pos = text.find('<', pos + advance);
  }
  return doc;
}

FormatBreakdown format_breakdown(std::string_view text, std::optional<RetouchTask> task) {
  const ReasoningDoc doc = parse_reasoning(text);
  FormatBreakdown f;
  f.tag_ratio = static_cast<double>(doc.tag_count()) / static_cast<double>(kReasoningTags.size());
  const bool tokens_ok = task ? doc.tokens[static_cast<std::size_t>(*task)]
                              : std::all_of(doc.tokens.begin(), doc.tokens.end(),
                                            [](bool b) { return b; });
  f.penalty = tokens_ok ? 0.0 : kFormatPenalty;
  f.value = f.tag_ratio + f.penalty;
  return f;
}

double reward_format(std::string_view text, std::optional<RetouchTask> task) {
  return format_breakdown(text, task).value;
}

namespace reasoning_examples {

std::string complete() {
  return lines({
      "<content overview start>A harbour at dusk: boats, wet stone, a pale sky."
      "<content overview end>",
      "<problem light start>The foreground is underexposed and the shadows are crushed."
      "<problem light end>",
      "<problem global color start>A cool cast over the whole frame.<problem global color end>",
      "<problem specific color start>The orange hulls look dull next to the blue water."
      "<problem specific color end>",
      "<plan start>Lift exposure and shadows, warm the balance, then boost orange "
      "saturation.<plan end>",
      "<retouch tokens start><|Auto Retouch|> <|Style Retouch|> <|Param Retouch|>"
      "<retouch tokens end>",
  });
}

std::string half_tags() {
  return lines({
      "<content overview start>A portrait by a window.<content overview end>",
      "The light looks flat and the skin tones are slightly green.",
      "<plan start>Add contrast, shift the tint toward magenta.<plan end>",
      "<retouch tokens start><|Auto Retouch|> <|Style Retouch|> <|Param Retouch|>"
      "<retouch tokens end>",
  });
}

std::string missing_token() {
  std::string doc = complete();
  const std::string_view token = kRetouchTokens[static_cast<std::size_t>(RetouchTask::kStyle)];
  doc.erase(doc.find(token), token.size() + 1);  // token and the following space
  return doc;
}

}  // namespace reasoning_examples

// ---------------------------------------------------------------- combined

RewardReport evaluate_rewards(std::string_view reasoning, const Image& out, const Image& tar,
                              RetouchTask task, const RewardConfig& config,
                              const std::array<Scorer, 3>& scorers) {
  RewardReport r;
  r.format = format_breakdown(reasoning, task);
  r.similarity = similarity_breakdown(out, tar, config.gamma);
  if (task == RetouchTask::kAuto) {
    if (!(config.alpha >= 0.0 && config.beta >= 0.0 && config.alpha + config.beta <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "aesthetic weights need alpha, beta >= 0 and alpha + beta <= 1");
    }
    r.aesthetic = aesthetic_breakdown(out, {{scorers[0], config.alpha},
                                            {scorers[1], config.beta},
                                            {scorers[2], 1.0 - config.alpha - config.beta}});
  }
  return r;
}

}  // namespace retouch
