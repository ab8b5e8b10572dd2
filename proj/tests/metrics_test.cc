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
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "retouch/errors.h"
#include "retouch/metrics.h"
#include "test_util.h"

namespace retouch {
namespace {

using testing::error_code_of;
using testing::random_image;
using testing::uniform_image;

// ---------------------------------------------------------------- scalar oracles
// Straight-line recomputations that share no code with the library.

double oracle_luma(const Image& img, int x, int y) {
  const PixelRGB p = img.at(x, y);
  return 0.2126 * p.r + 0.7152 * p.g + 0.0722 * p.b;
}

std::vector<double> oracle_hist(const std::vector<double>& values) {
  std::vector<double> h(64, 0.0);
  for (double v : values) {
    int bin = static_cast<int>(std::floor(v * 64.0));
    bin = std::clamp(bin, 0, 63);
    h[bin] += 1.0;
  }
  for (double& c : h) c /= static_cast<double>(values.size());
  return h;
}

double oracle_intersection(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::min(a[i], b[i]);
  return s;
}

std::vector<double> oracle_lumas(const Image& img) {
  std::vector<double> out;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.push_back(oracle_luma(img, x, y));
  }
  return out;
}

std::vector<double> oracle_contrast(const Image& img) {
  std::vector<double> out;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double sum = 0.0;
      int n = 0;
      for (int dy = -3; dy <= 4; ++dy) {
        for (int dx = -3; dx <= 4; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= img.width() || yy >= img.height()) continue;
          sum += oracle_luma(img, xx, yy);
          ++n;
        }
      }
      out.push_back(std::min(1.0, 4.0 * std::abs(oracle_luma(img, x, y) - sum / n)));
    }
  }
  return out;
}

std::vector<double> oracle_saturation(const Image& img) {
  std::vector<double> out;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const PixelRGB p = img.pixel(i);
    const double mx = std::max({p.r, p.g, p.b}), mn = std::min({p.r, p.g, p.b});
    out.push_back(mx > 0.0 ? (mx - mn) / mx : 0.0);
  }
  return out;
}

double oracle_ssim(const Image& a, const Image& b) {
  const int w = a.width(), h = a.height();
  double total = 0.0;
  int windows = 0;
  for (int y0 = 0; y0 + 8 <= h; ++y0) {
    for (int x0 = 0; x0 + 8 <= w; ++x0) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (int y = y0; y < y0 + 8; ++y) {
        for (int x = x0; x < x0 + 8; ++x) {
          const double p = oracle_luma(a, x, y), q = oracle_luma(b, x, y);
          sa += p;
          sb += q;
          saa += p * p;
          sbb += q * q;
          sab += p * q;
        }
      }
      const double ma = sa / 64, mb = sb / 64;
      const double va = saa / 64 - ma * ma, vb = sbb / 64 - mb * mb, cab = sab / 64 - ma * mb;
      const double c1 = 1e-4, c2 = 9e-4;
      total += (2 * ma * mb + c1) * (2 * cab + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  return total / windows;
}

// ---------------------------------------------------------------- histograms

TEST(Histogram, BinEdges) {
  EXPECT_EQ(histogram_bin(0.0), 0u);
  EXPECT_EQ(histogram_bin(1.0 / 64.0 - 1e-12), 0u);
  EXPECT_EQ(histogram_bin(1.0 / 64.0), 1u);
  EXPECT_EQ(histogram_bin(0.5), 32u);
  EXPECT_EQ(histogram_bin(1.0), 63u);
  EXPECT_EQ(histogram_bin(-0.2), 0u);
  EXPECT_EQ(histogram_bin(1.7), 63u);
  EXPECT_EQ(histogram_bin(NAN), 0u);
}

TEST(Histogram, NormalizedBinsSumToOne) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(1001);
  for (double& x : v) x = u(gen);
  const auto h = histogram(v).normalized();
  double sum = 0.0;
  for (double b : h) {
    EXPECT_GE(b, 0.0);
    sum += b;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_EQ(error_code_of([] { histogram(std::vector<double>{}); }), ErrorCode::kEmptyImage);
}

TEST(Histogram, IntersectionIsSymmetricBoundedAndOneOnlyForEqual) {
  const Histogram a = histogram(std::vector<double>{0.1, 0.2, 0.2, 0.9});
  const Histogram b = histogram(std::vector<double>{0.1, 0.5, 0.9});
  const Histogram a2 = histogram(std::vector<double>{0.1, 0.1, 0.2, 0.2, 0.2, 0.2, 0.9, 0.9});
  EXPECT_EQ(histogram_intersection(a, b), histogram_intersection(b, a));
  EXPECT_EQ(histogram_intersection(a, b), 0.5);  // bins 0.1 and 0.9: min(1/4, 1/3) each
  EXPECT_EQ(histogram_intersection(a, a), 1.0);
  EXPECT_EQ(histogram_intersection(a, a2), 1.0);  // same distribution, different counts
  EXPECT_LT(histogram_intersection(a, b), 1.0);
}

TEST(HistSuite, IdenticalImagesScoreExactlyOne) {
  const Image img = random_image(23, 17, 3);
  const HistScores s = hist_suite(img, img);
  EXPECT_EQ(s.hist_l, 1.0);
  EXPECT_EQ(s.hist_c, 1.0);
  EXPECT_EQ(s.hist_s, 1.0);
  EXPECT_EQ(s.hist_m, 1.0);
}

TEST(HistSuite, BlackVersusWhiteHasDisjointLuma) {
  const HistScores s =
      hist_suite(uniform_image(8, 8, 0.f, 0.f, 0.f), uniform_image(5, 3, 1.f, 1.f, 1.f));
  EXPECT_EQ(s.hist_l, 0.0);
  EXPECT_EQ(s.hist_c, 1.0);  // both flat
  EXPECT_EQ(s.hist_s, 1.0);  // both gray
}

TEST(HistSuite, MatchesScalarOracleOnRandomImages) {
  const Image a = random_image(32, 32, 11), b = random_image(32, 32, 12);
  const HistScores s = hist_suite(a, b);
  const double l = oracle_intersection(oracle_hist(oracle_lumas(a)), oracle_hist(oracle_lumas(b)));
  const double c =
      oracle_intersection(oracle_hist(oracle_contrast(a)), oracle_hist(oracle_contrast(b)));
  const double sat =
      oracle_intersection(oracle_hist(oracle_saturation(a)), oracle_hist(oracle_saturation(b)));
  EXPECT_NEAR(s.hist_l, l, 1e-12);
  EXPECT_NEAR(s.hist_c, c, 1e-12);
  EXPECT_NEAR(s.hist_s, sat, 1e-12);
  EXPECT_NEAR(s.hist_m, (l + c + sat) / 3.0, 1e-12);
  EXPECT_LT(s.hist_m, 1.0);
}

TEST(HistSuite, LocalContrastOfAStepEdge) {
  // Left half black, right half white, 16×4: at x = 7 the window spans
  // x = 4 … 11, half white, so the mean is 0.5 and the value is 4·0.5 → 1.
  Image img(16, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 8; x < 16; ++x) img.set_pixel(y * 16 + x, {1.0, 1.0, 1.0});
  }
  const auto c = local_contrast_values(img);
  EXPECT_DOUBLE_EQ(c[7], 1.0);
  EXPECT_DOUBLE_EQ(c[0], 0.0);   // window x = 0 … 4 is all black
  EXPECT_DOUBLE_EQ(c[15], 0.0);  // window x = 12 … 15 is all white
  // x = 4: window 1 … 8 holds one white column of eight → mean 1/8.
  EXPECT_DOUBLE_EQ(c[4], 0.5);
}

TEST(HistSuite, RejectsEmptyImages) {
  EXPECT_EQ(error_code_of([] { hist_suite(Image(), random_image(2, 2, 1)); }),
            ErrorCode::kEmptyImage);
}

// ---------------------------------------------------------------- fidelity

TEST(Fidelity, IdenticalImagesAreExact) {
  const Image img = random_image(19, 13, 4);
  EXPECT_EQ(psnr(img, img), 99.0);
  EXPECT_EQ(ssim(img, img), 1.0);
  EXPECT_EQ(l1_distance(img, img), 0.0);
}

TEST(Fidelity, UniformOffsetOfOneTenth) {
  const Image a = uniform_image(10, 10, 0.5f, 0.5f, 0.5f);
  const Image b = uniform_image(10, 10, 0.6f, 0.6f, 0.6f);
  EXPECT_NEAR(l1_distance(a, b), 0.1, 1e-7);
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-5);
}

TEST(Fidelity, MatchesScalarOracleOnRandomImages) {
  const Image a = random_image(24, 20, 5), b = random_image(24, 20, 6);
  double se = 0.0, ae = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = static_cast<double>(a.data()[i]) - b.data()[i];
    se += d * d;
    ae += std::abs(d);
  }
  const double n = static_cast<double>(a.data().size());
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(n / se), 1e-10);
  EXPECT_NEAR(l1_distance(a, b), ae / n, 1e-10);
  EXPECT_NEAR(ssim(a, b), oracle_ssim(a, b), 1e-10);
  EXPECT_LT(ssim(a, b), 0.5);
}

TEST(Fidelity, SsimOnTinyImagesUsesOneWindow) {
  const Image a = random_image(5, 3, 7);
  EXPECT_EQ(ssim(a, a), 1.0);
  EXPECT_LT(ssim(a, random_image(5, 3, 8)), 1.0);
}

TEST(Fidelity, RejectsMismatchedDimensions) {
  const Image a = random_image(4, 4, 1), b = random_image(4, 5, 1);
  EXPECT_EQ(error_code_of([&] { psnr(a, b); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(error_code_of([&] { ssim(a, b); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(error_code_of([&] { l1_distance(a, b); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(error_code_of([] { psnr(Image(), Image()); }), ErrorCode::kEmptyImage);
}

// ---------------------------------------------------------------- similarity

TEST(RewardSimilarity, IdenticalImagesScoreOneForAnyGamma) {
  const Image img = random_image(16, 16, 9);
  for (double g : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(reward_similarity(img, img, g), 1.0, 1e-12) << g;
  }
  EXPECT_EQ(reward_similarity(img, img, 0.5), 1.0);
}

TEST(RewardSimilarity, BlackVersusWhiteIsZero) {
  const Image black = uniform_image(8, 8, 0.f, 0.f, 0.f);
  const Image white = uniform_image(8, 8, 1.f, 1.f, 1.f);
  const SimilarityBreakdown s = similarity_breakdown(black, white, 0.5);
  EXPECT_EQ(s.hist_sim, 0.0);
  EXPECT_EQ(s.l1, 1.0);
  EXPECT_EQ(s.value, 0.0);
}

TEST(RewardSimilarity, MatchesScalarOracle) {
  const Image a = random_image(20, 20, 13), b = random_image(20, 20, 14);
  std::vector<double> fa, fb;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> va, vb;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
      va.push_back(a.data()[3 * i + c]);
      vb.push_back(b.data()[3 * i + c]);
    }
    for (double v : oracle_hist(va)) fa.push_back(v);
    for (double v : oracle_hist(vb)) fb.push_back(v);
  }
  double dot = 0, na = 0, nb = 0, l1 = 0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    dot += fa[i] * fb[i];
    na += fa[i] * fa[i];
    nb += fb[i] * fb[i];
  }
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    l1 += std::abs(static_cast<double>(a.data()[i]) - b.data()[i]);
  }
  l1 /= static_cast<double>(a.data().size());
  const double expected = 0.5 * dot / (std::sqrt(na) * std::sqrt(nb)) + 0.5 * (1.0 - l1);
  EXPECT_NEAR(reward_similarity(a, b, 0.5), expected, 1e-10);
}

TEST(RewardSimilarity, NonIncreasingInL1ForFixedHistogram) {
  // Swapping two pixels keeps every histogram but raises L1.
  const Image a = random_image(6, 6, 15);
  Image b = a, c = a;
  const PixelRGB p0 = a.pixel(0), p1 = a.pixel(1), p2 = a.pixel(2);
  b.set_pixel(0, p1);
  b.set_pixel(1, p0);
  c.set_pixel(0, p1);
  c.set_pixel(1, p2);
  c.set_pixel(2, p0);
  const SimilarityBreakdown sb = similarity_breakdown(b, a), sc = similarity_breakdown(c, a);
  EXPECT_NEAR(sb.hist_sim, 1.0, 1e-15);
  EXPECT_NEAR(sc.hist_sim, 1.0, 1e-15);
  if (sb.l1 <= sc.l1) {
    EXPECT_GE(sb.value, sc.value);
  } else {
    EXPECT_GE(sc.value, sb.value);
  }
}

TEST(RewardSimilarity, RejectsBadArguments) {
  const Image a = random_image(4, 4, 1);
  EXPECT_EQ(error_code_of([&] { reward_similarity(a, random_image(3, 4, 1)); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(error_code_of([&] { reward_similarity(a, a, 1.5); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { reward_similarity(a, a, -0.1); }), ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------- aesthetic

Scorer constant_scorer(std::string name, double v) {
  return {std::move(name), [v](const Image&) { return v; }};
}

TEST(RewardAesthetic, ConvexCombinationOfPerfectScoresIsOne) {
  const Image img = random_image(4, 4, 2);
  const std::array<Scorer, 3> ones = {constant_scorer("a", 1.0), constant_scorer("b", 1.0),
                                      constant_scorer("c", 1.0)};
  for (auto [alpha, beta] : {std::pair{0.4, 0.3}, {1.0, 0.0}, {0.0, 0.0}, {0.2, 0.8}}) {
    EXPECT_NEAR(reward_aesthetic(img, ones, alpha, beta), 1.0, 1e-15);
  }
}

TEST(RewardAesthetic, AlphaOneSelectsTheFirstScorer) {
  const Image img = random_image(4, 4, 2);
  const std::array<Scorer, 3> s = {constant_scorer("a", 0.3141), constant_scorer("b", 0.9),
                                   constant_scorer("c", 0.1)};
  EXPECT_EQ(reward_aesthetic(img, s, 1.0, 0.0), 0.3141);
}

TEST(RewardAesthetic, StubScorersOnMidGray) {
  const Image gray = uniform_image(8, 8, 0.5f, 0.5f, 0.5f);
  EXPECT_EQ(score_clipping_complement(gray), 1.0);
  EXPECT_EQ(score_mean_saturation(gray), 0.0);
  EXPECT_EQ(score_midtone_contrast(gray), 0.0);
  // 0.4·0 + 0.3·0 + 0.3·1
  EXPECT_NEAR(reward_aesthetic(gray, stub_scorers()), 0.3, 1e-15);
}

TEST(RewardAesthetic, StubScorersOnCraftedImages) {
  // Half pure red (clipped, saturation 1), half mid gray.
  Image img(4, 1);
  img.set_pixel(0, {1.0, 0.0, 0.0});
  img.set_pixel(1, {1.0, 0.0, 0.0});
  img.set_pixel(2, {0.5, 0.5, 0.5});
  img.set_pixel(3, {0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(score_clipping_complement(img), 0.5);
  EXPECT_DOUBLE_EQ(score_mean_saturation(img), 0.5);
  // Red has luma 0.2126 (a mid-tone); std of {0.2126, 0.2126, 0.5, 0.5} = 0.1437.
  EXPECT_NEAR(score_midtone_contrast(img), 4.0 * 0.1437, 1e-12);
  const auto names = stub_scorers();
  EXPECT_EQ(names[0].name, "mean-saturation");
  EXPECT_EQ(names[1].name, "midtone-contrast");
  EXPECT_EQ(names[2].name, "clipping-complement");
}

TEST(RewardAesthetic, InvariantUnderPermutingScorerWeightPairs) {
  const Image img = random_image(12, 12, 3);
  const auto s = stub_scorers();
  const std::vector<WeightedScorer> a = {{s[0], 0.4}, {s[1], 0.3}, {s[2], 0.3}};
  const std::vector<WeightedScorer> b = {{s[2], 0.3}, {s[0], 0.4}, {s[1], 0.3}};
  EXPECT_NEAR(reward_aesthetic(img, a), reward_aesthetic(img, b), 1e-15);
  EXPECT_NEAR(reward_aesthetic(img, a), reward_aesthetic(img, s, 0.4, 0.3), 1e-15);
}

TEST(RewardAesthetic, ScorerFailuresNameTheScorer) {
  const Image img = random_image(4, 4, 2);
  const Scorer broken{"broken-model", [](const Image&) -> double {
                        throw std::runtime_error("weights missing");
                      }};
  try {
    reward_aesthetic(img, {constant_scorer("a", 0.5), broken, constant_scorer("c", 0.5)});
    FAIL() << "scorer failure swallowed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kScorerFailure);
    EXPECT_NE(std::string(e.what()).find("broken-model"), std::string::npos);
  }
  EXPECT_EQ(error_code_of([&] {
              reward_aesthetic(img, {constant_scorer("a", 1.5), constant_scorer("b", 0.5),
                                     constant_scorer("c", 0.5)});
            }),
            ErrorCode::kScorerFailure);
}

TEST(RewardAesthetic, RejectsInvalidWeights) {
  const Image img = random_image(4, 4, 2);
  EXPECT_EQ(error_code_of([&] { reward_aesthetic(img, stub_scorers(), 0.8, 0.3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { reward_aesthetic(img, stub_scorers(), -0.1, 0.3); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] {
              reward_aesthetic(img, std::vector<WeightedScorer>{{stub_scorers()[0], 0.5}});
            }),
            ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------- reasoning

TEST(ParseReasoning, EmptyTextHasNoFlags) {
  const ReasoningDoc doc = parse_reasoning("");
  EXPECT_TRUE(doc.events.empty());
  EXPECT_EQ(doc.tag_count(), 0u);
  for (bool t : doc.tokens) EXPECT_FALSE(t);
}

TEST(ParseReasoning, FullTemplateKeepsDocumentOrder) {
  const ReasoningDoc doc = parse_reasoning(reasoning_examples::complete());
  EXPECT_EQ(doc.tag_count(), 12u);
  for (bool t : doc.tokens) EXPECT_TRUE(t);
  ASSERT_EQ(doc.events.size(), 15u);
  std::vector<std::size_t> tag_order;
  for (const ReasoningEvent& e : doc.events) {
    if (e.kind == ReasoningEvent::Kind::kTag) tag_order.push_back(e.index);
  }
  EXPECT_EQ(tag_order, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}));
  for (std::size_t i = 1; i < doc.events.size(); ++i) {
    EXPECT_LT(doc.events[i - 1].offset, doc.events[i].offset);
  }
  // Tokens sit between the last start and end tags.
  EXPECT_EQ(doc.events[11].kind, ReasoningEvent::Kind::kToken);
  EXPECT_EQ(doc.events[14].index, 11u);
}

TEST(ParseReasoning, TagsInsideSentencesAndDuplicates) {
  const ReasoningDoc doc =
      parse_reasoning("so the<plan start>idea is <plan start>x<plan end> then <|Param Retouch|>.");
  EXPECT_EQ(doc.events.size(), 4u);
  EXPECT_EQ(doc.tag_count(), 2u);
  EXPECT_TRUE(doc.tokens[2]);
  EXPECT_FALSE(doc.tokens[0]);
  // Near-misses are not tags.
  EXPECT_EQ(parse_reasoning("<Plan start> <plan  start> <plan start").tag_count(), 0u);
}

TEST(RewardFormat, ReferenceDocuments) {
  EXPECT_NEAR(reward_format(reasoning_examples::complete()), 1.0, 1e-9);
  EXPECT_NEAR(reward_format(reasoning_examples::half_tags()), 0.5, 1e-9);
  EXPECT_NEAR(reward_format(reasoning_examples::missing_token()), -4.0, 1e-9);
  EXPECT_EQ(reward_format(""), -5.0);
}

TEST(RewardFormat, TaskSpecificTokenCheck) {
  const std::string doc = reasoning_examples::missing_token();  // lacks the Style token
  EXPECT_EQ(reward_format(doc, RetouchTask::kAuto), 1.0);
  EXPECT_EQ(reward_format(doc, RetouchTask::kParam), 1.0);
  EXPECT_EQ(reward_format(doc, RetouchTask::kStyle), -4.0);
  const FormatBreakdown f = format_breakdown(reasoning_examples::half_tags(), RetouchTask::kStyle);
  EXPECT_EQ(f.tag_ratio, 0.5);
  EXPECT_EQ(f.penalty, 0.0);
}

TEST(RewardFormat, DependsOnlyOnPresence) {
  std::vector<std::string> lines;
  std::istringstream in(reasoning_examples::complete());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::reverse(lines.begin(), lines.end());
  std::string shuffled = "Some preamble. ";
  for (const auto& l : lines) shuffled += l + " and more prose ";
  EXPECT_EQ(reward_format(shuffled), reward_format(reasoning_examples::complete()));
  EXPECT_EQ(reward_format(shuffled + reasoning_examples::complete()), 1.0);
}

TEST(RewardFormat, TaskNames) {
  EXPECT_EQ(parse_task("auto"), RetouchTask::kAuto);
  EXPECT_EQ(parse_task("style"), RetouchTask::kStyle);
  EXPECT_EQ(parse_task("param"), RetouchTask::kParam);
  EXPECT_EQ(task_name(RetouchTask::kStyle), "style");
  EXPECT_EQ(error_code_of([] { parse_task("Auto"); }), ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------- combined

TEST(EvaluateRewards, AestheticOnlyForAutoTask) {
  const Image out = random_image(8, 8, 20), tar = random_image(8, 8, 21);
  const RewardReport autor =
      evaluate_rewards(reasoning_examples::complete(), out, tar, RetouchTask::kAuto);
  ASSERT_TRUE(autor.aesthetic.has_value());
  EXPECT_EQ(autor.r_a(), reward_aesthetic(out, stub_scorers(), 0.4, 0.3));
  EXPECT_EQ(autor.r_f(), 1.0);
  EXPECT_EQ(autor.r_s(), reward_similarity(out, tar, 0.5));
  const RewardReport param =
      evaluate_rewards(reasoning_examples::complete(), out, tar, RetouchTask::kParam);
  EXPECT_FALSE(param.aesthetic.has_value());
  EXPECT_EQ(param.r_a(), 0.0);
  for (const RewardReport& r : {autor, param}) {
    EXPECT_GE(r.r_s(), 0.0);
    EXPECT_LE(r.r_s(), 1.0);
    EXPECT_GE(r.r_f(), -5.0);
    EXPECT_LE(r.r_f(), 1.0);
  }
}

}  // namespace
}  // namespace retouch
