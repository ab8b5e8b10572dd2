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
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace retouch {

enum class Category { kLight = 0, kGlobalColor = 1, kSpecificColor = 2 };

inline constexpr std::size_t kNumParams = 38;
inline constexpr std::size_t kNumCategories = 3;

// Parameter slots in table order: ten light controls, four global colour
// controls, then hue / saturation / luminance for eight colour bands.
enum class ParamId : std::size_t {
  kExposure2012,
  kContrast2012,
  kHighlights2012,
  kShadows2012,
  kWhites2012,
  kBlacks2012,
  kParametricShadows,
  kParametricDarks,
  kParametricLights,
  kParametricHighlights,
  kIncrementalTemperature,
  kIncrementalTint,
  kVibrance,
  kSaturation,
  kHueRed,
  kHueOrange,
  kHueYellow,
  kHueGreen,
  kHueAqua,
  kHueBlue,
  kHuePurple,
  kHueMagenta,
  kSatRed,
  kSatOrange,
  kSatYellow,
  kSatGreen,
  kSatAqua,
  kSatBlue,
  kSatPurple,
  kSatMagenta,
  kLumRed,
  kLumOrange,
  kLumYellow,
  kLumGreen,
  kLumAqua,
  kLumBlue,
  kLumPurple,
  kLumMagenta,
};

constexpr std::size_t index_of(ParamId id) { return static_cast<std::size_t>(id); }

struct OperatorInfo {
  std::string_view name;
  Category category;
  double range_max;  // symmetric range [-range_max, range_max]
  double stddev;     // perturbation stddev in raw units
};

inline constexpr std::array<OperatorInfo, kNumParams> kOperators = {{
    {"Exposure2012", Category::kLight, 5.0, 0.6543},
    {"Contrast2012", Category::kLight, 100.0, 12.6789},
    {"Highlights2012", Category::kLight, 100.0, 21.5888},
    {"Shadows2012", Category::kLight, 100.0, 16.2265},
    {"Whites2012", Category::kLight, 100.0, 16.4355},
    {"Blacks2012", Category::kLight, 100.0, 15.5995},
    {"ParametricShadows", Category::kLight, 100.0, 7.2495},
    {"ParametricDarks", Category::kLight, 100.0, 15.8214},
    {"ParametricLights", Category::kLight, 100.0, 7.6688},
    {"ParametricHighlights", Category::kLight, 100.0, 9.1287},
    {"IncrementalTemperature", Category::kGlobalColor, 100.0, 15.0000},
    {"IncrementalTint", Category::kGlobalColor, 100.0, 15.0000},
    {"Vibrance", Category::kGlobalColor, 100.0, 7.8137},
    {"Saturation", Category::kGlobalColor, 100.0, 7.4315},
    {"HueAdjustmentRed", Category::kSpecificColor, 100.0, 5.8140},
    {"HueAdjustmentOrange", Category::kSpecificColor, 100.0, 8.3549},
    {"HueAdjustmentYellow", Category::kSpecificColor, 100.0, 15.1914},
    {"HueAdjustmentGreen", Category::kSpecificColor, 100.0, 8.4875},
    {"HueAdjustmentAqua", Category::kSpecificColor, 100.0, 19.8922},
    {"HueAdjustmentBlue", Category::kSpecificColor, 100.0, 11.8419},
    {"HueAdjustmentPurple", Category::kSpecificColor, 100.0, 10.1451},
    {"HueAdjustmentMagenta", Category::kSpecificColor, 100.0, 19.0949},
    {"SaturationAdjustmentRed", Category::kSpecificColor, 100.0, 19.8318},
    {"SaturationAdjustmentOrange", Category::kSpecificColor, 100.0, 9.6656},
    {"SaturationAdjustmentYellow", Category::kSpecificColor, 100.0, 18.2479},
    {"SaturationAdjustmentGreen", Category::kSpecificColor, 100.0, 17.7113},
    {"SaturationAdjustmentAqua", Category::kSpecificColor, 100.0, 7.4975},
    {"SaturationAdjustmentBlue", Category::kSpecificColor, 100.0, 15.6967},
    {"SaturationAdjustmentPurple", Category::kSpecificColor, 100.0, 21.7025},
    {"SaturationAdjustmentMagenta", Category::kSpecificColor, 100.0, 27.8002},
    {"LuminanceAdjustmentRed", Category::kSpecificColor, 100.0, 10.0289},
    {"LuminanceAdjustmentOrange", Category::kSpecificColor, 100.0, 13.4234},
    {"LuminanceAdjustmentYellow", Category::kSpecificColor, 100.0, 16.2116},
    {"LuminanceAdjustmentGreen", Category::kSpecificColor, 100.0, 28.3202},
    {"LuminanceAdjustmentAqua", Category::kSpecificColor, 100.0, 17.1250},
    {"LuminanceAdjustmentBlue", Category::kSpecificColor, 100.0, 22.4162},
    {"LuminanceAdjustmentPurple", Category::kSpecificColor, 100.0, 18.2913},
    {"LuminanceAdjustmentMagenta", Category::kSpecificColor, 100.0, 25.4936},
}};

// First slot and slot count of each category inside the table order.
struct CategorySpan {
  std::size_t first;
  std::size_t count;
};

constexpr CategorySpan category_span(Category c) {
  switch (c) {
    case Category::kLight: return {0, 10};
    case Category::kGlobalColor: return {10, 4};
    default: return {14, 24};
  }
}

std::optional<std::size_t> find_param(std::string_view name);

struct CategoryMask {
  bool light = false;
  bool global_color = false;
  bool specific_color = false;

  static constexpr CategoryMask all() { return {true, true, true}; }
  static constexpr CategoryMask none() { return {false, false, false}; }

  bool active(Category c) const {
    switch (c) {
      case Category::kLight: return light;
      case Category::kGlobalColor: return global_color;
      default: return specific_color;
    }
  }
  bool any() const { return light || global_color || specific_color; }

  // bit0 = light, bit1 = global colour, bit2 = specific colour.
  unsigned bits() const {
    return (light ? 1u : 0u) | (global_color ? 2u : 0u) |
           (specific_color ? 4u : 0u);
  }
  static CategoryMask from_bits(unsigned bits) {
    return {(bits & 1u) != 0, (bits & 2u) != 0, (bits & 4u) != 0};
  }

  // Parses flag strings such as "L", "GS", "LGS" (case-insensitive; "C" is
  // accepted as an alias of "S"). Throws kInvalidArgument on anything else.
  static CategoryMask parse(std::string_view flags);
  std::string to_string() const;  // "L+GC+SC" style label

  bool operator==(const CategoryMask&) const = default;
};

// The seven non-empty combinations in the order L, GC, SC, L+GC, L+SC,
// GC+SC, L+GC+SC.
const std::array<CategoryMask, 7>& all_masks();

// The 38 retouching controls in raw slider units.
class ParamVector {
 public:
  ParamVector() { raw_.fill(0.0); }

  double operator[](std::size_t i) const { return raw_[i]; }
  double& operator[](std::size_t i) { return raw_[i]; }
  double get(ParamId id) const { return raw_[index_of(id)]; }
  void set(ParamId id, double value) { raw_[index_of(id)] = value; }

  const std::array<double, kNumParams>& raw() const { return raw_; }

  // raw_i / range_max_i, in [-1, 1] for in-range vectors.
  std::array<double, kNumParams> normalized() const;
  static ParamVector from_normalized(const std::array<double, kNumParams>& v);

  bool is_zero() const;
  bool in_range() const;
  // Throws kOutOfRangeParam naming the first offending control.
  void validate() const;

  // Copy with every control outside the active categories set to zero.
  ParamVector masked(const CategoryMask& mask) const;
  ParamVector negated() const;

  bool operator==(const ParamVector&) const = default;

 private:
  std::array<double, kNumParams> raw_;
};

// Key-value JSON object keyed by control name; unknown keys are rejected
// (kUnknownKey) and missing keys default to zero.
nlohmann::json params_to_json(const ParamVector& params);
ParamVector params_from_json(const nlohmann::json& j);

}  // namespace retouch
