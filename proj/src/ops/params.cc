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

#include "retouch/params.h"

#include <cctype>
#include <cmath>
#include <string>

#include "retouch/errors.h"

namespace retouch {

std::optional<std::size_t> find_param(std::string_view name) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (kOperators[i].name == name) return i;
  }
  return std::nullopt;
}

CategoryMask CategoryMask::parse(std::string_view flags) {
  CategoryMask mask;
  for (char ch : flags) {
    switch (std::toupper(static_cast<unsigned char>(ch))) {
      case 'L': mask.light = true; break;
      case 'G': mask.global_color = true; break;
      case 'S':
      case 'C': mask.specific_color = true; break;
      default:
        throw Error(ErrorCode::kInvalidArgument,
                    "mask flags must be drawn from L, G, S; got '" +
                        std::string(flags) + "'");
    }
  }
  if (!mask.any()) {
    throw Error(ErrorCode::kInvalidArgument, "mask must activate a category");
  }
  return mask;
}

std::string CategoryMask::to_string() const {
  std::string out;
  auto append = [&out](const char* label) {
    if (!out.empty()) out += '+';
    out += label;
  };
  if (light) append("L");
  if (global_color) append("GC");
  if (specific_color) append("SC");
  return out.empty() ? "none" : out;
}

const std::array<CategoryMask, 7>& all_masks() {
  static const std::array<CategoryMask, 7> masks = {{
      {true, false, false},
      {false, true, false},
      {false, false, true},
      {true, true, false},
      {true, false, true},
      {false, true, true},
      {true, true, true},
  }};
  return masks;
}

std::array<double, kNumParams> ParamVector::normalized() const {
  std::array<double, kNumParams> out;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    out[i] = raw_[i] / kOperators[i].range_max;
  }
  return out;
}

ParamVector ParamVector::from_normalized(
    const std::array<double, kNumParams>& v) {
  ParamVector p;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    p.raw_[i] = v[i] * kOperators[i].range_max;
  }
  return p;
}

bool ParamVector::is_zero() const {
  for (double v : raw_) {
    if (v != 0.0) return false;
  }
  return true;
}

bool ParamVector::in_range() const {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (!std::isfinite(raw_[i]) || std::abs(raw_[i]) > kOperators[i].range_max) {
      return false;
    }
  }
  return true;
}

void ParamVector::validate() const {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const double limit = kOperators[i].range_max;
    if (!std::isfinite(raw_[i]) || std::abs(raw_[i]) > limit) {
      throw Error(ErrorCode::kOutOfRangeParam,
                  std::string(kOperators[i].name) + " = " +
                      std::to_string(raw_[i]) + " outside [" +
                      std::to_string(-limit) + ", " + std::to_string(limit) +
                      "]");
    }
  }
}

ParamVector ParamVector::masked(const CategoryMask& mask) const {
  ParamVector out = *this;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (!mask.active(kOperators[i].category)) out.raw_[i] = 0.0;
  }
  return out;
}

ParamVector ParamVector::negated() const {
  ParamVector out;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    // Keep zeros positive so negation never changes a zero control.
    out.raw_[i] = raw_[i] == 0.0 ? 0.0 : -raw_[i];
  }
  return out;
}

nlohmann::json params_to_json(const ParamVector& params) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kNumParams; ++i) {
    j[std::string(kOperators[i].name)] = params[i];
  }
  return j;
}

ParamVector params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kCorruptData, "parameter set must be a JSON object");
  }
  ParamVector p;
  for (const auto& [key, value] : j.items()) {
    const auto index = find_param(key);
    if (!index) throw Error(ErrorCode::kUnknownKey, "unknown parameter: " + key);
    if (!value.is_number()) {
      throw Error(ErrorCode::kCorruptData, "parameter " + key + " is not a number");
    }
    p[*index] = value.get<double>();
  }
  return p;
}

}  // namespace retouch
