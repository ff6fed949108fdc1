/*
 Copyright 2026 The alpr-cascade Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>

namespace alpr::augment {

/// kVertical turns a glyph upside down, kHorizontal mirrors it left-right,
/// kBoth does both (a 180 degree rotation).
enum class FlipDirection { kVertical, kHorizontal, kBoth };

struct FlipRule {
  char label = 0;
  bool vertical_ok = false;
  bool horizontal_ok = false;
  bool both_ok = false;
  char both_maps_to = 0;  // label after flipping both ways; '6' and '9' swap
};

/// Characters that stay valid training samples after a flip.
const std::vector<FlipRule>& flip_table();

struct FlipVariant {
  FlipDirection direction;
  char label;

  bool operator==(const FlipVariant&) const = default;
};

/// Empty for characters that cannot be flipped.
std::vector<FlipVariant> flip_variants(char label);

/// Digits reused as letter samples: 0 as O and 1 as I.
std::vector<std::pair<char, char>> digit_seed_letters();
std::optional<char> digit_seed_letter(char digit);

struct Transform {
  bool negative = false;
  std::optional<FlipDirection> flip;

  bool is_original() const { return !negative && !flip; }
  bool operator==(const Transform&) const = default;
};

/// orig | neg | flipV | flipH | flipVH | neg+flipV | neg+flipH | neg+flipVH
std::string to_string(const Transform& t);
Transform parse_transform(std::string_view s);

struct Sample {
  std::string source_id;
  Transform transform;
  char label = 0;

  bool operator==(const Sample&) const = default;
};

struct AugmentOptions {
  bool negatives = true;
  bool flip_letters = true;
  bool flip_digits = true;
  bool negate_flips = true;               // also emit negatives of flipped samples
  bool seed_letters_from_digits = false;  // emit '0' as 'O' and '1' as 'I'
};

/// Originals first, in input order, followed by each source's augmented
/// samples. Inputs that are not originals pass through without expansion.
std::vector<Sample> expand_training_set(std::span<const Sample> samples, const AugmentOptions& options);

/// One sample per line: `<source-id> <transform> <label>`. A two-field line
/// `<source-id> <label>` reads as an original.
std::vector<Sample> parse_manifest(std::string_view text);
std::string write_manifest(std::span<const Sample> samples);

class UnreadablePatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-pixel inversion v -> max - v for every channel.
cv::Mat negative(const cv::Mat& patch);
cv::Mat apply(const cv::Mat& patch, const Transform& t);

cv::Mat read_patch(const std::string& path);

}  // namespace alpr::augment
