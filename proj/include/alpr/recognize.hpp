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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "alpr/detect.hpp"
#include "alpr/netspec.hpp"
#include "alpr/plate.hpp"

namespace alpr {

struct CharClassifierConfig {
  CharDomain domain = CharDomain::kLetters;
  std::string arch;
  double padding = 1.0;  // pixels added on every side of the segmented box
  netspec::TensorShape input_size;

  static CharClassifierConfig letters(double padding = 1.0) {
    return {CharDomain::kLetters, "cr-net-letters", padding, {270, 80, 3}};
  }
  static CharClassifierConfig digits(double padding = 1.0) {
    return {CharDomain::kDigits, "cr-net-digits", padding, {42, 26, 3}};
  }
  bool operator==(const CharClassifierConfig&) const = default;
};

/// Problems with a classifier configuration against its architecture (empty when fine).
std::vector<std::string> check_classifier(const CharClassifierConfig& config, const netspec::ArchSpec& arch);

/// Per-class scores for a character patch, one per label of `domain` in
/// domain_label() order. Must be callable concurrently.
class CharClassifierBackend {
 public:
  virtual ~CharClassifierBackend() = default;
  virtual std::vector<double> scores(const ImageRef& patch, CharDomain domain) const = 0;
};

struct SlotPrediction {
  char label = 0;
  double confidence = 0.0;
};

/// Pads the patch, scores it and returns the arg-max label. Never abstains:
/// the threshold is 0 and the lowest index wins ties.
SlotPrediction classify_slot(const CharClassifierBackend& backend, const ImageRef& char_patch,
                             const CharClassifierConfig& config);

struct PlateReading {
  LPString text;
  std::array<double, kPlateSlots> confidences{};

  bool operator==(const PlateReading&) const = default;
};

/// Classifies ordered character patches, letter slots with `letters` and digit
/// slots with `digits`, per the Brazilian layout.
PlateReading read_plate(const std::array<ImageRef, kPlateSlots>& slots, const CharClassifierConfig& letters,
                        const CharClassifierConfig& digits, const CharClassifierBackend& backend);

/// For each true label, the probability of reporting another label instead.
/// Remaining mass stays on the true label.
using ConfusionMatrix = std::map<char, std::vector<std::pair<char, double>>>;

/// Classifier that reads labels from annotations: the annotated character
/// with the largest IoU against the patch gets score 1. `confusion_rate`
/// swaps in a uniformly drawn wrong label of the same domain; `confusion`
/// applies explicit substitutions. Patches that match no character of the
/// domain score all zeros.
class OracleCharClassifier : public CharClassifierBackend {
 public:
  OracleCharClassifier(std::shared_ptr<const SceneStore> scenes, std::uint64_t seed = 0, double confusion_rate = 0.0,
                       ConfusionMatrix confusion = {});

  std::vector<double> scores(const ImageRef& patch, CharDomain domain) const override;

 private:
  std::shared_ptr<const SceneStore> scenes_;
  std::uint64_t seed_;
  double confusion_rate_;
  ConfusionMatrix confusion_;
};

}  // namespace alpr
