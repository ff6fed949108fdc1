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

#include "alpr/recognize.hpp"

#include <algorithm>
#include <random>

#include "alpr/stable_hash.hpp"

namespace alpr {

std::vector<std::string> check_classifier(const CharClassifierConfig& config, const netspec::ArchSpec& arch) {
  std::vector<std::string> problems;
  if (config.padding < 0.0) problems.push_back("padding must be non-negative");
  const int want = static_cast<int>(domain_size(config.domain));
  if (arch.classes != want) {
    problems.push_back(std::string(domain_name(config.domain)) + " classifier needs " + std::to_string(want) +
                       " classes, arch '" + arch.name + "' has " + std::to_string(arch.classes));
  }
  for (const auto& v : netspec::validate(arch).violations) problems.push_back(arch.name + ": " + v.message);
  return problems;
}

SlotPrediction classify_slot(const CharClassifierBackend& backend, const ImageRef& char_patch,
                             const CharClassifierConfig& config) {
  const ImageRef padded = char_patch.with_patch(pad_pixels(char_patch.patch, config.padding, char_patch.frame));
  const auto s = backend.scores(padded, config.domain);
  if (s.size() != domain_size(config.domain)) {
    throw BackendUnavailable("classifier returned " + std::to_string(s.size()) + " scores for " +
                             std::string(domain_name(config.domain)));
  }
  const auto best = std::max_element(s.begin(), s.end());
  return {domain_label(config.domain, std::size_t(best - s.begin())), std::clamp(*best, 0.0, 1.0)};
}

PlateReading read_plate(const std::array<ImageRef, kPlateSlots>& slots, const CharClassifierConfig& letters,
                        const CharClassifierConfig& digits, const CharClassifierBackend& backend) {
  if (letters.domain != CharDomain::kLetters || digits.domain != CharDomain::kDigits) {
    throw std::invalid_argument("read_plate needs a letters and a digits classifier");
  }
  const auto& layout = PlateLayout::brazilian();
  std::array<char, kPlateSlots> labels{};
  std::array<double, kPlateSlots> conf{};
  for (std::size_t i = 0; i < kPlateSlots; ++i) {
    const auto& cfg = layout.slots[i] == CharDomain::kLetters ? letters : digits;
    const auto p = classify_slot(backend, slots[i], cfg);
    labels[i] = p.label;
    conf[i] = p.confidence;
  }
  return {LPString::from_slots(labels), conf};
}

OracleCharClassifier::OracleCharClassifier(std::shared_ptr<const SceneStore> scenes, std::uint64_t seed,
                                           double confusion_rate, ConfusionMatrix confusion)
    : scenes_(std::move(scenes)), seed_(seed), confusion_rate_(confusion_rate), confusion_(std::move(confusion)) {
  if (!(confusion_rate_ >= 0.0 && confusion_rate_ <= 1.0)) {
    throw std::invalid_argument("confusion rate must lie in [0,1]");
  }
}

std::vector<double> OracleCharClassifier::scores(const ImageRef& patch, CharDomain domain) const {
  const auto* objects = scenes_ ? scenes_->find(patch.source) : nullptr;
  if (!objects) throw BackendUnavailable("oracle classifier has no scene for '" + patch.source + "'");

  std::vector<double> out(domain_size(domain), 0.0);
  const SceneObject* best = nullptr;
  double best_iou = 0.0;
  for (const auto& obj : *objects) {
    if (obj.target != DetectionTarget::kCharacter) continue;
    const double v = iou(obj.box, patch.patch);
    if (v > best_iou) {
      best_iou = v;
      best = &obj;
    }
  }
  if (!best || !in_domain(domain, best->label)) return out;

  auto rng = StableHash(seed_)
                 .add(patch.source)
                 .add(patch.patch.x)
                 .add(patch.patch.y)
                 .add(patch.patch.w)
                 .add(patch.patch.h)
                 .add(static_cast<int>(domain))
                 .rng();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  char label = best->label;

  if (const auto it = confusion_.find(label); it != confusion_.end()) {
    double u = unit(rng);
    for (const auto& [to, p] : it->second) {
      if (u < p) {
        if (in_domain(domain, to)) label = to;
        break;
      }
      u -= p;
    }
  } else if (confusion_rate_ > 0.0 && unit(rng) < confusion_rate_) {
    const std::size_t n = domain_size(domain);
    const std::size_t shift = 1 + std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    label = domain_label(domain, (*domain_index(domain, label) + shift) % n);
  }
  out[*domain_index(domain, label)] = 1.0;
  return out;
}

}  // namespace alpr
