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

#include "alpr/detect.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "alpr/stable_hash.hpp"

namespace alpr {

std::string_view target_name(DetectionTarget t) {
  switch (t) {
    case DetectionTarget::kVehicle:
      return "vehicle";
    case DetectionTarget::kPlate:
      return "plate";
    case DetectionTarget::kCharacter:
      return "character";
  }
  return "?";
}

bool detection_order(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return std::tie(a.box.x, a.box.y, a.class_id) < std::tie(b.box.x, b.box.y, b.class_id);
}

std::vector<Detection> detect(const DetectorBackend& backend, const ImageRef& image, const StageConfig& stage) {
  const BBox local{0.0, 0.0, image.patch.w, image.patch.h};
  std::vector<Detection> out;
  for (auto d : backend.raw_detect(image, stage)) {
    if (!d.box.is_valid() || intersection_area(d.box, local) <= 0.0) continue;
    d.confidence = std::clamp(d.confidence, 0.0, 1.0);
    if (d.confidence < stage.confidence_threshold) continue;
    d.box = clip_to_region(d.box, local);
    out.push_back(d);
  }
  std::sort(out.begin(), out.end(), detection_order);
  if (stage.select_policy == SelectPolicy::kSingleBest && out.size() > 1) out.resize(1);
  return out;
}

std::vector<VehicleCandidate> vehicle_stage(const DetectorBackend& backend, const ImageRef& frame,
                                            const StageConfig& config) {
  std::vector<VehicleCandidate> out;
  for (auto d : detect(backend, frame, config)) {
    d.box = clip_to_frame(to_absolute(d.box, frame.patch), frame.frame);
    out.push_back({d, expand_margin(d.box, config.margin, frame.frame)});
  }
  return out;
}

Detection lp_stage(const DetectorBackend& backend, const ImageRef& vehicle_patch, const StageConfig& config) {
  StageConfig stage = config;
  stage.confidence_threshold = 0.0;
  stage.select_policy = SelectPolicy::kSingleBest;
  auto found = detect(backend, vehicle_patch, stage);
  if (found.empty()) throw NoPlateFound("no plate candidate in patch " + to_string(vehicle_patch.patch));
  Detection best = found.front();
  best.box = clip_to_frame(to_absolute(best.box, vehicle_patch.patch), vehicle_patch.frame);
  return best;
}

void check_noise_model(const NoiseModel& n) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(n.miss_rate)) throw std::invalid_argument("miss_rate must lie in [0,1]");
  if (!(n.false_positive_rate >= 0.0)) throw std::invalid_argument("false_positive_rate must be >= 0");
  if (!(n.jitter >= 0.0)) throw std::invalid_argument("jitter must be >= 0");
  if (!prob(n.true_confidence_floor)) throw std::invalid_argument("true_confidence_floor must lie in [0,1]");
  if (!prob(n.fp_confidence_min) || !prob(n.fp_confidence_max) || n.fp_confidence_min > n.fp_confidence_max) {
    throw std::invalid_argument("false-positive confidence band must satisfy 0 <= min <= max <= 1");
  }
}

SimulatedDetector::SimulatedDetector(std::shared_ptr<const SceneStore> scenes, NoiseModel noise)
    : scenes_(std::move(scenes)), noise_(noise) {
  check_noise_model(noise_);
}

namespace {

constexpr double kMinVisibleFraction = 0.5;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  if (hi <= lo) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<Detection> SimulatedDetector::raw_detect(const ImageRef& image, const StageConfig& stage) const {
  const auto* objects = scenes_ ? scenes_->find(image.source) : nullptr;
  if (!objects) throw BackendUnavailable("simulated backend has no scene for '" + image.source + "'");

  auto rng = StableHash(noise_.seed)
                 .add(image.source)
                 .add(image.patch.x)
                 .add(image.patch.y)
                 .add(image.patch.w)
                 .add(image.patch.h)
                 .add(static_cast<int>(stage.target))
                 .rng();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const BBox& patch = image.patch;
  std::vector<Detection> out;
  for (const auto& obj : *objects) {
    if (obj.target != stage.target) continue;
    // Draw unconditionally so one object's visibility never shifts another's noise.
    const double miss_draw = unit(rng);
    double edge[4];
    for (double& e : edge) e = uniform(rng, -noise_.jitter, noise_.jitter);
    const double conf_draw = unit(rng);

    if (intersection_area(obj.box, patch) < kMinVisibleFraction * obj.box.area()) continue;
    if (miss_draw < noise_.miss_rate) continue;

    double x1 = obj.box.x + edge[0];
    double y1 = obj.box.y + edge[1];
    double x2 = std::max(obj.box.right() + edge[2], x1 + 1.0);
    double y2 = std::max(obj.box.bottom() + edge[3], y1 + 1.0);
    const BBox jittered = from_corners(x1, y1, x2, y2);
    if (intersection_area(jittered, patch) <= 0.0) continue;

    const double conf = noise_.true_confidence_floor >= 1.0
                            ? 1.0
                            : noise_.true_confidence_floor + conf_draw * (1.0 - noise_.true_confidence_floor);
    out.push_back({obj.class_id, conf, to_relative(clip_to_region(jittered, patch), patch)});
  }

  if (noise_.false_positive_rate > 0.0) {
    const int spurious = std::poisson_distribution<int>(noise_.false_positive_rate)(rng);
    for (int i = 0; i < spurious; ++i) {
      const double w = patch.w * uniform(rng, 0.05, 0.3);
      const double h = patch.h * uniform(rng, 0.05, 0.3);
      const double x = uniform(rng, 0.0, patch.w - w);
      const double y = uniform(rng, 0.0, patch.h - h);
      const double conf = uniform(rng, noise_.fp_confidence_min, noise_.fp_confidence_max);
      out.push_back({0, conf, BBox{x, y, w, h}});
    }
  }
  return out;
}

}  // namespace alpr
