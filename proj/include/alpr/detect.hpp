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

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alpr/geometry.hpp"

namespace alpr {

/// What a detector stage is asked to find.
enum class DetectionTarget { kVehicle, kPlate, kCharacter };

std::string_view target_name(DetectionTarget t);

struct Detection {
  int class_id = 0;
  double confidence = 0.0;
  BBox box;  // relative to the patch the detector was run on, unless noted

  bool operator==(const Detection&) const = default;
};

enum class SelectPolicy { kAllAboveThreshold, kSingleBest };

struct StageConfig {
  std::string arch;
  DetectionTarget target = DetectionTarget::kVehicle;
  double confidence_threshold = 0.0;
  double margin = 0.0;
  SelectPolicy select_policy = SelectPolicy::kAllAboveThreshold;
};

/// Reference to a rectangular region of a frame. Backends resolve `source`
/// themselves; no pixel buffers cross the interface.
struct ImageRef {
  std::string source;
  FrameDims frame;
  BBox patch;  // frame coordinates

  static ImageRef whole_frame(std::string source, FrameDims frame) {
    return {std::move(source), frame, BBox{0.0, 0.0, double(frame.width), double(frame.height)}};
  }
  ImageRef with_patch(const BBox& p) const { return {source, frame, p}; }
};

/// The backend cannot serve the request at all (as opposed to finding nothing).
class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The plate stage got no candidate for a vehicle patch.
class NoPlateFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detector contract. Implementations return raw candidates (after their own
/// NMS) with boxes relative to the patch origin; the stage policies are
/// applied by detect(). Implementations must be callable concurrently.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual std::vector<Detection> raw_detect(const ImageRef& image, const StageConfig& stage) const = 0;
};

/// Descending confidence; ties by (x, y, class_id) ascending.
bool detection_order(const Detection& a, const Detection& b);

/// Runs the backend and applies threshold, ordering and selection policy.
/// Boxes are clipped to the patch and stay patch-relative.
std::vector<Detection> detect(const DetectorBackend& backend, const ImageRef& image, const StageConfig& stage);

struct VehicleCandidate {
  Detection detection;  // box in frame coordinates
  BBox patch;           // detection box grown by the stage margin, clipped to the frame
};

/// An empty result means the frame yields a negative recognition result.
std::vector<VehicleCandidate> vehicle_stage(const DetectorBackend& backend, const ImageRef& frame,
                                            const StageConfig& config);

/// Best plate candidate in a vehicle patch, in frame coordinates. The
/// threshold is always 0 and only the most confident candidate is kept.
/// Throws NoPlateFound when the backend returns nothing.
Detection lp_stage(const DetectorBackend& backend, const ImageRef& vehicle_patch, const StageConfig& config);

// --- simulated backend -------------------------------------------------------

/// Ground-truth object known to the simulated backends.
struct SceneObject {
  DetectionTarget target = DetectionTarget::kVehicle;
  int class_id = 0;
  BBox box;          // frame coordinates
  char label = 0;    // characters only
};

/// Ground truth per image source.
class SceneStore {
 public:
  void add(const std::string& source, SceneObject obj) { scenes_[source].push_back(obj); }
  void ensure(const std::string& source) { scenes_[source]; }
  const std::vector<SceneObject>* find(const std::string& source) const {
    const auto it = scenes_.find(source);
    return it == scenes_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return scenes_.size(); }

 private:
  std::map<std::string, std::vector<SceneObject>> scenes_;
};

struct NoiseModel {
  std::uint64_t seed = 0;
  double miss_rate = 0.0;            // probability a true object is not reported
  double false_positive_rate = 0.0;  // expected spurious detections per request
  double jitter = 0.0;               // max pixel offset per edge
  // Confidence law: true detections ~ U[true_confidence_floor, 1] (exactly 1
  // when the floor is 1); spurious ones ~ U[fp_confidence_min, fp_confidence_max].
  double true_confidence_floor = 1.0;
  double fp_confidence_min = 0.0;
  double fp_confidence_max = 0.3;

  bool operator==(const NoiseModel&) const = default;
};

/// Throws std::invalid_argument when a probability or range is out of bounds.
void check_noise_model(const NoiseModel& noise);

/// Deterministic detector driven by annotations. Objects of the requested
/// target with at least half their area inside the patch are reported
/// (clipped to the patch), subject to the noise model. Every draw is keyed
/// by (seed, source, patch, target), so repeated and concurrent calls agree.
class SimulatedDetector : public DetectorBackend {
 public:
  SimulatedDetector(std::shared_ptr<const SceneStore> scenes, NoiseModel noise);

  std::vector<Detection> raw_detect(const ImageRef& image, const StageConfig& stage) const override;

 private:
  std::shared_ptr<const SceneStore> scenes_;
  NoiseModel noise_;
};

}  // namespace alpr
