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

#include <span>
#include <stdexcept>
#include <vector>

#include "alpr/detect.hpp"
#include "alpr/geometry.hpp"

namespace alpr {

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detections for one validation frame at threshold 0, with the frame's ground truth.
struct ValidationFrame {
  std::vector<Detection> detections;
  std::vector<BBox> truths;
};

struct ThresholdCalibration {
  double full_recall_threshold = 0.0;  // largest grid value with 100% recall
  double deployed = 0.0;               // half of it
};

/// Searches thresholds k * step (k >= 1) from 1 down and takes the largest one
/// at which every ground truth is matched at IoU >= 0.5; deploys half of it.
/// Throws CalibrationError when no positive threshold reaches 100% recall.
ThresholdCalibration calibrate_threshold(std::span<const ValidationFrame> frames, double step = 0.005);

enum class MarginPolicy { kDouble, kKeep };

/// A predicted outer box and a ground-truth box that should end up inside it.
struct ContainmentSample {
  BBox outer;
  BBox inner;
};

struct MarginCalibration {
  double required = 0.0;  // smallest grid margin with full containment
  double deployed = 0.0;  // after the policy
};

/// Smallest margin k * step (k >= 0, up to max_margin) for which every inner
/// box lies inside expand_margin(outer). Throws CalibrationError otherwise.
MarginCalibration calibrate_margin(std::span<const ContainmentSample> samples, const FrameDims& frame,
                                   MarginPolicy policy, double step = 0.01, double max_margin = 1.0);

}  // namespace alpr
