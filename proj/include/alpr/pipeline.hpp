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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alpr/calibrate.hpp"
#include "alpr/charseg.hpp"
#include "alpr/config.hpp"
#include "alpr/dataset.hpp"
#include "alpr/detect.hpp"
#include "alpr/eval.hpp"
#include "alpr/recognize.hpp"

namespace alpr::pipeline {

struct Backends {
  std::shared_ptr<const DetectorBackend> detector;
  std::shared_ptr<const CharClassifierBackend> classifier;
};

/// Ground truth of every frame, keyed by frame_source(). Vehicles get class 0
/// for cars and 1 for motorcycles when `vehicle_classes` is 2, else class 0.
std::shared_ptr<SceneStore> build_scenes(std::span<const dataset::Track> tracks, int vehicle_classes);

/// Annotation-driven detector and classifier, configured from the noise keys.
Backends make_backends(const PipelineConfig& config, std::span<const dataset::Track> tracks);

/// Everything found for one vehicle candidate. Boxes are in frame coordinates.
struct VehicleResult {
  Detection vehicle;
  std::optional<Detection> plate;
  std::size_t raw_chars = 0;          // segmentation candidates before overlap resolution
  std::vector<CharCandidate> chars;   // seven in reading order, or the raw candidates when fewer
  std::optional<PlateReading> reading;

  bool operator==(const VehicleResult&) const = default;
};

struct FrameResult {
  std::string vehicle_id;
  int frame_index = 0;
  std::vector<VehicleResult> vehicles;  // in detection_order() of the vehicle stage

  /// Reading of the most confident vehicle that produced one.
  std::optional<LPString> reading() const;
  bool operator==(const FrameResult&) const = default;
};

/// Wall time spent per stage on one frame.
struct FrameTiming {
  double vehicle_ms = 0.0;
  double plate_ms = 0.0;
  double charseg_ms = 0.0;
  double recognition_ms = 0.0;
  std::size_t plate_inputs = 0;
  std::size_t charseg_inputs = 0;
  std::size_t char_inputs = 0;
};

/// Reading order of characters for a vehicle. A two-class vehicle detector
/// tells cars (0) from motorcycles (1); otherwise plates narrower than 2:1 are
/// taken as motorcycle plates.
VehicleType infer_vehicle_type(const Detection& vehicle, const Detection& plate, int vehicle_classes);

/// Runs the cascade on one frame.
FrameResult process_frame(const Backends& backends, const PipelineConfig& config, int vehicle_classes,
                          const ImageRef& frame, const eval::Clock& clock, FrameTiming* timing = nullptr);

struct RunOutput {
  std::vector<FrameResult> frames;  // track order, then frame order
  std::vector<FrameTiming> timings;
};

/// Processes every frame with config.workers threads. `frames` does not depend
/// on the worker count.
RunOutput run_frames(const Backends& backends, const PipelineConfig& config, std::span<const dataset::Track> tracks,
                     const FrameDims& frame, const eval::Clock& clock);

struct Evaluation {
  eval::StageCounts vehicle;
  eval::StageCounts plate;
  eval::StageCounts charseg;
  std::size_t gt_vehicles = 0;
  std::size_t gt_plates = 0;
  std::size_t gt_chars = 0;
  std::size_t under_segmented = 0;  // plate found, fewer than seven characters
  std::vector<eval::FrameReading> readings;
  std::vector<eval::FusedReading> fused;
  eval::RecognitionReport recognition;
};

/// Scores results against the tracks. Every annotated object is ground truth
/// of its stage, so TP + FN equals the annotation count whatever earlier
/// stages missed.
Evaluation evaluate(std::span<const FrameResult> frames, std::span<const dataset::Track> tracks);

std::string report_text(const Evaluation& ev);
std::string report_jsonl(const Evaluation& ev);
std::string fused_text(const Evaluation& ev);
std::string timing_text(std::span<const FrameTiming> timings);

/// One JSON object per frame per stage.
std::string records_jsonl(std::span<const FrameResult> frames);
/// Inverse of records_jsonl(). Throws ParseError.
std::vector<FrameResult> parse_records(std::string_view text);

/// Tracks named by config.tracks_file (all tracks when unset).
dataset::Dataset load_run_dataset(const PipelineConfig& config, std::vector<dataset::Track>& tracks);

/// Full run: validates the config, processes the dataset and writes
/// records.jsonl, fused.txt, report.txt, report.jsonl and timing.txt to the
/// output directory.
Evaluation cmd_run(const PipelineConfig& config, const eval::Clock& clock);

/// Recomputes the reports from records.jsonl against the dataset.
Evaluation cmd_report(const PipelineConfig& config, const std::filesystem::path& records);

struct CalibrationOutcome {
  ThresholdCalibration vehicle_threshold;
  MarginCalibration vehicle_margin;
  MarginCalibration plate_margin;
  PipelineConfig calibrated;
};

/// Calibrates the vehicle threshold, the vehicle margin (plate containment)
/// and the plate margin (character containment) on the tracks, in that
/// order, each stage using the previous stage's deployed value.
CalibrationOutcome calibrate(const PipelineConfig& config, const Backends& backends,
                             std::span<const dataset::Track> tracks, const FrameDims& frame);

/// Loads the validation tracks named by config.tracks_file, calibrates and
/// writes calibrated.cfg to the output directory.
CalibrationOutcome cmd_calibrate(const PipelineConfig& config);

}  // namespace alpr::pipeline
