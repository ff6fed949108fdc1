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
#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alpr/detect.hpp"
#include "alpr/geometry.hpp"
#include "alpr/plate.hpp"

namespace alpr::eval {

inline constexpr double kCorrectIoU = 0.5;

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (prediction index, ground-truth index)
};

/// Greedy one-to-one matching: predictions in detection_order() each take the
/// unmatched ground truth with the highest IoU, if that IoU >= iou_min.
MatchResult match_detections(std::span<const Detection> preds, std::span<const BBox> gts,
                             double iou_min = kCorrectIoU);

struct StageMetrics {
  std::string stage;
  double recall = 0.0;
  double precision = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double mean_ms = 0.0;  // per input
  unsigned repeat = 1;   // inputs per frame, e.g. 7 for per-character recognition
  double fps = 0.0;      // 1000 / (mean_ms * repeat)
};

/// Detection counts for one stage, summed over frames.
struct StageCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  StageCounts& operator+=(const StageCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  StageCounts& operator+=(const MatchResult& m) { return *this += StageCounts{m.tp, m.fp, m.fn}; }
  double recall() const { return tp + fn ? double(tp) / double(tp + fn) : 0.0; }
  double precision() const { return tp + fp ? double(tp) / double(tp + fp) : 0.0; }
  bool operator==(const StageCounts&) const = default;
};

// --- recognition ---------------------------------------------------------------

struct FrameReading {
  std::string vehicle_id;
  int frame_index = 0;
  bool vehicle_detected = false;
  std::optional<LPString> reading;
};

struct FusedReading {
  std::string vehicle_id;
  std::optional<LPString> reading;
};

struct TrackTruth {
  std::string vehicle_id;
  LPString plate;
  std::size_t frame_count = 0;
};

struct Ratio {
  std::size_t hits = 0;
  std::size_t total = 0;
  double value() const { return total ? double(hits) / double(total) : 0.0; }
};

struct RecognitionReport {
  std::size_t frames_total = 0;
  std::size_t frames_negative = 0;  // no vehicle found; excluded from frame-level rates
  std::size_t frames_unread = 0;    // vehicle found but no plate reading produced

  // Frame level, over frames with a vehicle detected.
  Ratio frames_all_correct;
  Ratio frames_geq6;
  Ratio frames_letters_correct;
  Ratio frames_digits_correct;
  Ratio characters_correct;  // per character, unread frames count as 7 misses

  // Track level, after temporal fusion.
  Ratio vehicles_all_correct_redundant;
  Ratio vehicles_geq6_redundant;
  Ratio vehicles_letters_correct_redundant;
  Ratio vehicles_digits_correct_redundant;
  Ratio frame_weighted_redundant;  // each track weighted by its frame count
  Ratio frame_weighted_geq6_redundant;
};

RecognitionReport recognition_rates(std::span<const FrameReading> frames, std::span<const FusedReading> fused,
                                    std::span<const TrackTruth> truth);

// --- timing --------------------------------------------------------------------

class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_ms() const = 0;
};

class SteadyClock : public Clock {
 public:
  double now_ms() const override {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now().time_since_epoch()).count();
  }
};

/// Clock that moves only when told to.
class FakeClock : public Clock {
 public:
  double now_ms() const override { return now_; }
  void advance(double ms) { now_ += ms; }

 private:
  double now_ = 0.0;
};

struct StageTiming {
  std::string stage;
  double total_ms = 0.0;
  std::size_t inputs = 0;
  unsigned repeat = 1;
};

/// One row per stage with inputs, plus an end-to-end row summing the per-frame
/// cost of each stage. No rows at all when nothing was timed.
std::vector<StageMetrics> timing_report(std::span<const StageTiming> stages);

// --- dataset summaries -----------------------------------------------------------

struct HeatMap {
  std::size_t bins = 0;
  std::vector<std::size_t> counts;  // row-major bins x bins
  std::vector<double> intensity;    // log(1 + count) / log(1 + max count)

  double at(std::size_t row, std::size_t col) const { return intensity[row * bins + col]; }
  std::size_t count(std::size_t row, std::size_t col) const { return counts[row * bins + col]; }
};

/// Every box adds one to each grid cell its interior overlaps.
HeatMap heatmap(std::span<const BBox> boxes, const FrameDims& frame, std::size_t bins);

std::string heatmap_text(const HeatMap& map);

/// Counts of A-Z over the letter slots.
std::array<std::size_t, 26> letter_histogram(std::span<const LPString> plates);

}  // namespace alpr::eval
