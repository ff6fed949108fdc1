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

#include "alpr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace alpr::eval {

MatchResult match_detections(std::span<const Detection> preds, std::span<const BBox> gts, double iou_min) {
  if (!(iou_min > 0.0 && iou_min <= 1.0)) throw std::invalid_argument("iou_min must lie in (0,1]");

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detection_order(preds[a], preds[b]); });

  MatchResult r;
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t p : order) {
    double best = -1.0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(preds[p].box, gts[g]);
      if (v >= iou_min && v > best) {
        best = v;
        best_gt = g;
      }
    }
    if (best_gt < gts.size()) {
      taken[best_gt] = true;
      r.pairs.emplace_back(p, best_gt);
      ++r.tp;
    } else {
      ++r.fp;
    }
  }
  r.fn = gts.size() - r.tp;
  return r;
}

RecognitionReport recognition_rates(std::span<const FrameReading> frames, std::span<const FusedReading> fused,
                                    std::span<const TrackTruth> truth) {
  std::map<std::string, const TrackTruth*> by_id;
  for (const auto& t : truth) by_id[t.vehicle_id] = &t;
  auto truth_of = [&](const std::string& id) -> const TrackTruth& {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument("no ground truth for vehicle '" + id + "'");
    return *it->second;
  };

  RecognitionReport r;
  for (const auto& f : frames) {
    ++r.frames_total;
    const auto& gt = truth_of(f.vehicle_id).plate;
    if (!f.vehicle_detected) {
      ++r.frames_negative;
      continue;
    }
    ++r.frames_all_correct.total;
    ++r.frames_geq6.total;
    ++r.frames_letters_correct.total;
    ++r.frames_digits_correct.total;
    r.characters_correct.total += kPlateSlots;
    if (!f.reading) {
      ++r.frames_unread;
      continue;
    }
    const auto& got = *f.reading;
    const std::size_t same = got.matching_slots(gt);
    r.frames_all_correct.hits += same == kPlateSlots;
    r.frames_geq6.hits += same >= kPlateSlots - 1;
    r.frames_letters_correct.hits += got[0] == gt[0] && got[1] == gt[1] && got[2] == gt[2];
    r.frames_digits_correct.hits += got[3] == gt[3] && got[4] == gt[4] && got[5] == gt[5] && got[6] == gt[6];
    r.characters_correct.hits += same;
  }

  std::map<std::string, const FusedReading*> fused_by_id;
  for (const auto& f : fused) fused_by_id[f.vehicle_id] = &f;
  for (const auto& t : truth) {
    const auto it = fused_by_id.find(t.vehicle_id);
    const std::optional<LPString>* reading = it == fused_by_id.end() ? nullptr : &it->second->reading;
    const bool have = reading && reading->has_value();
    const std::size_t same = have ? (*reading)->matching_slots(t.plate) : 0;
    const bool all = same == kPlateSlots;
    const bool geq6 = same >= kPlateSlots - 1;

    ++r.vehicles_all_correct_redundant.total;
    ++r.vehicles_geq6_redundant.total;
    ++r.vehicles_letters_correct_redundant.total;
    ++r.vehicles_digits_correct_redundant.total;
    r.vehicles_all_correct_redundant.hits += all;
    r.vehicles_geq6_redundant.hits += geq6;
    if (have) {
      const auto& got = **reading;
      r.vehicles_letters_correct_redundant.hits += got[0] == t.plate[0] && got[1] == t.plate[1] && got[2] == t.plate[2];
      r.vehicles_digits_correct_redundant.hits +=
          got[3] == t.plate[3] && got[4] == t.plate[4] && got[5] == t.plate[5] && got[6] == t.plate[6];
    }
    r.frame_weighted_redundant.total += t.frame_count;
    r.frame_weighted_geq6_redundant.total += t.frame_count;
    if (all) r.frame_weighted_redundant.hits += t.frame_count;
    if (geq6) r.frame_weighted_geq6_redundant.hits += t.frame_count;
  }
  return r;
}

std::vector<StageMetrics> timing_report(std::span<const StageTiming> stages) {
  std::vector<StageMetrics> rows;
  double per_frame = 0.0;
  for (const auto& s : stages) {
    if (s.inputs == 0) continue;
    StageMetrics m;
    m.stage = s.stage;
    m.repeat = s.repeat;
    m.mean_ms = s.total_ms / double(s.inputs);
    const double cost = m.mean_ms * m.repeat;
    m.fps = cost > 0.0 ? 1000.0 / cost : 0.0;
    per_frame += cost;
    rows.push_back(m);
  }
  if (rows.empty()) return rows;
  StageMetrics total;
  total.stage = "end-to-end";
  total.mean_ms = per_frame;
  total.fps = per_frame > 0.0 ? 1000.0 / per_frame : 0.0;
  rows.push_back(total);
  return rows;
}

HeatMap heatmap(std::span<const BBox> boxes, const FrameDims& frame, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("heat map needs at least one bin");
  if (!frame.is_valid()) throw std::invalid_argument("heat map frame must have positive size");
  HeatMap map;
  map.bins = bins;
  map.counts.assign(bins * bins, 0);
  map.intensity.assign(bins * bins, 0.0);

  const double sx = double(bins) / frame.width;
  const double sy = double(bins) / frame.height;
  auto span_of = [bins](double lo, double hi, double scale) {
    // Cells [i, i+1) overlapped by the open interval (lo, hi).
    const double a = std::max(0.0, lo * scale);
    const double b = std::min(double(bins), hi * scale);
    if (b <= a) return std::pair<std::size_t, std::size_t>{1, 0};
    return std::pair<std::size_t, std::size_t>{std::size_t(std::floor(a)), std::size_t(std::ceil(b)) - 1};
  };
  for (const auto& box : boxes) {
    if (!box.is_valid()) continue;
    const auto [c0, c1] = span_of(box.x, box.right(), sx);
    const auto [r0, r1] = span_of(box.y, box.bottom(), sy);
    for (std::size_t r = r0; r <= r1 && r < bins; ++r) {
      for (std::size_t c = c0; c <= c1 && c < bins; ++c) ++map.counts[r * bins + c];
    }
  }
  const std::size_t peak = *std::max_element(map.counts.begin(), map.counts.end());
  if (peak == 0) return map;
  const double denom = std::log1p(double(peak));
  for (std::size_t i = 0; i < map.counts.size(); ++i) {
    map.intensity[i] = std::log1p(double(map.counts[i])) / denom;
  }
  return map;
}

std::string heatmap_text(const HeatMap& map) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  for (std::size_t r = 0; r < map.bins; ++r) {
    for (std::size_t c = 0; c < map.bins; ++c) {
      if (c) os << ' ';
      os << map.at(r, c);
    }
    os << '\n';
  }
  return os.str();
}

std::array<std::size_t, 26> letter_histogram(std::span<const LPString> plates) {
  std::array<std::size_t, 26> counts{};
  const auto& layout = PlateLayout::brazilian();
  for (const auto& p : plates) {
    for (std::size_t i = 0; i < kPlateSlots; ++i) {
      if (layout.slots[i] == CharDomain::kLetters) ++counts[std::size_t(p[i] - 'A')];
    }
  }
  return counts;
}

}  // namespace alpr::eval
