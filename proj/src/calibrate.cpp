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

#include "alpr/calibrate.hpp"

#include <cmath>
#include <sstream>

#include "alpr/eval.hpp"

namespace alpr {

namespace {

/// k-th grid value; divides by 1/step when that is an integer so that values
/// such as 0.25 or 0.05 come out as the nearest double.
double grid_value(long k, double step) {
  const double inv = 1.0 / step;
  const double rounded = std::round(inv);
  return std::abs(inv - rounded) < 1e-9 ? double(k) / rounded : double(k) * step;
}

}  // namespace

ThresholdCalibration calibrate_threshold(std::span<const ValidationFrame> frames, double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("threshold grid step must lie in (0,1]");
  if (frames.empty()) throw CalibrationError("threshold calibration needs at least one validation frame");

  auto full_recall_at = [&](double t) {
    for (const auto& f : frames) {
      std::vector<Detection> kept;
      for (const auto& d : f.detections) {
        if (d.confidence >= t) kept.push_back(d);
      }
      if (eval::match_detections(kept, f.truths).fn != 0) return false;
    }
    return true;
  };

  const auto steps = static_cast<long>(std::floor(1.0 / step + 1e-9));
  for (long k = steps; k >= 1; --k) {
    const double t = grid_value(k, step);
    if (full_recall_at(t)) return {t, t / 2.0};
  }
  throw CalibrationError("no positive confidence threshold detects every validation object");
}

MarginCalibration calibrate_margin(std::span<const ContainmentSample> samples, const FrameDims& frame,
                                   MarginPolicy policy, double step, double max_margin) {
  if (!(step > 0.0)) throw std::invalid_argument("margin grid step must be positive");
  const auto steps = static_cast<long>(std::floor(max_margin / step + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double m = grid_value(k, step);
    bool all_inside = true;
    for (const auto& s : samples) {
      if (!contains(expand_margin(s.outer, m, frame), s.inner, 1e-6)) {
        all_inside = false;
        break;
      }
    }
    if (all_inside) return {m, policy == MarginPolicy::kDouble ? 2.0 * m : m};
  }
  std::ostringstream os;
  os << "no margin up to " << max_margin << " contains every ground-truth box";
  throw CalibrationError(os.str());
}

}  // namespace alpr
