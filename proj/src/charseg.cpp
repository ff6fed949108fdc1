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

#include "alpr/charseg.hpp"

#include <algorithm>
#include <tuple>

namespace alpr {

std::string_view vehicle_type_name(VehicleType t) { return t == VehicleType::kCar ? "car" : "motorcycle"; }

double overlap_threshold(VehicleType type) { return type == VehicleType::kCar ? 0.25 : 0.75; }

namespace {

bool canonical_less(const CharCandidate& a, const CharCandidate& b) {
  return std::tie(a.box.x, a.box.y, a.box.w, a.box.h, a.confidence) <
         std::tie(b.box.x, b.box.y, b.box.w, b.box.h, b.confidence);
}

}  // namespace

std::vector<CharCandidate> resolve_overlaps(std::span<const CharCandidate> candidates, VehicleType type) {
  if (candidates.size() < kPlateSlots) {
    throw UnderSegmentation("segmented " + std::to_string(candidates.size()) + " characters, need " +
                            std::to_string(kPlateSlots));
  }
  std::vector<CharCandidate> c(candidates.begin(), candidates.end());
  std::sort(c.begin(), c.end(), canonical_less);
  const double threshold = overlap_threshold(type);

  while (c.size() > kPlateSlots) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const double v = iou(c[i].box, c[j].box);
        if (v >= threshold && v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (best >= 0.0) {
      const CharCandidate merged{union_box(c[bi].box, c[bj].box), std::max(c[bi].confidence, c[bj].confidence)};
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(bj));
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(bi));
      c.insert(std::upper_bound(c.begin(), c.end(), merged, canonical_less), merged);
    } else {
      // First minimum in canonical order.
      const auto weakest = std::min_element(c.begin(), c.end(), [](const CharCandidate& a, const CharCandidate& b) {
        return a.confidence < b.confidence;
      });
      c.erase(weakest);
    }
  }
  return c;
}

std::array<CharCandidate, kPlateSlots> order_characters(std::span<const CharCandidate> chars, VehicleType type) {
  if (chars.size() != kPlateSlots) {
    throw std::invalid_argument("ordering needs exactly 7 characters, got " + std::to_string(chars.size()));
  }
  std::vector<CharCandidate> c(chars.begin(), chars.end());
  auto by_x = [](const CharCandidate& a, const CharCandidate& b) {
    if (a.box.center_x() != b.box.center_x()) return a.box.center_x() < b.box.center_x();
    return a.box.center_y() < b.box.center_y();
  };
  auto by_y = [](const CharCandidate& a, const CharCandidate& b) {
    if (a.box.center_y() != b.box.center_y()) return a.box.center_y() < b.box.center_y();
    return a.box.center_x() < b.box.center_x();
  };
  if (type == VehicleType::kCar) {
    std::stable_sort(c.begin(), c.end(), by_x);
  } else {
    std::stable_sort(c.begin(), c.end(), by_y);
    std::stable_sort(c.begin(), c.begin() + 3, by_x);
    std::stable_sort(c.begin() + 3, c.end(), by_x);
  }
  std::array<CharCandidate, kPlateSlots> out;
  std::copy(c.begin(), c.end(), out.begin());
  return out;
}

}  // namespace alpr
