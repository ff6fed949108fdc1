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
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "alpr/geometry.hpp"
#include "alpr/plate.hpp"

namespace alpr {

enum class VehicleType { kCar, kMotorcycle };

std::string_view vehicle_type_name(VehicleType t);

struct CharCandidate {
  BBox box;
  double confidence = 0.0;

  bool operator==(const CharCandidate&) const = default;
};

/// Fewer than seven characters survived segmentation.
class UnderSegmentation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// IoU at which two character boxes count as the same character. Motorcycle
/// plates tilt more, so they need a stricter overlap.
double overlap_threshold(VehicleType type);

/// Reduces the candidates to exactly seven. While more than seven remain, the
/// pair with the highest IoU at or above overlap_threshold() is replaced by its
/// union (keeping the larger confidence); without such a pair the least
/// confident candidate is dropped. Exactly seven inputs are returned as they
/// are. The result does not depend on input order.
std::vector<CharCandidate> resolve_overlaps(std::span<const CharCandidate> candidates, VehicleType type);

/// Reading order: cars left to right; motorcycles top to bottom, then the top
/// three and the bottom four each left to right. Slots 0-2 hold the letters
/// and 3-6 the digits. Throws std::invalid_argument unless given seven boxes.
std::array<CharCandidate, kPlateSlots> order_characters(std::span<const CharCandidate> chars, VehicleType type);

}  // namespace alpr
