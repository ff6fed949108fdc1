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
#include <stdexcept>
#include <string>
#include <vector>

#include "alpr/plate.hpp"

namespace alpr {

struct TrackReading {
  int frame_index = 0;
  LPString text;
  std::array<double, kPlateSlots> confidences{};
};

struct TrackPredictions {
  std::string vehicle_id;
  std::vector<TrackReading> readings;
};

class EmptyTrack : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Confidence sums closer than this count as tied.
inline constexpr double kVoteConfidenceTolerance = 1e-9;

/// Per-slot majority vote over all readings of a track. Ties go to the larger
/// confidence sum, then to the smaller character. Throws EmptyTrack without
/// readings.
LPString majority_vote(const TrackPredictions& track);

}  // namespace alpr
