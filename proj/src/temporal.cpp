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

#include "alpr/temporal.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace alpr {

LPString majority_vote(const TrackPredictions& track) {
  if (track.readings.empty()) throw EmptyTrack("track '" + track.vehicle_id + "' has no readings");
  {
    std::set<int> seen;
    for (const auto& r : track.readings) {
      if (!seen.insert(r.frame_index).second) {
        throw std::invalid_argument("track '" + track.vehicle_id + "' repeats frame " + std::to_string(r.frame_index));
      }
    }
  }

  std::array<char, kPlateSlots> fused{};
  for (std::size_t slot = 0; slot < kPlateSlots; ++slot) {
    std::map<char, std::vector<double>> votes;
    for (const auto& r : track.readings) votes[r.text[slot]].push_back(r.confidences[slot]);

    char best = 0;
    std::size_t best_count = 0;
    double best_sum = 0.0;
    // std::map iterates characters in ascending order, so the first of any
    // remaining tie is already the lexicographically smallest.
    for (auto& [label, confs] : votes) {
      std::sort(confs.begin(), confs.end());
      double sum = 0.0;
      for (double c : confs) sum += c;
      const bool more = confs.size() > best_count;
      const bool tie_on_count = confs.size() == best_count;
      if (more || (tie_on_count && sum > best_sum + kVoteConfidenceTolerance)) {
        best = label;
        best_count = confs.size();
        best_sum = sum;
      }
    }
    fused[slot] = best;
  }
  return LPString::from_slots(fused);
}

}  // namespace alpr
