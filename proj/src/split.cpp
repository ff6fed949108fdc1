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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "alpr/dataset.hpp"
#include "alpr/stable_hash.hpp"

namespace alpr::dataset {

namespace {

constexpr std::size_t kSplits = 3;

/// Largest-remainder apportionment of `total` by `weights` (ties to the lower index).
std::array<std::size_t, kSplits> apportion(std::size_t total, const std::array<double, kSplits>& weights) {
  std::array<std::size_t, kSplits> out{};
  std::array<double, kSplits> rem{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < kSplits; ++s) {
    const double exact = weights[s] * double(total);
    out[s] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[s] = exact - double(out[s]);
    assigned += out[s];
  }
  std::array<std::size_t, kSplits> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b] + 1e-12; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[order[i % kSplits]];
  return out;
}

}  // namespace

DatasetSplit split_dataset(std::span<const Track> tracks, const SplitFractions& fractions, std::uint64_t seed) {
  const std::array<double, kSplits> f{fractions.train, fractions.test, fractions.validation};
  for (double v : f) {
    if (v < 0.0) throw std::invalid_argument("split fractions must be non-negative");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");

  // Plate-height quartile over the whole corpus; equal heights share a quartile.
  std::vector<double> heights;
  for (const auto& t : tracks) heights.push_back(t.plate_height());
  std::vector<double> sorted = heights;
  std::sort(sorted.begin(), sorted.end());
  auto quartile = [&](double h) {
    const auto below = std::size_t(std::lower_bound(sorted.begin(), sorted.end(), h) - sorted.begin());
    return std::min<std::size_t>(3, 4 * below / std::max<std::size_t>(1, sorted.size()));
  };

  using Key = std::tuple<std::string, int, int, std::size_t>;
  std::map<Key, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto& t = tracks[i];
    strata[{t.camera(), int(t.type()), int(t.color), quartile(heights[i])}].push_back(i);
  }

  // Every stratum gets floor(f * n) per split; the leftover units are placed
  // so the split totals hit their targets, at most one extra per split and
  // stratum (each unit goes to the split with the largest outstanding need).
  const auto targets = apportion(tracks.size(), f);
  std::array<std::size_t, kSplits> need = targets;
  std::vector<std::pair<Key, std::array<std::size_t, kSplits>>> counts;
  std::vector<std::size_t> extra;
  for (const auto& [key, members] : strata) {
    std::array<std::size_t, kSplits> c{};
    std::size_t used = 0;
    for (std::size_t s = 0; s < kSplits; ++s) {
      c[s] = static_cast<std::size_t>(std::floor(f[s] * double(members.size()) + 1e-9));
      used += c[s];
      need[s] -= c[s];
    }
    counts.emplace_back(key, c);
    extra.push_back(members.size() - used);
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return extra[a] > extra[b]; });
  for (std::size_t k : order) {
    std::array<std::size_t, kSplits> pick{0, 1, 2};
    std::stable_sort(pick.begin(), pick.end(), [&](std::size_t a, std::size_t b) { return need[a] > need[b]; });
    for (std::size_t u = 0; u < extra[k]; ++u) {
      const std::size_t s = pick[u];
      if (u >= kSplits || need[s] == 0) {
        throw std::invalid_argument("stratum of " + std::get<0>(counts[k].first) +
                                    " tracks is too small to split by the requested fractions");
      }
      ++counts[k].second[s];
      --need[s];
    }
  }

  DatasetSplit out;
  std::array<std::vector<std::string>*, kSplits> dest{&out.train, &out.test, &out.validation};
  for (const auto& [key, c] : counts) {
    std::vector<std::size_t> members = strata.at(key);
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return tracks[a].vehicle_id < tracks[b].vehicle_id; });
    auto rng = StableHash(seed)
                   .add(std::get<0>(key))
                   .add(std::get<1>(key))
                   .add(std::get<2>(key))
                   .add(static_cast<std::uint64_t>(std::get<3>(key)))
                   .rng();
    std::shuffle(members.begin(), members.end(), rng);
    std::size_t next = 0;
    for (std::size_t s = 0; s < kSplits; ++s) {
      for (std::size_t i = 0; i < c[s]; ++i) dest[s]->push_back(tracks[members[next++]].vehicle_id);
    }
  }
  for (auto* d : dest) std::sort(d->begin(), d->end());
  return out;
}

}  // namespace alpr::dataset
