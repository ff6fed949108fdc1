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
#include <cstdio>
#include <numeric>
#include <random>

#include "alpr/dataset.hpp"
#include "alpr/stable_hash.hpp"

namespace alpr::dataset {

namespace {

struct Category {
  VehicleType type;
  PlateColor color;
};

struct MakeModel {
  const char* make;
  const char* model;
};

constexpr MakeModel kCars[] = {{"Volkswagen", "Gol"},   {"Fiat", "Palio"},       {"Chevrolet", "Onix"},
                               {"Renault", "Sandero"}, {"Hyundai", "HB20"},     {"Toyota", "Corolla"},
                               {"Ford", "Ka"},         {"Volkswagen", "Fox"}};
constexpr MakeModel kMotorcycles[] = {
    {"Honda", "CG 160"}, {"Yamaha", "Factor 150"}, {"Honda", "Biz 125"}, {"Yamaha", "Fazer 250"}};

/// Uniform over the plates issued in Parana: AAA-0001 .. BEZ-9999.
LPString draw_plate(std::mt19937_64& rng) {
  constexpr int kALetters = 26 * 26;  // AAA..AZZ
  constexpr int kBLetters = 5 * 26;   // BAA..BEZ
  const int u = std::uniform_int_distribution<int>(0, kALetters + kBLetters - 1)(rng);
  std::array<char, kPlateSlots> s{};
  s[0] = u < kALetters ? 'A' : 'B';
  const int v = u < kALetters ? u : u - kALetters;
  s[1] = char('A' + v / 26);
  s[2] = char('A' + v % 26);
  int n = std::uniform_int_distribution<int>(1, 9999)(rng);
  for (int i = 6; i >= 3; --i, n /= 10) s[std::size_t(i)] = char('0' + n % 10);
  return LPString::from_slots(s);
}

/// Character boxes for a plate at the origin; all inside the plate and disjoint.
std::array<BBox, kPlateSlots> char_layout(VehicleType type, double pw, double ph) {
  std::array<BBox, kPlateSlots> out;
  auto row = [&](std::size_t first, std::size_t count, double margin, double fill, double top, double height,
                 double gap_after, std::size_t gap_slot) {
    const double avail = pw * (1.0 - 2.0 * margin);
    const double slot = avail / (double(count) + gap_after);
    const double cw = std::max(1.0, std::floor(slot * fill));
    const double y = std::round(top * ph);
    const double h = std::max(1.0, std::round(height * ph));
    for (std::size_t i = 0; i < count; ++i) {
      const double shift = i >= gap_slot ? gap_after : 0.0;
      const double start = pw * margin + slot * (double(i) + shift) + slot * (1.0 - fill) / 2.0;
      out[first + i] = BBox{std::floor(start), y, cw, h};
    }
  };
  if (type == VehicleType::kCar) {
    row(0, 7, 0.04, 0.78, 0.2, 0.62, 0.5, 3);
  } else {
    row(0, 3, 0.12, 0.7, 0.08, 0.34, 0.0, 3);
    row(3, 4, 0.06, 0.75, 0.5, 0.42, 0.0, 4);
  }
  return out;
}

}  // namespace

std::vector<Track> generate_synthetic(std::uint64_t seed, std::size_t n_tracks, const SyntheticMix& mix,
                                      const SyntheticOptions& options) {
  const double total = mix.car_gray + mix.car_red + mix.moto_gray;
  if (mix.car_gray < 0 || mix.car_red < 0 || mix.moto_gray < 0 || std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("synthetic mix proportions must be non-negative and sum to 1");
  }
  if (options.frames_per_track == 0) throw std::invalid_argument("tracks need at least one frame");
  if (options.cameras.empty()) throw std::invalid_argument("at least one camera is required");
  if (options.protrusion < 0.0) throw std::invalid_argument("protrusion must be non-negative");

  // Category counts by largest remainder, then a seeded order.
  const std::array<Category, 3> cats{{{VehicleType::kCar, PlateColor::kGray},
                                      {VehicleType::kCar, PlateColor::kRed},
                                      {VehicleType::kMotorcycle, PlateColor::kGray}}};
  const std::array<double, 3> weights{mix.car_gray, mix.car_red, mix.moto_gray};
  std::array<std::size_t, 3> count{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = weights[i] * double(n_tracks);
    count[i] = std::size_t(std::floor(exact + 1e-9));
    rem[i] = exact - double(count[i]);
    assigned += count[i];
  }
  while (assigned < n_tracks) {
    const auto i = std::size_t(std::max_element(rem.begin(), rem.end()) - rem.begin());
    ++count[i];
    rem[i] = -1.0;
    ++assigned;
  }
  std::vector<std::size_t> cat_of;
  std::array<std::size_t, 3> seen{};
  std::vector<std::size_t> camera_of;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < count[c]; ++i) {
      cat_of.push_back(c);
      camera_of.push_back(seen[c]++ % options.cameras.size());
    }
  }
  {
    std::vector<std::size_t> perm(cat_of.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto rng = StableHash(seed).add(std::string_view("order")).rng();
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> c2, k2;
    for (auto p : perm) {
      c2.push_back(cat_of[p]);
      k2.push_back(camera_of[p]);
    }
    cat_of.swap(c2);
    camera_of.swap(k2);
  }

  const double fw = options.frame.width;
  const double fh = options.frame.height;
  const double steps = double(options.frames_per_track - 1);

  std::vector<Track> tracks;
  tracks.reserve(n_tracks);
  for (std::size_t t = 0; t < n_tracks; ++t) {
    auto rng = StableHash(seed).add(std::uint64_t(t)).rng();
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto uint = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const Category cat = cats[cat_of[t]];
    const bool car = cat.type == VehicleType::kCar;

    Track track;
    char id[32];
    std::snprintf(id, sizeof id, "track-%04zu", t + 1);
    track.vehicle_id = id;
    track.color = cat.color;

    const MakeModel mm = car ? kCars[uint(0, int(std::size(kCars)) - 1)]
                             : kMotorcycles[uint(0, int(std::size(kMotorcycles)) - 1)];
    const std::string year = std::to_string(uint(2005, 2018));
    const LPString plate = draw_plate(rng);

    // Vehicle and plate at the origin.
    double vw, vh, ph, pw;
    if (car) {
      vw = uint(420, 760);
      vh = std::round(vw * uni(0.75, 0.95));
      ph = uint(22, 56);
      pw = 3.0 * ph;
    } else {
      vw = uint(200, 320);
      vh = std::round(vw * uni(1.4, 1.8));
      ph = uint(34, 70);
      pw = std::round(1.17 * ph);
    }
    double px = std::round((vw - pw) / 2.0 + uni(-0.1, 0.1) * vw);
    px = std::clamp(px, 2.0, vw - pw - 2.0);
    double py = std::round(vh * (car ? uni(0.62, 0.78) : uni(0.70, 0.85)));
    py = std::min(py, vh - ph - 2.0);
    if (!car && options.protrusion > 0.0) {
      // Let the plate reach below the vehicle box, up to the allowance.
      const double below = std::floor(uni(0.0, options.protrusion) * vh);
      py = std::min(vh - ph + below, vh + options.protrusion * vh - ph);
    }
    const auto chars = char_layout(cat.type, pw, ph);

    // Rigid motion; the union of vehicle and plate stays in frame.
    const double ux0 = std::min(0.0, px), uy0 = std::min(0.0, py);
    const double ux1 = std::max(vw, px + pw), uy1 = std::max(vh, py + ph);
    const double vx = uni(-6.0, 6.0), vy = uni(-3.0, 3.0);
    const double dx_min = std::min(0.0, std::round(vx * steps)), dx_max = std::max(0.0, std::round(vx * steps));
    const double dy_min = std::min(0.0, std::round(vy * steps)), dy_max = std::max(0.0, std::round(vy * steps));
    const double x0 = std::round(uni(-ux0 - dx_min, fw - ux1 - dx_max));
    const double y0 = std::round(uni(-uy0 - dy_min, fh - uy1 - dy_max));

    for (std::size_t f = 0; f < options.frames_per_track; ++f) {
      const double ox = x0 + std::round(vx * double(f));
      const double oy = y0 + std::round(vy * double(f));
      FrameAnnotation a;
      a.camera = options.cameras[camera_of[t]];
      a.vehicle = {cat.type, mm.make, mm.model, year, BBox{ox, oy, vw, vh}};
      a.plate = {plate, BBox{ox + px, oy + py, pw, ph}};
      for (std::size_t i = 0; i < kPlateSlots; ++i) {
        a.chars[i] = BBox{ox + px + chars[i].x, oy + py + chars[i].y, chars[i].w, chars[i].h};
      }
      track.frames.push_back(std::move(a));
    }
    tracks.push_back(std::move(track));
  }
  return tracks;
}

}  // namespace alpr::dataset
