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
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include "alpr/dataset.hpp"
#include "alpr/error.hpp"
#include "doctest.h"

using namespace alpr;
using namespace alpr::dataset;

namespace {

const char* kSample =
    "camera: iphone-7-plus\n"
    "type: motorcycle\n"
    "make: Honda\n"
    "model: CG 160\n"
    "year: 2016\n"
    "position_vehicle: 812 410 236 388\n"
    "plate: AYK-4721\n"
    "position_plate: 902 702 56 48\n"
    "char 1: 907 706 13 18\n"
    "char 2: 922 706 13 18\n"
    "char 3: 937 706 13 18\n"
    "char 4: 905 727 10 19\n"
    "char 5: 917 727 10 19\n"
    "char 6: 929 727 10 19\n"
    "char 7: 941 727 10 19\n";

std::string without_line(std::string text, const std::string& prefix) {
  const auto pos = text.find(prefix);
  REQUIRE(pos != std::string::npos);
  text.erase(pos, text.find('\n', pos) - pos + 1);
  return text;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_annotation(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("annotation files parse and round-trip") {
  const auto a = parse_annotation(kSample);
  CHECK(a.camera == "iphone-7-plus");
  CHECK(a.vehicle.type == VehicleType::kMotorcycle);
  CHECK(a.vehicle.model == "CG 160");
  CHECK(a.plate.text.str() == "AYK-4721");
  CHECK(a.plate.box == BBox{902, 702, 56, 48});
  CHECK(a.chars[6] == BBox{941, 727, 10, 19});
  CHECK(write_annotation(a) == kSample);
  CHECK(parse_annotation(write_annotation(a)) == a);
  CHECK(check_annotation(a, {1920, 1080}).empty());
}

TEST_CASE("annotation errors are line-precise") {
  const std::string six = without_line(kSample, "char 7:");
  try {
    parse_annotation(six);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("char 7") != std::string::npos);
  }
  std::string bad_plate = kSample;
  bad_plate.replace(bad_plate.find("AYK-4721"), 8, "AB1-2345");
  CHECK(parse_error_line(bad_plate) == 7);
  std::string bad_box = kSample;
  bad_box.replace(bad_box.find("902 702 56 48"), 13, "902 702 56");
  CHECK(parse_error_line(bad_box) == 8);
  CHECK(parse_error_line(std::string(kSample) + "color: red\n") == 16);
  CHECK(parse_error_line(std::string(kSample) + "camera: again\n") == 16);
  CHECK(parse_error_line(std::string(kSample) + "char 8: 1 1 1 1\n") == 16);
  CHECK_THROWS_AS(parse_annotation(without_line(kSample, "camera:")), ParseError);
}

TEST_CASE("geometry checks flag boxes outside the frame and characters outside the plate") {
  auto a = parse_annotation(kSample);
  a.chars[0].x = 2000;
  CHECK_FALSE(check_annotation(a, {1920, 1080}).empty());
  a = parse_annotation(kSample);
  a.plate.box.x = 1900;
  CHECK_FALSE(check_annotation(a, {1920, 1080}).empty());
}

TEST_CASE("synthetic tracks are deterministic and valid") {
  const auto a = generate_synthetic(42, 30);
  const auto b = generate_synthetic(42, 30);
  REQUIRE(a.size() == 30);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].frames.size() == 30);
    for (std::size_t f = 0; f < a[i].frames.size(); ++f) {
      CHECK(write_annotation(a[i].frames[f]) == write_annotation(b[i].frames[f]));
    }
  }
  CHECK(generate_synthetic(43, 30)[0].plate() != a[0].plate());
}

TEST_CASE("synthetic geometry invariants") {
  const FrameDims frame{1920, 1080};
  const auto tracks = generate_synthetic(7, 150);
  std::set<std::string> ids;
  std::map<std::pair<VehicleType, PlateColor>, int> mix;
  for (const auto& t : tracks) {
    ids.insert(t.vehicle_id);
    ++mix[{t.type(), t.color}];
    CHECK(check_track(t, frame).empty());
    const auto plate = t.plate();
    CHECK((plate[0] == 'A' || plate[0] == 'B'));
    if (plate[0] == 'B') CHECK(plate[1] <= 'E');
    CHECK(plate.str().substr(4) != "0000");
    for (const auto& f : t.frames) {
      CHECK(inside_frame(f.vehicle.box, frame));
      CHECK(inside_frame(f.plate.box, frame));
      CHECK(contains(f.vehicle.box, f.plate.box));
      for (const auto& c : f.chars) CHECK(contains(f.plate.box, c));
      for (std::size_t i = 0; i + 1 < kPlateSlots; ++i) CHECK(iou(f.chars[i], f.chars[i + 1]) == 0.0);
      if (t.type() == VehicleType::kCar) {
        CHECK(f.plate.box.aspect() == doctest::Approx(3.0).epsilon(0.05));
        for (std::size_t i = 0; i + 1 < kPlateSlots; ++i) CHECK(f.chars[i].x < f.chars[i + 1].x);
      } else {
        CHECK(f.plate.box.aspect() == doctest::Approx(1.17).epsilon(0.05));
        for (std::size_t i = 0; i < 3; ++i) {
          for (std::size_t j = 3; j < kPlateSlots; ++j) CHECK(f.chars[i].bottom() <= f.chars[j].y);
        }
      }
    }
    // Rigid motion: every frame is a translation of the first.
    const auto& f0 = t.frames.front();
    for (const auto& f : t.frames) {
      const double dx = f.vehicle.box.x - f0.vehicle.box.x, dy = f.vehicle.box.y - f0.vehicle.box.y;
      CHECK(f.plate.box.x - f0.plate.box.x == dx);
      CHECK(f.chars[4].y - f0.chars[4].y == dy);
      CHECK(f.plate.box.w == f0.plate.box.w);
    }
  }
  CHECK(ids.size() == 150);
  CHECK(mix[{VehicleType::kCar, PlateColor::kGray}] == 90);
  CHECK(mix[{VehicleType::kCar, PlateColor::kRed}] == 30);
  CHECK(mix[{VehicleType::kMotorcycle, PlateColor::kGray}] == 30);
}

TEST_CASE("protruding motorcycle plates stay within the expanded vehicle box") {
  SyntheticOptions opt;
  opt.protrusion = 0.15;
  const FrameDims frame{1920, 1080};
  bool any_outside = false;
  for (const auto& t : generate_synthetic(3, 60, {0.0, 0.0, 1.0}, opt)) {
    for (const auto& f : t.frames) {
      CHECK(contains(expand_margin(f.vehicle.box, 0.15, frame), f.plate.box));
      any_outside = any_outside || !contains(f.vehicle.box, f.plate.box);
    }
  }
  CHECK(any_outside);
}

TEST_CASE("150 tracks split 60/60/30, disjoint and covering") {
  const auto tracks = generate_synthetic(11, 150);
  const auto s = split_dataset(tracks, {}, 5);
  CHECK(s.train.size() == 60);
  CHECK(s.test.size() == 60);
  CHECK(s.validation.size() == 30);
  std::set<std::string> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  all.insert(s.validation.begin(), s.validation.end());
  CHECK(all.size() == 150);

  const auto again = split_dataset(tracks, {}, 5);
  CHECK(again.train == s.train);
  CHECK(again.validation == s.validation);
  const auto other = split_dataset(tracks, {}, 6);
  CHECK(other.train != s.train);
}

TEST_CASE("each stratum is split within one track of proportional") {
  const auto tracks = generate_synthetic(12, 150);
  const auto s = split_dataset(tracks, {}, 1);
  std::vector<double> heights;
  for (const auto& t : tracks) heights.push_back(t.plate_height());
  auto sorted = heights;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::string, int> which;
  for (const auto& id : s.train) which[id] = 0;
  for (const auto& id : s.test) which[id] = 1;
  for (const auto& id : s.validation) which[id] = 2;
  std::map<std::string, std::array<int, 4>> strata;  // counts per split, then total
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto rank = std::size_t(std::lower_bound(sorted.begin(), sorted.end(), heights[i]) - sorted.begin());
    const auto q = std::min<std::size_t>(3, 4 * rank / sorted.size());
    const auto key = tracks[i].camera() + "/" + std::to_string(int(tracks[i].type())) + "/" +
                     std::to_string(int(tracks[i].color)) + "/" + std::to_string(q);
    ++strata[key][std::size_t(which.at(tracks[i].vehicle_id))];
    ++strata[key][3];
  }
  const double f[] = {0.4, 0.4, 0.2};
  for (const auto& [key, c] : strata) {
    for (int k = 0; k < 3; ++k) {
      INFO(key);
      CHECK(std::abs(double(c[std::size_t(k)]) - f[k] * c[3]) <= 1.0);
    }
  }
}

TEST_CASE("ten tracks of one stratum split 4/4/2") {
  auto tracks = generate_synthetic(13, 1, {1.0, 0.0, 0.0});
  const auto base = tracks[0];
  tracks.clear();
  for (int i = 0; i < 10; ++i) {
    auto t = base;
    t.vehicle_id = "v" + std::to_string(i);
    tracks.push_back(t);
  }
  const auto s = split_dataset(tracks, {}, 0);
  CHECK(s.train.size() == 4);
  CHECK(s.test.size() == 4);
  CHECK(s.validation.size() == 2);
  CHECK_THROWS_AS(split_dataset(tracks, {0.5, 0.5, 0.5}, 0), std::invalid_argument);
}

TEST_CASE("datasets round-trip through disk") {
  const auto root = std::filesystem::temp_directory_path() / "alpr-dataset-test";
  std::filesystem::remove_all(root);
  Dataset ds;
  ds.tracks = generate_synthetic(21, 4, {}, {3, {1920, 1080}, 0.0, {"cam-a", "cam-b"}});
  write_dataset(root, ds);
  const auto back = load_dataset(root);
  CHECK(back.frame == ds.frame);
  REQUIRE(back.tracks.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.tracks[i].vehicle_id == ds.tracks[i].vehicle_id);
    CHECK(back.tracks[i].color == ds.tracks[i].color);
    CHECK(back.tracks[i].frames == ds.tracks[i].frames);
  }
  const std::vector<std::string> ids{ds.tracks[2].vehicle_id, ds.tracks[0].vehicle_id};
  write_id_list(root / "ids.txt", ids);
  CHECK(read_id_list(root / "ids.txt") == ids);
  const auto picked = select_tracks(back, ids);
  REQUIRE(picked.size() == 2);
  CHECK(picked[0].vehicle_id == ds.tracks[0].vehicle_id);  // dataset order
  const std::vector<std::string> unknown{"nope"};
  CHECK_THROWS_AS(select_tracks(back, unknown), DatasetError);
  CHECK_THROWS_AS(load_dataset(root / "missing"), DatasetError);
}
