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
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alpr/charseg.hpp"
#include "alpr/geometry.hpp"
#include "alpr/plate.hpp"

namespace alpr::dataset {

enum class PlateColor { kGray, kRed };

std::string_view color_name(PlateColor c);
PlateColor parse_color(std::string_view s);
VehicleType parse_vehicle_type(std::string_view s);

struct VehicleInfo {
  VehicleType type = VehicleType::kCar;
  std::string make;
  std::string model;
  std::string year;
  BBox box;

  bool operator==(const VehicleInfo&) const = default;
};

struct PlateInfo {
  LPString text;
  BBox box;

  bool operator==(const PlateInfo&) const = default;
};

/// Ground truth of one frame; all boxes in frame coordinates.
struct FrameAnnotation {
  std::string camera;
  VehicleInfo vehicle;
  PlateInfo plate;
  std::array<BBox, kPlateSlots> chars{};  // in plate reading order

  bool operator==(const FrameAnnotation&) const = default;
};

struct Track {
  std::string vehicle_id;
  PlateColor color = PlateColor::kGray;
  std::vector<FrameAnnotation> frames;

  VehicleType type() const { return frames.front().vehicle.type; }
  const LPString& plate() const { return frames.front().plate.text; }
  std::string camera() const { return frames.front().camera; }
  /// Mean plate height over the frames, in pixels.
  double plate_height() const;
};

enum class AnnotationFormat { kV1 };

/// Keyed-line annotation text, one file per frame:
///   camera: / type: / make: / model: / year: / position_vehicle: x y w h /
///   plate: LLL-DDDD / position_plate: x y w h / char <i>: x y w h (i = 1..7)
/// Throws ParseError with the offending line.
FrameAnnotation parse_annotation(std::string_view text, AnnotationFormat format = AnnotationFormat::kV1);
std::string write_annotation(const FrameAnnotation& ann);

/// Geometric problems of an annotation within a frame (empty when valid).
std::vector<std::string> check_annotation(const FrameAnnotation& ann, const FrameDims& frame);

/// Problems of a whole track: frame-level checks plus consistency of plate
/// text and vehicle type across frames.
std::vector<std::string> check_track(const Track& track, const FrameDims& frame);

// --- splits ---------------------------------------------------------------------

struct SplitFractions {
  double train = 0.4;
  double test = 0.4;
  double validation = 0.2;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<std::string> validation;
};

/// Track-level split. Tracks are stratified by (camera, vehicle type, plate
/// color, plate-height quartile over the whole corpus); every stratum's split
/// counts stay within one of proportional and the split totals follow
/// largest-remainder rounding of the fractions. Deterministic for a seed.
DatasetSplit split_dataset(std::span<const Track> tracks, const SplitFractions& fractions, std::uint64_t seed);

// --- synthetic generation --------------------------------------------------------

struct SyntheticMix {
  double car_gray = 0.6;
  double car_red = 0.2;
  double moto_gray = 0.2;
};

struct SyntheticOptions {
  std::size_t frames_per_track = 30;
  FrameDims frame{1920, 1080};
  // How far (as a fraction of the vehicle box) a motorcycle plate may reach
  // outside its vehicle box.
  double protrusion = 0.0;
  std::vector<std::string> cameras{"gopro-hero4-silver", "huawei-p9-lite", "iphone-7-plus"};
};

/// Plates are drawn from AAA-0001..BEZ-9999. Car plates are 3:1 with one row
/// of characters, motorcycle plates about 1.17:1 with three letters above four
/// digits. Every track moves rigidly across its frames.
std::vector<Track> generate_synthetic(std::uint64_t seed, std::size_t n_tracks, const SyntheticMix& mix = {},
                                      const SyntheticOptions& options = {});

// --- on-disk layout ----------------------------------------------------------------

/// <root>/dataset.txt lists `frame <W>x<H>` and one `track <id> <color> <dir>`
/// per track; each track directory holds one annotation file per frame.
struct Dataset {
  FrameDims frame{1920, 1080};
  std::vector<Track> tracks;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Dataset load_dataset(const std::filesystem::path& root);
void write_dataset(const std::filesystem::path& root, const Dataset& dataset);

/// Image source id of a frame, "<vehicle_id>/<frame index>".
std::string frame_source(const Track& track, std::size_t frame_index);

std::vector<std::string> read_id_list(const std::filesystem::path& file);
void write_id_list(const std::filesystem::path& file, std::span<const std::string> ids);

/// Tracks whose ids are listed, in dataset order. Throws DatasetError on unknown ids.
std::vector<Track> select_tracks(const Dataset& dataset, std::span<const std::string> ids);

}  // namespace alpr::dataset
