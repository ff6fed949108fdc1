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
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "alpr/dataset.hpp"
#include "alpr/error.hpp"
#include "text_util.hpp"

namespace alpr::dataset {

std::string_view color_name(PlateColor c) { return c == PlateColor::kGray ? "gray" : "red"; }

PlateColor parse_color(std::string_view s) {
  if (s == "gray") return PlateColor::kGray;
  if (s == "red") return PlateColor::kRed;
  throw std::invalid_argument("unknown plate color '" + std::string(s) + "'");
}

VehicleType parse_vehicle_type(std::string_view s) {
  if (s == "car") return VehicleType::kCar;
  if (s == "motorcycle") return VehicleType::kMotorcycle;
  throw std::invalid_argument("unknown vehicle type '" + std::string(s) + "'");
}

double Track::plate_height() const {
  if (frames.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f : frames) sum += f.plate.box.h;
  return sum / double(frames.size());
}

namespace {

constexpr std::array<std::string_view, 8> kScalarKeys = {
    "camera", "type", "make", "model", "year", "position_vehicle", "plate", "position_plate"};

BBox parse_box(std::string_view value, std::size_t line) {
  const auto tok = text::split_ws(value);
  if (tok.size() != 4) throw ParseError(line, "malformed box '" + std::string(value) + "' (want x y w h)");
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto n = text::parse_number(tok[i]);
    if (!n) throw ParseError(line, "malformed box '" + std::string(value) + "' (bad number)");
    v[i] = *n;
  }
  const BBox b{v[0], v[1], v[2], v[3]};
  if (!b.is_valid()) throw ParseError(line, "malformed box '" + std::string(value) + "' (non-positive size)");
  return b;
}

std::string box_text(const BBox& b) {
  return text::format_number(b.x) + ' ' + text::format_number(b.y) + ' ' + text::format_number(b.w) + ' ' +
         text::format_number(b.h);
}

}  // namespace

FrameAnnotation parse_annotation(std::string_view text, AnnotationFormat format) {
  if (format != AnnotationFormat::kV1) throw std::invalid_argument("unsupported annotation format");

  std::map<std::string, std::pair<std::string, std::size_t>> values;  // key -> (value, line)
  std::array<std::size_t, kPlateSlots> char_line{};
  FrameAnnotation ann;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<key>: <value>'");
    const std::string key(text::trim(line.substr(0, colon)));
    const std::string_view value = text::trim(line.substr(colon + 1));

    if (key.starts_with("char ")) {
      const auto idx = text::parse_integer<int>(text::trim(std::string_view(key).substr(5)));
      if (!idx || *idx < 1 || *idx > int(kPlateSlots)) throw ParseError(line_no, "bad character slot in '" + key + "'");
      if (char_line[*idx - 1]) throw ParseError(line_no, "duplicate key '" + key + "'");
      char_line[*idx - 1] = line_no;
      ann.chars[*idx - 1] = parse_box(value, line_no);
      continue;
    }
    if (std::find(kScalarKeys.begin(), kScalarKeys.end(), key) == kScalarKeys.end()) {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
    if (!values.emplace(key, std::make_pair(std::string(value), line_no)).second) {
      throw ParseError(line_no, "duplicate key '" + key + "'");
    }
  }

  for (auto key : kScalarKeys) {
    if (!values.count(std::string(key))) throw ParseError(line_no, "missing key '" + std::string(key) + "'");
  }
  for (std::size_t i = 0; i < kPlateSlots; ++i) {
    if (!char_line[i]) {
      throw ParseError(line_no, "missing key 'char " + std::to_string(i + 1) + "' (need 7 character boxes)");
    }
  }

  auto get = [&](const char* key) -> const std::pair<std::string, std::size_t>& { return values.at(key); };
  ann.camera = get("camera").first;
  try {
    ann.vehicle.type = parse_vehicle_type(get("type").first);
  } catch (const std::invalid_argument& e) {
    throw ParseError(get("type").second, e.what());
  }
  ann.vehicle.make = get("make").first;
  ann.vehicle.model = get("model").first;
  ann.vehicle.year = get("year").first;
  ann.vehicle.box = parse_box(get("position_vehicle").first, get("position_vehicle").second);
  const auto plate = LPString::try_parse(get("plate").first);
  if (!plate) {
    throw ParseError(get("plate").second, "plate '" + get("plate").first + "' does not match layout LLL-DDDD");
  }
  ann.plate.text = *plate;
  ann.plate.box = parse_box(get("position_plate").first, get("position_plate").second);
  return ann;
}

std::string write_annotation(const FrameAnnotation& ann) {
  std::ostringstream os;
  auto kv = [&](std::string_view key, const std::string& value) {
    os << key << ':';
    if (!value.empty()) os << ' ' << value;
    os << '\n';
  };
  kv("camera", ann.camera);
  kv("type", std::string(vehicle_type_name(ann.vehicle.type)));
  kv("make", ann.vehicle.make);
  kv("model", ann.vehicle.model);
  kv("year", ann.vehicle.year);
  kv("position_vehicle", box_text(ann.vehicle.box));
  kv("plate", ann.plate.text.str());
  kv("position_plate", box_text(ann.plate.box));
  for (std::size_t i = 0; i < kPlateSlots; ++i) kv("char " + std::to_string(i + 1), box_text(ann.chars[i]));
  return os.str();
}

std::vector<std::string> check_annotation(const FrameAnnotation& ann, const FrameDims& frame) {
  std::vector<std::string> problems;
  if (!ann.vehicle.box.is_valid()) problems.push_back("vehicle box is empty");
  if (!ann.plate.box.is_valid()) problems.push_back("plate box is empty");
  if (!inside_frame(ann.plate.box, frame)) problems.push_back("plate box " + to_string(ann.plate.box) + " leaves the frame");
  if (!inside_frame(ann.vehicle.box, frame)) {
    problems.push_back("vehicle box " + to_string(ann.vehicle.box) + " leaves the frame");
  }
  for (std::size_t i = 0; i < kPlateSlots; ++i) {
    if (!ann.chars[i].is_valid()) problems.push_back("char " + std::to_string(i + 1) + " box is empty");
    if (!contains(ann.plate.box, ann.chars[i])) {
      problems.push_back("char " + std::to_string(i + 1) + " box lies outside the plate");
    }
  }
  return problems;
}

std::vector<std::string> check_track(const Track& track, const FrameDims& frame) {
  std::vector<std::string> problems;
  if (track.frames.empty()) return {"track '" + track.vehicle_id + "' has no frames"};
  for (std::size_t i = 0; i < track.frames.size(); ++i) {
    const auto& f = track.frames[i];
    for (auto& p : check_annotation(f, frame)) problems.push_back("frame " + std::to_string(i) + ": " + p);
    if (f.plate.text != track.plate()) problems.push_back("frame " + std::to_string(i) + ": plate text differs");
    if (f.vehicle.type != track.type()) problems.push_back("frame " + std::to_string(i) + ": vehicle type differs");
  }
  return problems;
}

std::string frame_source(const Track& track, std::size_t frame_index) {
  return track.vehicle_id + "/" + std::to_string(frame_index);
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DatasetError("cannot write '" + p.string() + "'");
  out << content;
}

std::string frame_file_name(std::size_t i) {
  std::string n = std::to_string(i);
  return "frame-" + std::string(n.size() < 3 ? 3 - n.size() : 0, '0') + n + ".txt";
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& root) {
  const auto manifest = root / "dataset.txt";
  if (!std::filesystem::exists(manifest)) throw DatasetError("no dataset manifest at '" + manifest.string() + "'");
  const std::string text = read_file(manifest);

  Dataset ds;
  std::set<std::string> ids;
  std::istringstream is(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    const auto tok = text::split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    try {
      if (tok[0] == "frame" && tok.size() == 2) {
        const auto x = tok[1].find('x');
        const auto w = text::parse_integer<int>(tok[1].substr(0, x));
        const auto h = x == std::string_view::npos ? std::nullopt : text::parse_integer<int>(tok[1].substr(x + 1));
        if (!w || !h || *w <= 0 || *h <= 0) throw ParseError(line_no, "malformed frame size");
        ds.frame = {*w, *h};
      } else if (tok[0] == "track" && tok.size() == 4) {
        Track t;
        t.vehicle_id = std::string(tok[1]);
        if (!ids.insert(t.vehicle_id).second) throw ParseError(line_no, "duplicate track '" + t.vehicle_id + "'");
        try {
          t.color = parse_color(tok[2]);
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, e.what());
        }
        const auto dir = root / std::string(tok[3]);
        std::vector<std::filesystem::path> files;
        if (!std::filesystem::is_directory(dir)) throw DatasetError("missing track directory '" + dir.string() + "'");
        for (const auto& e : std::filesystem::directory_iterator(dir)) {
          if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DatasetError("track directory '" + dir.string() + "' has no annotation files");
        for (const auto& f : files) {
          try {
            t.frames.push_back(parse_annotation(read_file(f)));
          } catch (const ParseError& e) {
            throw DatasetError(f.string() + ": " + e.what());
          }
        }
        ds.tracks.push_back(std::move(t));
      } else {
        throw ParseError(line_no, "expected 'frame <W>x<H>' or 'track <id> <color> <dir>'");
      }
    } catch (const ParseError& e) {
      throw DatasetError(manifest.string() + ": " + e.what());
    }
  }
  for (const auto& t : ds.tracks) {
    const auto problems = check_track(t, ds.frame);
    if (!problems.empty()) throw DatasetError("track '" + t.vehicle_id + "': " + problems.front());
  }
  return ds;
}

void write_dataset(const std::filesystem::path& root, const Dataset& dataset) {
  std::filesystem::create_directories(root);
  std::ostringstream manifest;
  manifest << "frame " << dataset.frame.width << 'x' << dataset.frame.height << '\n';
  for (const auto& t : dataset.tracks) {
    const auto dir = root / t.vehicle_id;
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < t.frames.size(); ++i) write_file(dir / frame_file_name(i), write_annotation(t.frames[i]));
    manifest << "track " << t.vehicle_id << ' ' << color_name(t.color) << ' ' << t.vehicle_id << '\n';
  }
  write_file(root / "dataset.txt", manifest.str());
}

std::vector<std::string> read_id_list(const std::filesystem::path& file) {
  std::istringstream is(read_file(file));
  std::vector<std::string> ids;
  for (std::string line; std::getline(is, line);) {
    const auto t = text::trim(line);
    if (!t.empty() && !t.starts_with('#')) ids.emplace_back(t);
  }
  return ids;
}

void write_id_list(const std::filesystem::path& file, std::span<const std::string> ids) {
  std::string out;
  for (const auto& id : ids) out += id + '\n';
  write_file(file, out);
}

std::vector<Track> select_tracks(const Dataset& dataset, std::span<const std::string> ids) {
  std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<Track> out;
  for (const auto& t : dataset.tracks) {
    if (wanted.erase(t.vehicle_id)) out.push_back(t);
  }
  if (!wanted.empty()) throw DatasetError("unknown track id '" + *wanted.begin() + "'");
  return out;
}

}  // namespace alpr::dataset
