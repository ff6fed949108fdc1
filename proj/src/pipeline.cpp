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

#include "alpr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "alpr/error.hpp"
#include "alpr/temporal.hpp"

namespace alpr::pipeline {

using nlohmann::json;

std::shared_ptr<SceneStore> build_scenes(std::span<const dataset::Track> tracks, int vehicle_classes) {
  auto scenes = std::make_shared<SceneStore>();
  for (const auto& track : tracks) {
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
      const auto& ann = track.frames[i];
      const auto source = dataset::frame_source(track, i);
      const int vehicle_class = vehicle_classes == 2 && ann.vehicle.type == VehicleType::kMotorcycle ? 1 : 0;
      scenes->add(source, {DetectionTarget::kVehicle, vehicle_class, ann.vehicle.box, 0});
      scenes->add(source, {DetectionTarget::kPlate, 0, ann.plate.box, 0});
      for (std::size_t c = 0; c < kPlateSlots; ++c) {
        scenes->add(source, {DetectionTarget::kCharacter, 0, ann.chars[c], ann.plate.text[c]});
      }
    }
  }
  return scenes;
}

namespace {

int vehicle_class_count(const PipelineConfig& config) {
  for (const auto& a : available_archs(config)) {
    if (a.name == config.vehicle_arch) return a.classes;
  }
  throw ConfigError("unknown architecture '" + config.vehicle_arch + "'");
}

}  // namespace

Backends make_backends(const PipelineConfig& config, std::span<const dataset::Track> tracks) {
  if (config.backend != "simulated") throw ConfigError("unknown backend '" + config.backend + "'");
  auto noise = config.noise;
  noise.seed = config.seed;
  std::shared_ptr<const SceneStore> scenes = build_scenes(tracks, vehicle_class_count(config));
  return {std::make_shared<SimulatedDetector>(scenes, noise),
          std::make_shared<OracleCharClassifier>(scenes, config.seed, config.char_confusion_rate)};
}

std::optional<LPString> FrameResult::reading() const {
  for (const auto& v : vehicles) {
    if (v.reading) return v.reading->text;
  }
  return std::nullopt;
}

VehicleType infer_vehicle_type(const Detection& vehicle, const Detection& plate, int vehicle_classes) {
  if (vehicle_classes == 2) return vehicle.class_id == 1 ? VehicleType::kMotorcycle : VehicleType::kCar;
  return plate.box.w < 2.0 * plate.box.h ? VehicleType::kMotorcycle : VehicleType::kCar;
}

FrameResult process_frame(const Backends& backends, const PipelineConfig& config, int vehicle_classes,
                          const ImageRef& frame, const eval::Clock& clock, FrameTiming* timing) {
  FrameTiming local;
  FrameTiming& t = timing ? *timing : local;
  FrameResult out;

  double start = clock.now_ms();
  const auto candidates = vehicle_stage(*backends.detector, frame, config.vehicle_stage());
  double now = clock.now_ms();
  t.vehicle_ms += now - start;

  for (const auto& cand : candidates) {
    VehicleResult vr;
    vr.vehicle = cand.detection;

    start = clock.now_ms();
    ++t.plate_inputs;
    std::optional<Detection> plate;
    try {
      plate = lp_stage(*backends.detector, frame.with_patch(cand.patch), config.plate_stage());
    } catch (const NoPlateFound&) {
    }
    now = clock.now_ms();
    t.plate_ms += now - start;
    vr.plate = plate;
    if (!plate) {
      out.vehicles.push_back(std::move(vr));
      continue;
    }

    start = clock.now_ms();
    ++t.charseg_inputs;
    const auto type = infer_vehicle_type(cand.detection, *plate, vehicle_classes);
    const BBox seg_patch =
        enlarge_to_aspect(expand_margin(plate->box, config.plate_margin, frame.frame), config.plate_aspect, frame.frame);
    std::vector<CharCandidate> chars;
    for (const auto& d : detect(*backends.detector, frame.with_patch(seg_patch), config.charseg_stage())) {
      chars.push_back({to_absolute(d.box, seg_patch), d.confidence});
    }
    vr.raw_chars = chars.size();
    std::optional<std::array<CharCandidate, kPlateSlots>> ordered;
    if (chars.size() >= kPlateSlots) {
      ordered = order_characters(resolve_overlaps(chars, type), type);
      vr.chars.assign(ordered->begin(), ordered->end());
    } else {
      vr.chars = std::move(chars);
    }
    now = clock.now_ms();
    t.charseg_ms += now - start;

    if (ordered) {
      start = clock.now_ms();
      std::array<ImageRef, kPlateSlots> slots;
      for (std::size_t i = 0; i < kPlateSlots; ++i) slots[i] = frame.with_patch((*ordered)[i].box);
      vr.reading = read_plate(slots, config.letters, config.digits, *backends.classifier);
      t.char_inputs += kPlateSlots;
      t.recognition_ms += clock.now_ms() - start;
    }
    out.vehicles.push_back(std::move(vr));
  }
  return out;
}

RunOutput run_frames(const Backends& backends, const PipelineConfig& config, std::span<const dataset::Track> tracks,
                     const FrameDims& frame, const eval::Clock& clock) {
  struct Job {
    const dataset::Track* track;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& track : tracks) {
    for (std::size_t i = 0; i < track.frames.size(); ++i) jobs.push_back({&track, i});
  }
  const int classes = vehicle_class_count(config);

  RunOutput out;
  out.frames.resize(jobs.size());
  out.timings.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto& job = jobs[j];
        const auto image = ImageRef::whole_frame(dataset::frame_source(*job.track, job.index), frame);
        auto result = process_frame(backends, config, classes, image, clock, &out.timings[j]);
        result.vehicle_id = job.track->vehicle_id;
        result.frame_index = int(job.index);
        out.frames[j] = std::move(result);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(jobs.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Evaluation evaluate(std::span<const FrameResult> frames, std::span<const dataset::Track> tracks) {
  std::map<std::string, const dataset::Track*> by_id;
  for (const auto& t : tracks) by_id[t.vehicle_id] = &t;

  Evaluation ev;
  std::map<std::string, TrackPredictions> votes;
  for (const auto& f : frames) {
    const auto it = by_id.find(f.vehicle_id);
    if (it == by_id.end()) throw std::invalid_argument("result for unknown track '" + f.vehicle_id + "'");
    const auto& track = *it->second;
    if (f.frame_index < 0 || std::size_t(f.frame_index) >= track.frames.size()) {
      throw std::invalid_argument("frame " + std::to_string(f.frame_index) + " out of range for '" + f.vehicle_id + "'");
    }
    const auto& ann = track.frames[std::size_t(f.frame_index)];

    std::vector<Detection> vehicles;
    std::vector<Detection> plates;
    std::vector<Detection> chars;
    for (const auto& v : f.vehicles) {
      vehicles.push_back(v.vehicle);
      if (v.plate) {
        plates.push_back(*v.plate);
        if (v.raw_chars < kPlateSlots) ++ev.under_segmented;
      }
      for (const auto& c : v.chars) chars.push_back({0, c.confidence, c.box});
    }
    const BBox vehicle_gt[] = {ann.vehicle.box};
    const BBox plate_gt[] = {ann.plate.box};
    ev.vehicle += eval::match_detections(vehicles, vehicle_gt);
    ev.plate += eval::match_detections(plates, plate_gt);
    ev.charseg += eval::match_detections(chars, ann.chars);
    ev.gt_vehicles += 1;
    ev.gt_plates += 1;
    ev.gt_chars += kPlateSlots;

    const auto reading = f.reading();
    ev.readings.push_back({f.vehicle_id, f.frame_index, !f.vehicles.empty(), reading});
    auto& tp = votes[f.vehicle_id];
    tp.vehicle_id = f.vehicle_id;
    for (const auto& v : f.vehicles) {
      if (v.reading) {
        tp.readings.push_back({f.frame_index, v.reading->text, v.reading->confidences});
        break;
      }
    }
  }

  std::vector<eval::TrackTruth> truth;
  for (const auto& t : tracks) {
    truth.push_back({t.vehicle_id, t.plate(), t.frames.size()});
    const auto it = votes.find(t.vehicle_id);
    if (it == votes.end()) continue;  // track not processed
    eval::FusedReading fused{t.vehicle_id, std::nullopt};
    if (!it->second.readings.empty()) fused.reading = majority_vote(it->second);
    ev.fused.push_back(std::move(fused));
  }
  ev.recognition = eval::recognition_rates(ev.readings, ev.fused, truth);
  return ev;
}

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string ratio_text(const eval::Ratio& r) {
  return percent(r.value()) + " (" + std::to_string(r.hits) + "/" + std::to_string(r.total) + ")";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string report_text(const Evaluation& ev) {
  std::ostringstream os;
  os << pad("stage", 26) << pad("recall", 10) << pad("precision", 11) << pad("tp", 9) << pad("fp", 9) << pad("fn", 9)
     << "ground truth\n";
  auto row = [&](const char* name, const eval::StageCounts& c, std::size_t gt) {
    os << pad(name, 26) << pad(percent(c.recall()), 10) << pad(percent(c.precision()), 11)
       << pad(std::to_string(c.tp), 9) << pad(std::to_string(c.fp), 9) << pad(std::to_string(c.fn), 9) << gt << '\n';
  };
  row("vehicle detection", ev.vehicle, ev.gt_vehicles);
  row("plate detection", ev.plate, ev.gt_plates);
  row("character segmentation", ev.charseg, ev.gt_chars);

  const auto& r = ev.recognition;
  os << '\n'
     << pad("recognition", 26) << pad("frames", 24) << pad("vehicles (voted)", 24) << "frame-weighted (voted)\n";
  os << pad("all characters", 26) << pad(ratio_text(r.frames_all_correct), 24)
     << pad(ratio_text(r.vehicles_all_correct_redundant), 24) << ratio_text(r.frame_weighted_redundant) << '\n';
  os << pad("at least 6 characters", 26) << pad(ratio_text(r.frames_geq6), 24)
     << pad(ratio_text(r.vehicles_geq6_redundant), 24) << ratio_text(r.frame_weighted_geq6_redundant) << '\n';
  os << pad("letters", 26) << pad(ratio_text(r.frames_letters_correct), 24)
     << ratio_text(r.vehicles_letters_correct_redundant) << '\n';
  os << pad("digits", 26) << pad(ratio_text(r.frames_digits_correct), 24)
     << ratio_text(r.vehicles_digits_correct_redundant) << '\n';
  os << pad("per character", 26) << ratio_text(r.characters_correct) << '\n';

  os << "\nframes: " << r.frames_total << " total, " << r.frames_negative << " negative, " << r.frames_unread
     << " unread, " << ev.under_segmented << " under-segmented plates\n";
  return os.str();
}

std::string report_jsonl(const Evaluation& ev) {
  std::ostringstream os;
  auto stage = [&](const char* name, const eval::StageCounts& c, std::size_t gt) {
    os << json{{"stage", name},           {"recall", c.recall()}, {"precision", c.precision()}, {"tp", c.tp},
               {"fp", c.fp},              {"fn", c.fn},           {"ground_truth", gt}}
              .dump()
       << '\n';
  };
  stage("vehicle", ev.vehicle, ev.gt_vehicles);
  stage("plate", ev.plate, ev.gt_plates);
  stage("charseg", ev.charseg, ev.gt_chars);
  const auto& r = ev.recognition;
  auto rate = [&](const char* name, const eval::Ratio& x) {
    os << json{{"metric", name}, {"value", x.value()}, {"hits", x.hits}, {"total", x.total}}.dump() << '\n';
  };
  rate("frames_all_correct", r.frames_all_correct);
  rate("frames_geq6", r.frames_geq6);
  rate("frames_letters_correct", r.frames_letters_correct);
  rate("frames_digits_correct", r.frames_digits_correct);
  rate("characters_correct", r.characters_correct);
  rate("vehicles_all_correct_redundant", r.vehicles_all_correct_redundant);
  rate("vehicles_geq6_redundant", r.vehicles_geq6_redundant);
  rate("vehicles_letters_correct_redundant", r.vehicles_letters_correct_redundant);
  rate("vehicles_digits_correct_redundant", r.vehicles_digits_correct_redundant);
  rate("frame_weighted_redundant", r.frame_weighted_redundant);
  rate("frame_weighted_geq6_redundant", r.frame_weighted_geq6_redundant);
  os << json{{"frames_total", r.frames_total},
             {"frames_negative", r.frames_negative},
             {"frames_unread", r.frames_unread},
             {"under_segmented", ev.under_segmented}}
            .dump()
     << '\n';
  return os.str();
}

std::string fused_text(const Evaluation& ev) {
  std::ostringstream os;
  for (const auto& f : ev.fused) os << f.vehicle_id << ' ' << (f.reading ? f.reading->str() : "-") << '\n';
  return os.str();
}

std::string timing_text(std::span<const FrameTiming> timings) {
  eval::StageTiming stages[4] = {{"vehicle detection", 0, 0, 1},
                                 {"plate detection", 0, 0, 1},
                                 {"character segmentation", 0, 0, 1},
                                 {"character recognition", 0, 0, unsigned(kPlateSlots)}};
  for (const auto& t : timings) {
    stages[0].total_ms += t.vehicle_ms;
    stages[0].inputs += 1;
    stages[1].total_ms += t.plate_ms;
    stages[1].inputs += t.plate_inputs;
    stages[2].total_ms += t.charseg_ms;
    stages[2].inputs += t.charseg_inputs;
    stages[3].total_ms += t.recognition_ms;
    stages[3].inputs += t.char_inputs;
  }
  std::ostringstream os;
  os << pad("stage", 26) << pad("mean ms", 12) << pad("repeat", 8) << "fps\n";
  for (const auto& m : eval::timing_report(stages)) {
    char ms[32];
    char fps[32];
    std::snprintf(ms, sizeof ms, "%.4f", m.mean_ms);
    std::snprintf(fps, sizeof fps, "%.1f", m.fps);
    os << pad(m.stage, 26) << pad(ms, 12) << pad(std::to_string(m.repeat), 8) << fps << '\n';
  }
  return os.str();
}

namespace {

json box_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BBox box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("box must be [x, y, w, h]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json detection_json(const Detection& d) {
  return {{"class", d.class_id}, {"confidence", d.confidence}, {"box", box_json(d.box)}};
}

Detection detection_from(const json& j) {
  return {j.at("class").get<int>(), j.at("confidence").get<double>(), box_from(j.at("box"))};
}

}  // namespace

std::string records_jsonl(std::span<const FrameResult> frames) {
  std::ostringstream os;
  for (const auto& f : frames) {
    json vehicles = json::array();
    for (const auto& v : f.vehicles) vehicles.push_back(detection_json(v.vehicle));
    os << json{{"stage", "vehicle"}, {"track", f.vehicle_id}, {"frame", f.frame_index}, {"detections", vehicles}}.dump()
       << '\n';
    for (std::size_t k = 0; k < f.vehicles.size(); ++k) {
      const auto& v = f.vehicles[k];
      json head = {{"track", f.vehicle_id}, {"frame", f.frame_index}, {"vehicle", k}};
      json plate = head;
      plate["stage"] = "plate";
      plate["detection"] = v.plate ? detection_json(*v.plate) : json(nullptr);
      os << plate.dump() << '\n';
      if (!v.plate) continue;
      json seg = head;
      seg["stage"] = "charseg";
      seg["candidates"] = v.raw_chars;
      seg["chars"] = json::array();
      for (const auto& c : v.chars) seg["chars"].push_back({{"confidence", c.confidence}, {"box", box_json(c.box)}});
      os << seg.dump() << '\n';
      if (!v.reading) continue;
      json rec = head;
      rec["stage"] = "recognition";
      rec["text"] = v.reading->text.str();
      rec["confidences"] = v.reading->confidences;
      os << rec.dump() << '\n';
    }
  }
  return os.str();
}

std::vector<FrameResult> parse_records(std::string_view text) {
  std::vector<FrameResult> frames;
  std::istringstream is{std::string(text)};
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      const auto stage = j.at("stage").get<std::string>();
      const auto track = j.at("track").get<std::string>();
      const int frame = j.at("frame").get<int>();
      if (stage == "vehicle") {
        FrameResult f;
        f.vehicle_id = track;
        f.frame_index = frame;
        for (const auto& d : j.at("detections")) f.vehicles.push_back({detection_from(d), {}, 0, {}, {}});
        frames.push_back(std::move(f));
        continue;
      }
      if (frames.empty() || frames.back().vehicle_id != track || frames.back().frame_index != frame) {
        throw std::invalid_argument("'" + stage + "' record before its vehicle record");
      }
      const auto k = j.at("vehicle").get<std::size_t>();
      auto& vehicles = frames.back().vehicles;
      if (k >= vehicles.size()) throw std::invalid_argument("vehicle index out of range");
      auto& v = vehicles[k];
      if (stage == "plate") {
        const auto& d = j.at("detection");
        if (!d.is_null()) v.plate = detection_from(d);
      } else if (stage == "charseg") {
        v.raw_chars = j.at("candidates").get<std::size_t>();
        for (const auto& c : j.at("chars")) v.chars.push_back({box_from(c.at("box")), c.at("confidence").get<double>()});
      } else if (stage == "recognition") {
        PlateReading r;
        r.text = LPString::parse(j.at("text").get<std::string>());
        r.confidences = j.at("confidences").get<std::array<double, kPlateSlots>>();
        v.reading = r;
      } else {
        throw std::invalid_argument("unknown stage '" + stage + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(n, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(n, e.what());
    }
  }
  return frames;
}

dataset::Dataset load_run_dataset(const PipelineConfig& config, std::vector<dataset::Track>& tracks) {
  if (config.dataset_root.empty()) throw ConfigError("dataset_root is not set");
  if (!std::filesystem::is_directory(config.dataset_root)) {
    throw ConfigError("dataset_root '" + config.dataset_root.string() + "' is not a directory");
  }
  auto ds = dataset::load_dataset(config.dataset_root);
  if (config.tracks_file.empty()) {
    tracks = ds.tracks;
  } else {
    if (!std::filesystem::is_regular_file(config.tracks_file)) {
      throw ConfigError("tracks file '" + config.tracks_file.string() + "' does not exist");
    }
    const auto ids = dataset::read_id_list(config.tracks_file);
    tracks = dataset::select_tracks(ds, ids);
  }
  return ds;
}

Evaluation cmd_run(const PipelineConfig& config, const eval::Clock& clock) {
  check_config(config);
  std::vector<dataset::Track> tracks;
  const auto ds = load_run_dataset(config, tracks);
  const auto backends = make_backends(config, tracks);
  const auto out = run_frames(backends, config, tracks, ds.frame, clock);
  auto ev = evaluate(out.frames, tracks);

  std::filesystem::create_directories(config.output_dir);
  write_file(config.output_dir / "records.jsonl", records_jsonl(out.frames));
  write_file(config.output_dir / "fused.txt", fused_text(ev));
  write_file(config.output_dir / "report.txt", report_text(ev));
  write_file(config.output_dir / "report.jsonl", report_jsonl(ev));
  write_file(config.output_dir / "timing.txt", timing_text(out.timings));
  return ev;
}

Evaluation cmd_report(const PipelineConfig& config, const std::filesystem::path& records) {
  std::vector<dataset::Track> tracks;
  load_run_dataset(config, tracks);
  const auto frames = parse_records(read_file(records));
  auto ev = evaluate(frames, tracks);
  std::filesystem::create_directories(config.output_dir);
  write_file(config.output_dir / "fused.txt", fused_text(ev));
  write_file(config.output_dir / "report.txt", report_text(ev));
  write_file(config.output_dir / "report.jsonl", report_jsonl(ev));
  return ev;
}

CalibrationOutcome calibrate(const PipelineConfig& config, const Backends& backends,
                             std::span<const dataset::Track> tracks, const FrameDims& frame) {
  CalibrationOutcome out;
  out.calibrated = config;

  struct Item {
    ImageRef image;
    const dataset::FrameAnnotation* ann;
  };
  std::vector<Item> items;
  for (const auto& t : tracks) {
    for (std::size_t i = 0; i < t.frames.size(); ++i) {
      items.push_back({ImageRef::whole_frame(dataset::frame_source(t, i), frame), &t.frames[i]});
    }
  }

  StageConfig open = config.vehicle_stage();
  open.confidence_threshold = 0.0;
  std::vector<ValidationFrame> vframes;
  for (const auto& it : items) vframes.push_back({detect(*backends.detector, it.image, open), {it.ann->vehicle.box}});
  out.vehicle_threshold = calibrate_threshold(vframes);
  out.calibrated.vehicle_threshold = out.vehicle_threshold.deployed;

  StageConfig vehicles = config.vehicle_stage();
  vehicles.confidence_threshold = out.vehicle_threshold.deployed;
  vehicles.margin = 0.0;
  std::vector<std::pair<const Item*, Detection>> matched;
  std::vector<ContainmentSample> plate_samples;
  for (const auto& it : items) {
    std::vector<Detection> found;
    for (const auto& c : vehicle_stage(*backends.detector, it.image, vehicles)) found.push_back(c.detection);
    const BBox gt[] = {it.ann->vehicle.box};
    for (const auto& [p, g] : eval::match_detections(found, gt).pairs) {
      matched.emplace_back(&it, found[p]);
      plate_samples.push_back({found[p].box, it.ann->plate.box});
    }
  }
  out.vehicle_margin = calibrate_margin(plate_samples, frame, config.vehicle_margin_policy);
  out.calibrated.vehicle_margin = out.vehicle_margin.deployed;

  std::vector<ContainmentSample> char_samples;
  for (const auto& [it, vehicle] : matched) {
    const auto patch = expand_margin(vehicle.box, out.vehicle_margin.deployed, frame);
    Detection plate;
    try {
      plate = lp_stage(*backends.detector, it->image.with_patch(patch), config.plate_stage());
    } catch (const NoPlateFound&) {
      continue;
    }
    if (iou(plate.box, it->ann->plate.box) < eval::kCorrectIoU) continue;
    for (const auto& c : it->ann->chars) char_samples.push_back({plate.box, c});
  }
  out.plate_margin = calibrate_margin(char_samples, frame, config.plate_margin_policy);
  out.calibrated.plate_margin = out.plate_margin.deployed;
  return out;
}

CalibrationOutcome cmd_calibrate(const PipelineConfig& config) {
  check_config(config);
  std::vector<dataset::Track> tracks;
  const auto ds = load_run_dataset(config, tracks);
  const auto backends = make_backends(config, tracks);
  auto out = calibrate(config, backends, tracks, ds.frame);
  std::filesystem::create_directories(config.output_dir);
  write_file(config.output_dir / "calibrated.cfg", write_config(out.calibrated));
  return out;
}

}  // namespace alpr::pipeline
