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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "CLI11.hpp"
#include "alpr/augment.hpp"
#include "alpr/config.hpp"
#include "alpr/dataset.hpp"
#include "alpr/error.hpp"
#include "alpr/eval.hpp"
#include "alpr/netspec.hpp"
#include "alpr/pipeline.hpp"

namespace fs = std::filesystem;
using namespace alpr;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // a check reported violations
  kConfigError = 2,
  kDatasetError = 3,
  kBackendError = 4,
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << s;
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

/// Config assembled from an optional file, then per-key flags, then globals.
struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", file, "config file (key: value lines)");
    for (const auto& key : config_keys()) {
      if (key == "seed" || key == "workers" || key == "output_dir") continue;  // global flags
      cmd->add_option(flag_name(key), values[key], "config key " + key);
    }
  }

  PipelineConfig build(const std::optional<std::uint64_t>& seed, const std::optional<unsigned>& workers,
                       const std::string& out) const {
    PipelineConfig c = file.empty() ? PipelineConfig{} : load_config(file);
    for (const auto& [key, v] : values) {
      if (!v.empty()) set_config_value(c, key, v);
    }
    if (seed) set_config_value(c, "seed", std::to_string(*seed));
    if (workers) set_config_value(c, "workers", std::to_string(*workers));
    if (!out.empty()) c.output_dir = out;
    return c;
  }
};

int cmd_netspec(const std::vector<std::string>& items) {
  bool ok = true;
  for (const auto& item : items) {
    netspec::ArchSpec arch;
    if (auto b = netspec::find_builtin(item)) {
      arch = *b;
    } else if (fs::is_regular_file(item)) {
      arch = netspec::parse_descriptor(read_text(item));
    } else {
      throw ConfigError("'" + item + "' is neither a builtin architecture nor a descriptor file");
    }
    const auto report = netspec::validate(arch);
    try {
      std::cout << netspec::shape_table(arch);
    } catch (const netspec::ShapeError&) {
      // the violations below name the failing layer
    }
    if (report.ok()) {
      std::cout << "valid\n";
    } else {
      ok = false;
      for (const auto& v : report.violations) {
        std::cout << "violation";
        if (v.layer) std::cout << " (layer " << *v.layer << ")";
        std::cout << ": " << v.message << '\n';
      }
    }
  }
  return ok ? kOk : kFailure;
}

void write_heatmap_png(const fs::path& path, const eval::HeatMap& map) {
  cv::Mat img(int(map.bins), int(map.bins), CV_8UC1);
  for (std::size_t r = 0; r < map.bins; ++r) {
    for (std::size_t c = 0; c < map.bins; ++c) img.at<std::uint8_t>(int(r), int(c)) = cv::saturate_cast<std::uint8_t>(map.at(r, c) * 255.0);
  }
  if (!cv::imwrite(path.string(), img)) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded license plate recognition: detection, segmentation, recognition and temporal voting"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
  app.add_option("--seed", seed, "random seed")->type_name("N");
  app.add_option("--workers", workers, "worker threads")->type_name("N");
  app.add_option("--out", out, "output directory (or file, where noted)");

  ConfigOptions run_opts;
  auto* run = app.add_subcommand("run", "run the pipeline on a dataset and write records and reports");
  run_opts.attach(run);

  ConfigOptions cal_opts;
  auto* calibrate = app.add_subcommand("calibrate", "calibrate threshold and margins on validation tracks");
  cal_opts.attach(calibrate);

  ConfigOptions report_opts;
  std::string records;
  auto* report = app.add_subcommand("report", "recompute reports from a records file");
  report_opts.attach(report);
  report->add_option("--records", records, "records.jsonl of an earlier run")->required();

  std::vector<std::string> arch_items;
  auto* netspec_cmd = app.add_subcommand("netspec", "print shape tables and validate architectures");
  netspec_cmd->add_option("archs", arch_items, "builtin names or descriptor files");

  std::string manifest_in;
  augment::AugmentOptions aug;
  bool no_negatives = false, no_flip_letters = false, no_flip_digits = false, no_negate_flips = false;
  std::string image_dir;
  auto* augment_cmd = app.add_subcommand("augment", "expand a training manifest with negatives and flips");
  augment_cmd->add_option("manifest", manifest_in, "input manifest")->required();
  augment_cmd->add_flag("--no-negatives", no_negatives);
  augment_cmd->add_flag("--no-flip-letters", no_flip_letters);
  augment_cmd->add_flag("--no-flip-digits", no_flip_digits);
  augment_cmd->add_flag("--no-negate-flips", no_negate_flips);
  augment_cmd->add_flag("--seed-letters-from-digits", aug.seed_letters_from_digits);
  augment_cmd->add_option("--images", image_dir, "directory holding the source patches; writes transformed images");

  std::size_t n_tracks = 150;
  dataset::SyntheticMix mix;
  dataset::SyntheticOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a synthetic annotated dataset");
  synth->add_option("-n,--tracks", n_tracks, "number of tracks");
  synth->add_option("--car-gray", mix.car_gray);
  synth->add_option("--car-red", mix.car_red);
  synth->add_option("--moto-gray", mix.moto_gray);
  synth->add_option("--frames", synth_opts.frames_per_track, "frames per track");
  synth->add_option("--protrusion", synth_opts.protrusion, "how far motorcycle plates may leave the vehicle box");

  std::string split_root;
  dataset::SplitFractions fractions;
  auto* split = app.add_subcommand("split", "split a dataset into train/test/validation id lists");
  split->add_option("dataset", split_root, "dataset root")->required();
  split->add_option("--train", fractions.train);
  split->add_option("--test", fractions.test);
  split->add_option("--validation", fractions.validation);

  std::string heat_root, heat_tracks, heat_target = "vehicles";
  std::size_t bins = 32;
  auto* heat = app.add_subcommand("heatmap", "log-normalized occupancy grid of vehicle or plate boxes");
  heat->add_option("dataset", heat_root, "dataset root")->required();
  heat->add_option("--tracks", heat_tracks, "id list restricting the tracks (e.g. a split)");
  heat->add_option("--target", heat_target)->check(CLI::IsMember({"vehicles", "plates"}));
  heat->add_option("--bins", bins)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) {
      const auto config = run_opts.build(seed, workers, out);
      eval::SteadyClock clock;
      const auto ev = pipeline::cmd_run(config, clock);
      std::cout << pipeline::report_text(ev);
      std::cout << "\nwrote " << (config.output_dir / "report.txt").string() << '\n';
    } else if (calibrate->parsed()) {
      const auto config = cal_opts.build(seed, workers, out);
      const auto res = pipeline::cmd_calibrate(config);
      std::printf("vehicle threshold: full recall at %g, deployed %g\n", res.vehicle_threshold.full_recall_threshold,
                  res.vehicle_threshold.deployed);
      std::printf("vehicle margin: required %g, deployed %g\n", res.vehicle_margin.required, res.vehicle_margin.deployed);
      std::printf("plate margin: required %g, deployed %g\n", res.plate_margin.required, res.plate_margin.deployed);
      std::cout << "wrote " << (config.output_dir / "calibrated.cfg").string() << '\n';
    } else if (report->parsed()) {
      const auto config = report_opts.build(seed, workers, out);
      const auto ev = pipeline::cmd_report(config, records);
      std::cout << pipeline::report_text(ev);
    } else if (netspec_cmd->parsed()) {
      if (arch_items.empty()) {
        std::cerr << "usage: alpr netspec <builtin-name | descriptor-file>...\nbuiltins:";
        for (const auto& a : netspec::builtin_archs()) std::cerr << ' ' << a.name;
        std::cerr << '\n';
        return kConfigError;
      }
      return cmd_netspec(arch_items);
    } else if (augment_cmd->parsed()) {
      aug.negatives = !no_negatives;
      aug.flip_letters = !no_flip_letters;
      aug.flip_digits = !no_flip_digits;
      aug.negate_flips = !no_negate_flips;
      const auto samples = augment::parse_manifest(read_text(manifest_in));
      const auto expanded = augment::expand_training_set(samples, aug);
      const auto text = augment::write_manifest(expanded);
      if (out.empty()) {
        std::cout << text;
      } else {
        write_text(out, text);
      }
      if (!image_dir.empty()) {
        const fs::path dest = out.empty() ? fs::path("augmented") : fs::path(out).parent_path() / "augmented";
        fs::create_directories(dest);
        for (const auto& s : expanded) {
          const auto img = augment::apply(augment::read_patch((fs::path(image_dir) / s.source_id).string()), s.transform);
          auto name = fs::path(s.source_id).stem().string() + "_" + augment::to_string(s.transform) + "_" + s.label + ".png";
          std::replace(name.begin(), name.end(), '+', '-');
          if (!cv::imwrite((dest / name).string(), img)) throw std::runtime_error("cannot write image " + name);
        }
      }
    } else if (synth->parsed()) {
      const fs::path root = out.empty() ? fs::path("synthetic") : fs::path(out);
      dataset::Dataset ds;
      ds.frame = synth_opts.frame;
      ds.tracks = dataset::generate_synthetic(seed.value_or(0), n_tracks, mix, synth_opts);
      dataset::write_dataset(root, ds);
      std::cout << "wrote " << ds.tracks.size() << " tracks to " << root.string() << '\n';
    } else if (split->parsed()) {
      const auto ds = dataset::load_dataset(split_root);
      const auto s = dataset::split_dataset(ds.tracks, fractions, seed.value_or(0));
      const fs::path dir = out.empty() ? fs::path(split_root) : fs::path(out);
      fs::create_directories(dir);
      dataset::write_id_list(dir / "train.txt", s.train);
      dataset::write_id_list(dir / "test.txt", s.test);
      dataset::write_id_list(dir / "validation.txt", s.validation);
      std::printf("train %zu, test %zu, validation %zu\n", s.train.size(), s.test.size(), s.validation.size());
    } else if (heat->parsed()) {
      const auto ds = dataset::load_dataset(heat_root);
      std::vector<dataset::Track> tracks = ds.tracks;
      if (!heat_tracks.empty()) tracks = dataset::select_tracks(ds, dataset::read_id_list(heat_tracks));
      std::vector<BBox> boxes;
      for (const auto& t : tracks) {
        for (const auto& f : t.frames) boxes.push_back(heat_target == "plates" ? f.plate.box : f.vehicle.box);
      }
      const auto map = eval::heatmap(boxes, ds.frame, bins);
      const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
      fs::create_directories(dir);
      write_text(dir / ("heatmap-" + heat_target + ".txt"), eval::heatmap_text(map));
      write_heatmap_png(dir / ("heatmap-" + heat_target + ".png"), map);
      std::cout << "wrote " << (dir / ("heatmap-" + heat_target + ".txt")).string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dataset::DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << '\n';
    return kDatasetError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kDatasetError;
  } catch (const BackendUnavailable& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const augment::UnreadablePatch& e) {
    std::cerr << "dataset error: " << e.what() << '\n';
    return kDatasetError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
