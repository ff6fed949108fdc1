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

#include "alpr/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "alpr/error.hpp"
#include "text_util.hpp"

namespace alpr {

StageConfig PipelineConfig::vehicle_stage() const {
  return {vehicle_arch, DetectionTarget::kVehicle, vehicle_threshold, vehicle_margin, SelectPolicy::kAllAboveThreshold};
}

StageConfig PipelineConfig::plate_stage() const {
  return {plate_arch, DetectionTarget::kPlate, 0.0, plate_margin, SelectPolicy::kSingleBest};
}

StageConfig PipelineConfig::charseg_stage() const {
  return {charseg_arch, DetectionTarget::kCharacter, charseg_threshold, 0.0, SelectPolicy::kAllAboveThreshold};
}

namespace {

struct Field {
  std::string key;
  std::string comment;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

double to_double(std::string_view key, std::string_view v) {
  const auto n = text::parse_number(v);
  if (!n) throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return *n;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("'" + std::string(key) + "' expects true/false, got '" + std::string(v) + "'");
}

MarginPolicy to_policy(std::string_view key, std::string_view v) {
  if (v == "double") return MarginPolicy::kDouble;
  if (v == "keep") return MarginPolicy::kKeep;
  throw ConfigError("'" + std::string(key) + "' expects double/keep, got '" + std::string(v) + "'");
}

std::string policy_text(MarginPolicy p) { return p == MarginPolicy::kDouble ? "double" : "keep"; }
std::string bool_text(bool b) { return b ? "true" : "false"; }

template <class Member>
Field number(std::string key, std::string comment, Member member) {
  return {key, std::move(comment), [key, member](PipelineConfig& c, std::string_view v) { member(c) = to_double(key, v); },
          [member](const PipelineConfig& c) { return text::format_number(member(const_cast<PipelineConfig&>(c))); }};
}

template <class Member>
Field string_field(std::string key, std::string comment, Member member) {
  return {key, std::move(comment), [member](PipelineConfig& c, std::string_view v) { member(c) = std::string(v); },
          [member](const PipelineConfig& c) { return std::string(member(const_cast<PipelineConfig&>(c))); }};
}

template <class Member>
Field flag(std::string key, std::string comment, Member member) {
  return {key, std::move(comment), [key, member](PipelineConfig& c, std::string_view v) { member(c) = to_bool(key, v); },
          [member](const PipelineConfig& c) { return bool_text(member(const_cast<PipelineConfig&>(c))); }};
}

template <class Member>
Field policy(std::string key, std::string comment, Member member) {
  return {key, std::move(comment),
          [key, member](PipelineConfig& c, std::string_view v) { member(c) = to_policy(key, v); },
          [member](const PipelineConfig& c) { return policy_text(member(const_cast<PipelineConfig&>(c))); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"dataset_root", "directory holding dataset.txt",
                 [](PipelineConfig& c, std::string_view s) { c.dataset_root = std::string(s); },
                 [](const PipelineConfig& c) { return c.dataset_root.string(); }});
    v.push_back({"tracks", "optional file of track ids to process (one per line)",
                 [](PipelineConfig& c, std::string_view s) { c.tracks_file = std::string(s); },
                 [](const PipelineConfig& c) { return c.tracks_file.string(); }});
    v.push_back({"output_dir", "", [](PipelineConfig& c, std::string_view s) { c.output_dir = std::string(s); },
                 [](const PipelineConfig& c) { return c.output_dir.string(); }});
    v.push_back({"seed", "",
                 [](PipelineConfig& c, std::string_view s) {
                   const auto n = text::parse_integer<std::uint64_t>(s);
                   if (!n) throw ConfigError("'seed' expects a non-negative integer");
                   c.seed = *n;
                   c.noise.seed = *n;
                 },
                 [](const PipelineConfig& c) { return std::to_string(c.seed); }});
    v.push_back({"workers", "frame-parallel workers; results do not depend on it",
                 [](PipelineConfig& c, std::string_view s) {
                   const auto n = text::parse_integer<unsigned>(s);
                   if (!n || *n == 0) throw ConfigError("'workers' expects a positive integer");
                   c.workers = *n;
                 },
                 [](const PipelineConfig& c) { return std::to_string(c.workers); }});
    v.push_back(string_field("backend", "detector/classifier backend (simulated)",
                             [](PipelineConfig& c) -> std::string& { return c.backend; }));
    v.push_back(number("noise_miss_rate", "simulated backend: probability a true object is missed",
                       [](PipelineConfig& c) -> double& { return c.noise.miss_rate; }));
    v.push_back(number("noise_false_positive_rate", "simulated backend: expected spurious boxes per request",
                       [](PipelineConfig& c) -> double& { return c.noise.false_positive_rate; }));
    v.push_back(number("noise_jitter", "simulated backend: max pixel offset per box edge",
                       [](PipelineConfig& c) -> double& { return c.noise.jitter; }));
    v.push_back(number("noise_true_confidence_floor", "true detections draw confidence from [floor, 1]",
                       [](PipelineConfig& c) -> double& { return c.noise.true_confidence_floor; }));
    v.push_back(number("noise_fp_confidence_min", "",
                       [](PipelineConfig& c) -> double& { return c.noise.fp_confidence_min; }));
    v.push_back(number("noise_fp_confidence_max", "",
                       [](PipelineConfig& c) -> double& { return c.noise.fp_confidence_max; }));
    v.push_back(number("char_confusion_rate", "oracle classifier: probability of a wrong label",
                       [](PipelineConfig& c) -> double& { return c.char_confusion_rate; }));
    v.push_back(string_field("vehicle_arch", "two classes: car, motorcycle",
                             [](PipelineConfig& c) -> std::string& { return c.vehicle_arch; }));
    v.push_back(number("vehicle_threshold", "half of the validation full-recall threshold (0.25 -> 0.125)",
                       [](PipelineConfig& c) -> double& { return c.vehicle_threshold; }));
    v.push_back(number("vehicle_margin", "fraction of the vehicle box added per side (5% doubled)",
                       [](PipelineConfig& c) -> double& { return c.vehicle_margin; }));
    v.push_back(policy("vehicle_margin_policy", "calibration: double or keep the validation margin",
                       [](PipelineConfig& c) -> MarginPolicy& { return c.vehicle_margin_policy; }));
    v.push_back(string_field("plate_arch", "plate threshold is always 0, best candidate only",
                             [](PipelineConfig& c) -> std::string& { return c.plate_arch; }));
    v.push_back(number("plate_aspect", "plates are widened to this w/h before segmentation",
                       [](PipelineConfig& c) -> double& { return c.plate_aspect; }));
    v.push_back(number("plate_margin", "fraction of the plate box added per side (10%, not doubled)",
                       [](PipelineConfig& c) -> double& { return c.plate_margin; }));
    v.push_back(policy("plate_margin_policy", "",
                       [](PipelineConfig& c) -> MarginPolicy& { return c.plate_margin_policy; }));
    v.push_back(string_field("charseg_arch", "",
                             [](PipelineConfig& c) -> std::string& { return c.charseg_arch; }));
    v.push_back(number("charseg_threshold", "low threshold to miss as few characters as possible",
                       [](PipelineConfig& c) -> double& { return c.charseg_threshold; }));
    v.push_back(string_field("letters_arch", "", [](PipelineConfig& c) -> std::string& { return c.letters.arch; }));
    v.push_back(number("letters_padding", "pixels per side (2 on the car-only dataset)",
                       [](PipelineConfig& c) -> double& { return c.letters.padding; }));
    v.push_back(string_field("digits_arch", "", [](PipelineConfig& c) -> std::string& { return c.digits.arch; }));
    v.push_back(number("digits_padding", "pixels per side",
                       [](PipelineConfig& c) -> double& { return c.digits.padding; }));
    v.push_back(flag("flip_letters", "flip augmentation for letters",
                     [](PipelineConfig& c) -> bool& { return c.flip_letters; }));
    v.push_back(flag("flip_digits", "flip augmentation for digits (hurt digits on the car-only dataset)",
                     [](PipelineConfig& c) -> bool& { return c.flip_digits; }));
    v.push_back({"arch_files", "comma-separated architecture descriptor files",
                 [](PipelineConfig& c, std::string_view s) {
                   c.arch_files.clear();
                   std::size_t pos = 0;
                   while (pos <= s.size()) {
                     const auto comma = s.find(',', pos);
                     const auto item = text::trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos));
                     if (!item.empty()) c.arch_files.emplace_back(std::string(item));
                     if (comma == std::string_view::npos) break;
                     pos = comma + 1;
                   }
                 },
                 [](const PipelineConfig& c) {
                   std::string out;
                   for (const auto& p : c.arch_files) out += (out.empty() ? "" : ",") + p.string();
                   return out;
                 }});
    return v;
  }();
  return f;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  field(key).set(config, text::trim(value));
}

std::string get_config_value(const PipelineConfig& config, std::string_view key) { return field(key).get(config); }

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig c;
  std::istringstream is{std::string(text)};
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = text::trim(line);
    if (t.empty()) continue;
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) throw ConfigError("line " + std::to_string(n) + ": expected '<key>: <value>'");
    try {
      set_config_value(c, text::trim(t.substr(0, colon)), t.substr(colon + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return c;
}

std::string write_config(const PipelineConfig& config) {
  std::ostringstream os;
  for (const auto& f : fields()) {
    if (!f.comment.empty()) os << "# " << f.comment << '\n';
    os << f.key << ':';
    const auto v = f.get(config);
    if (!v.empty()) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

PipelineConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<netspec::ArchSpec> available_archs(const PipelineConfig& config) {
  auto archs = netspec::builtin_archs();
  for (const auto& p : config.arch_files) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open architecture descriptor '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      archs.push_back(netspec::parse_descriptor(ss.str()));
    } catch (const ParseError& e) {
      throw ConfigError(p.string() + ": " + e.what());
    }
  }
  return archs;
}

void check_config(const PipelineConfig& c) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(c.vehicle_threshold)) throw ConfigError("vehicle_threshold must lie in [0,1]");
  if (!in01(c.charseg_threshold)) throw ConfigError("charseg_threshold must lie in [0,1]");
  if (c.vehicle_margin < 0.0 || c.plate_margin < 0.0) throw ConfigError("margins must be non-negative");
  if (!(c.plate_aspect > 0.0)) throw ConfigError("plate_aspect must be positive");
  if (c.letters.padding < 0.0 || c.digits.padding < 0.0) throw ConfigError("paddings must be non-negative");
  if (!in01(c.char_confusion_rate)) throw ConfigError("char_confusion_rate must lie in [0,1]");
  if (c.workers == 0) throw ConfigError("workers must be positive");
  if (c.backend != "simulated") throw ConfigError("unknown backend '" + c.backend + "' (available: simulated)");
  try {
    check_noise_model(c.noise);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto archs = available_archs(c);
  auto lookup = [&](const std::string& name) -> const netspec::ArchSpec& {
    for (const auto& a : archs) {
      if (a.name == name) return a;
    }
    throw ConfigError("unknown architecture '" + name + "'");
  };
  for (const auto* name : {&c.vehicle_arch, &c.plate_arch, &c.charseg_arch}) {
    const auto report = netspec::validate(lookup(*name));
    if (!report.ok()) throw ConfigError(*name + ": " + report.violations.front().message);
  }
  if (lookup(c.vehicle_arch).classes > 2) throw ConfigError("vehicle_arch must have one or two classes");
  for (const auto* cls : {&c.letters, &c.digits}) {
    const auto problems = check_classifier(*cls, lookup(cls->arch));
    if (!problems.empty()) throw ConfigError(problems.front());
  }
}

}  // namespace alpr
