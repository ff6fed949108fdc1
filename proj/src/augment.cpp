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

#include "alpr/augment.hpp"

#include <sstream>

#include <opencv2/imgcodecs.hpp>

#include "alpr/error.hpp"

namespace alpr::augment {

const std::vector<FlipRule>& flip_table() {
  static const std::vector<FlipRule> table = [] {
    const std::string vertical = "0138BCDEHIKOX";
    const std::string horizontal = "018AHIMOTUVWXY";
    const std::string both = "01689HINOSXZ";
    std::vector<FlipRule> rules;
    const std::string all = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    for (char c : all) {
      FlipRule r{c, vertical.find(c) != std::string::npos, horizontal.find(c) != std::string::npos,
                 both.find(c) != std::string::npos, 0};
      if (r.both_ok) r.both_maps_to = c == '6' ? '9' : c == '9' ? '6' : c;
      if (r.vertical_ok || r.horizontal_ok || r.both_ok) rules.push_back(r);
    }
    return rules;
  }();
  return table;
}

std::vector<FlipVariant> flip_variants(char label) {
  for (const auto& r : flip_table()) {
    if (r.label != label) continue;
    std::vector<FlipVariant> v;
    if (r.vertical_ok) v.push_back({FlipDirection::kVertical, label});
    if (r.horizontal_ok) v.push_back({FlipDirection::kHorizontal, label});
    if (r.both_ok) v.push_back({FlipDirection::kBoth, r.both_maps_to});
    return v;
  }
  return {};
}

std::vector<std::pair<char, char>> digit_seed_letters() { return {{'0', 'O'}, {'1', 'I'}}; }

std::optional<char> digit_seed_letter(char digit) {
  for (const auto& [d, l] : digit_seed_letters()) {
    if (d == digit) return l;
  }
  return std::nullopt;
}

namespace {

std::string_view flip_suffix(FlipDirection d) {
  switch (d) {
    case FlipDirection::kVertical:
      return "flipV";
    case FlipDirection::kHorizontal:
      return "flipH";
    case FlipDirection::kBoth:
      return "flipVH";
  }
  return "";
}

}  // namespace

std::string to_string(const Transform& t) {
  if (t.is_original()) return "orig";
  if (!t.flip) return "neg";
  std::string s = t.negative ? "neg+" : "";
  return s + std::string(flip_suffix(*t.flip));
}

Transform parse_transform(std::string_view s) {
  Transform t;
  if (s == "orig") return t;
  if (s == "neg") return Transform{true, std::nullopt};
  if (s.starts_with("neg+")) {
    t.negative = true;
    s.remove_prefix(4);
  }
  for (auto d : {FlipDirection::kVertical, FlipDirection::kHorizontal, FlipDirection::kBoth}) {
    if (s == flip_suffix(d)) {
      t.flip = d;
      return t;
    }
  }
  throw std::invalid_argument("unknown transform '" + std::string(s) + "'");
}

std::vector<Sample> expand_training_set(std::span<const Sample> samples, const AugmentOptions& options) {
  std::vector<Sample> out(samples.begin(), samples.end());
  for (const auto& s : samples) {
    if (!s.transform.is_original()) continue;

    std::vector<Sample> bases;
    if (options.seed_letters_from_digits) {
      if (const auto letter = digit_seed_letter(s.label)) {
        bases.push_back({s.source_id, {}, *letter});
        out.push_back(bases.back());
      }
    }
    const bool digit = s.label >= '0' && s.label <= '9';
    if (digit ? options.flip_digits : options.flip_letters) {
      for (const auto& v : flip_variants(s.label)) {
        out.push_back({s.source_id, Transform{false, v.direction}, v.label});
        if (options.negatives && options.negate_flips) {
          bases.push_back({s.source_id, Transform{true, v.direction}, v.label});
        }
      }
    }
    if (options.negatives) out.push_back({s.source_id, Transform{true, std::nullopt}, s.label});
    for (const auto& b : bases) {
      if (b.transform.is_original()) {
        if (options.negatives) out.push_back({b.source_id, Transform{true, std::nullopt}, b.label});
      } else {
        out.push_back(b);
      }
    }
  }
  return out;
}

std::vector<Sample> parse_manifest(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<Sample> out;
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) {
    ++n;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    if (tok.size() != 2 && tok.size() != 3) throw ParseError(n, "expected '<source-id> [<transform>] <label>'");
    const std::string& label = tok.back();
    if (label.size() != 1) throw ParseError(n, "label must be a single character, got '" + label + "'");
    Sample s{tok[0], {}, label[0]};
    if (tok.size() == 3) {
      try {
        s.transform = parse_transform(tok[1]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(n, e.what());
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string write_manifest(std::span<const Sample> samples) {
  std::string out;
  for (const auto& s : samples) {
    out += s.source_id + ' ' + to_string(s.transform) + ' ' + s.label + '\n';
  }
  return out;
}

cv::Mat negative(const cv::Mat& patch) {
  if (patch.empty()) throw UnreadablePatch("cannot invert an empty patch");
  cv::Mat out;
  switch (patch.depth()) {
    case CV_8U:
    case CV_16U: {
      const double max = patch.depth() == CV_8U ? 255.0 : 65535.0;
      patch.convertTo(out, -1, -1.0, max);
      break;
    }
    case CV_32F:
    case CV_64F:
      patch.convertTo(out, -1, -1.0, 1.0);
      break;
    default:
      throw UnreadablePatch("unsupported pixel depth for inversion");
  }
  return out;
}

cv::Mat apply(const cv::Mat& patch, const Transform& t) {
  cv::Mat out = t.negative ? negative(patch) : patch.clone();
  if (t.flip) {
    const int code = *t.flip == FlipDirection::kVertical ? 0 : *t.flip == FlipDirection::kHorizontal ? 1 : -1;
    cv::flip(out, out, code);
  }
  return out;
}

cv::Mat read_patch(const std::string& path) {
  cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (m.empty()) throw UnreadablePatch("cannot read image '" + path + "'");
  return m;
}

}  // namespace alpr::augment
