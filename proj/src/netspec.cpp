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

#include "alpr/netspec.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>

#include "alpr/error.hpp"

namespace alpr::netspec {

std::string to_string(const TensorShape& s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height) + "x" + std::to_string(s.channels);
}

int required_filters(int classes, int anchors) {
  if (classes < 1) throw std::invalid_argument("class count must be at least 1");
  if (anchors < 1) throw std::invalid_argument("anchor count must be at least 1");
  return (classes + 5) * anchors;
}

namespace {

TensorShape propagate(const LayerSpec& layer, const TensorShape& in) {
  switch (layer.kind) {
    case LayerKind::kConv:
      return {in.width, in.height, layer.filters};
    case LayerKind::kMaxPool:
      if (layer.stride <= 1) return in;
      return {in.width / layer.stride, in.height / layer.stride, in.channels};
    case LayerKind::kDetection:
      return in;
  }
  return in;
}

bool degenerate(const TensorShape& s) { return s.width < 1 || s.height < 1 || s.channels < 1; }

}  // namespace

std::vector<LayerShape> infer_shapes(const ArchSpec& arch) {
  std::vector<LayerShape> rows;
  rows.reserve(arch.layers.size());
  TensorShape current = arch.input;
  if (degenerate(current)) throw ShapeError(0, "input shape " + to_string(current) + " is degenerate");
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const TensorShape out = propagate(arch.layers[i], current);
    if (degenerate(out)) {
      throw ShapeError(i, "layer " + std::to_string(i) + " maps " + to_string(current) + " to " + to_string(out));
    }
    rows.push_back({i, current, out});
    current = out;
  }
  return rows;
}

ValidationReport validate(const ArchSpec& arch) {
  ValidationReport report;
  auto add = [&](std::optional<std::size_t> layer, std::string msg) {
    report.violations.push_back({layer, std::move(msg)});
  };

  if (arch.classes < 1) add(std::nullopt, "classes " + std::to_string(arch.classes) + " < 1");
  if (arch.anchors < 1) add(std::nullopt, "anchors " + std::to_string(arch.anchors) + " < 1");

  bool well_formed = true;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& l = arch.layers[i];
    if (l.kind == LayerKind::kDetection) {
      if (i + 1 != arch.layers.size()) {
        add(i, "detection layer must be last");
        well_formed = false;
      }
      continue;
    }
    if (l.kernel < 1) add(i, "kernel " + std::to_string(l.kernel) + " < 1");
    if (l.stride < 1) add(i, "stride " + std::to_string(l.stride) + " < 1");
    if (l.kind == LayerKind::kConv) {
      if (l.filters < 1) add(i, "filters " + std::to_string(l.filters) + " < 1");
      if (l.stride != 1) add(i, "conv stride " + std::to_string(l.stride) + " unsupported (only stride 1)");
    }
    if (l.kernel < 1 || l.stride < 1) well_formed = false;
  }

  const auto detections =
      std::count_if(arch.layers.begin(), arch.layers.end(), [](const LayerSpec& l) { return l.kind == LayerKind::kDetection; });
  if (detections != 1) {
    add(std::nullopt, "expected exactly one detection layer, found " + std::to_string(detections));
  }

  // Head: last layer before the detection layer.
  if (!arch.layers.empty() && arch.layers.back().kind == LayerKind::kDetection) {
    if (arch.layers.size() < 2 || arch.layers[arch.layers.size() - 2].kind != LayerKind::kConv) {
      add(arch.layers.size() - 1, "detection layer is not preceded by a conv layer");
    } else if (arch.classes >= 1 && arch.anchors >= 1) {
      const std::size_t head = arch.layers.size() - 2;
      const int want = required_filters(arch.classes, arch.anchors);
      const int got = arch.layers[head].filters;
      if (got != want) {
        add(head, "head filters " + std::to_string(got) + " ≠ " + std::to_string(want));
      }
    }
  }

  if (well_formed) {
    try {
      const auto rows = infer_shapes(arch);
      if (arch.expected_output && !rows.empty()) {
        const TensorShape got = rows.back().output;
        if (got != *arch.expected_output) {
          add(rows.back().index,
              "output shape " + to_string(got) + " ≠ " + to_string(*arch.expected_output));
        }
      }
    } catch (const ShapeError& e) {
      add(e.layer(), e.what());
    }
  }
  return report;
}

namespace {

std::vector<LayerSpec> fast_yolo_layers(int head_filters) {
  return {
      LayerSpec::conv(16, 3),   LayerSpec::maxpool(2, 2), LayerSpec::conv(32, 3),   LayerSpec::maxpool(2, 2),
      LayerSpec::conv(64, 3),   LayerSpec::maxpool(2, 2), LayerSpec::conv(128, 3),  LayerSpec::maxpool(2, 2),
      LayerSpec::conv(256, 3),  LayerSpec::maxpool(2, 2), LayerSpec::conv(512, 3),  LayerSpec::maxpool(2, 1),
      LayerSpec::conv(1024, 3), LayerSpec::conv(1024, 3), LayerSpec::conv(head_filters, 1), LayerSpec::detection(),
  };
}

std::vector<LayerSpec> cr_net_layers(int head_filters) {
  return {
      LayerSpec::conv(32, 3),  LayerSpec::maxpool(2, 2), LayerSpec::conv(64, 3),  LayerSpec::maxpool(2, 2),
      LayerSpec::conv(128, 3), LayerSpec::conv(64, 1),   LayerSpec::conv(128, 3), LayerSpec::maxpool(2, 2),
      LayerSpec::conv(256, 3), LayerSpec::conv(128, 1),  LayerSpec::conv(256, 3), LayerSpec::conv(512, 3),
      LayerSpec::conv(256, 1), LayerSpec::conv(512, 3),  LayerSpec::conv(head_filters, 1), LayerSpec::detection(),
  };
}

constexpr int kAnchors = 5;

ArchSpec make(std::string name, TensorShape input, std::vector<LayerSpec> layers, int classes, TensorShape out) {
  return ArchSpec{std::move(name), input, std::move(layers), classes, kAnchors, out};
}

}  // namespace

ArchSpec drop_leading_layers(const ArchSpec& arch, std::size_t count, TensorShape input) {
  ArchSpec out = arch;
  count = std::min(count, out.layers.size());
  out.layers.erase(out.layers.begin(), out.layers.begin() + static_cast<std::ptrdiff_t>(count));
  out.input = input;
  out.expected_output.reset();
  return out;
}

ArchSpec reheaded(const ArchSpec& arch, int classes) {
  ArchSpec out = arch;
  out.classes = classes;
  for (auto it = out.layers.rbegin(); it != out.layers.rend(); ++it) {
    if (it->kind == LayerKind::kConv) {
      it->filters = required_filters(classes, out.anchors);
      break;
    }
  }
  if (out.expected_output) out.expected_output->channels = required_filters(classes, out.anchors);
  return out;
}

std::vector<ArchSpec> builtin_archs() {
  const int one = required_filters(1, kAnchors);
  const int two = required_filters(2, kAnchors);
  const int digits = required_filters(10, kAnchors);
  const int letters = required_filters(26, kAnchors);

  std::vector<ArchSpec> archs;
  archs.push_back(make("fast-yolo-1class", {416, 416, 3}, fast_yolo_layers(one), 1, {13, 13, one}));
  archs.push_back(make("fast-yolo-2class", {416, 416, 3}, fast_yolo_layers(two), 2, {13, 13, two}));
  archs.push_back(make("cr-net-seg", {240, 80, 3}, cr_net_layers(one), 1, {30, 10, one}));
  archs.push_back(make("cr-net-letters", {270, 80, 3}, cr_net_layers(letters), 26, {33, 10, letters}));

  // Digits: segmentation net without its first two conv/pool pairs.
  ArchSpec digit_net = reheaded(drop_leading_layers(archs[2], 4, {42, 26, 3}), 10);
  digit_net.name = "cr-net-digits";
  digit_net.expected_output = TensorShape{21, 13, digits};
  archs.push_back(std::move(digit_net));
  return archs;
}

std::optional<ArchSpec> find_builtin(std::string_view name) {
  for (auto& a : builtin_archs()) {
    if (a.name == name) return a;
  }
  return std::nullopt;
}

namespace {

int parse_int(std::string_view s, std::size_t line, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "malformed " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

TensorShape parse_shape(std::string_view s, std::size_t line) {
  const auto a = s.find('x');
  const auto b = a == std::string_view::npos ? a : s.find('x', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    throw ParseError(line, "malformed shape '" + std::string(s) + "' (want WxHxC)");
  }
  return {parse_int(s.substr(0, a), line, "shape"), parse_int(s.substr(a + 1, b - a - 1), line, "shape"),
          parse_int(s.substr(b + 1), line, "shape")};
}

// "<k>x<k>/<s>"
std::pair<int, int> parse_size(std::string_view s, std::size_t line) {
  const auto x = s.find('x');
  const auto slash = s.find('/');
  if (x == std::string_view::npos || slash == std::string_view::npos || slash < x) {
    throw ParseError(line, "malformed size '" + std::string(s) + "' (want KxK/S)");
  }
  const int k1 = parse_int(s.substr(0, x), line, "kernel");
  const int k2 = parse_int(s.substr(x + 1, slash - x - 1), line, "kernel");
  if (k1 != k2) throw ParseError(line, "non-square kernel '" + std::string(s) + "'");
  return {k1, parse_int(s.substr(slash + 1), line, "stride")};
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

ArchSpec parse_descriptor(std::string_view text) {
  std::istringstream is{std::string(text)};
  ArchSpec arch;
  bool have_header = false;
  std::size_t line_no = 0;
  for (std::string line; std::getline(is, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok[0] != "name") throw ParseError(line_no, "descriptor must start with a 'name' header");
      if (tok.size() != 8 && tok.size() != 10) throw ParseError(line_no, "malformed header");
      if (tok[2] != "input" || tok[4] != "classes" || tok[6] != "anchors") {
        throw ParseError(line_no, "header keys must be: name input classes anchors [output]");
      }
      arch.name = tok[1];
      arch.input = parse_shape(tok[3], line_no);
      arch.classes = parse_int(tok[5], line_no, "class count");
      arch.anchors = parse_int(tok[7], line_no, "anchor count");
      if (tok.size() == 10) {
        if (tok[8] != "output") throw ParseError(line_no, "unknown header key '" + tok[8] + "'");
        arch.expected_output = parse_shape(tok[9], line_no);
      }
      have_header = true;
      continue;
    }
    if (tok[0] == "conv" && tok.size() == 3) {
      const auto [k, s] = parse_size(tok[2], line_no);
      arch.layers.push_back(LayerSpec::conv(parse_int(tok[1], line_no, "filter count"), k, s));
    } else if (tok[0] == "max" && tok.size() == 2) {
      const auto [k, s] = parse_size(tok[1], line_no);
      arch.layers.push_back(LayerSpec::maxpool(k, s));
    } else if (tok[0] == "detection" && tok.size() == 1) {
      arch.layers.push_back(LayerSpec::detection());
    } else {
      throw ParseError(line_no, "unrecognized layer line '" + line + "'");
    }
  }
  if (!have_header) throw ParseError(0, "empty descriptor");
  return arch;
}

std::string write_descriptor(const ArchSpec& arch) {
  std::ostringstream os;
  os << "name " << arch.name << " input " << to_string(arch.input) << " classes " << arch.classes << " anchors "
     << arch.anchors;
  if (arch.expected_output) os << " output " << to_string(*arch.expected_output);
  os << '\n';
  for (const auto& l : arch.layers) {
    switch (l.kind) {
      case LayerKind::kConv:
        os << "conv " << l.filters << ' ' << l.kernel << 'x' << l.kernel << '/' << l.stride << '\n';
        break;
      case LayerKind::kMaxPool:
        os << "max " << l.kernel << 'x' << l.kernel << '/' << l.stride << '\n';
        break;
      case LayerKind::kDetection:
        os << "detection\n";
        break;
    }
  }
  return os.str();
}

std::string shape_table(const ArchSpec& arch) {
  std::ostringstream os;
  os << arch.name << '\n';
  os << std::left << std::setw(6) << "layer" << std::setw(11) << "type" << std::setw(9) << "filters" << std::setw(9)
     << "size" << std::setw(16) << "input" << "output\n";
  std::vector<LayerShape> rows;
  try {
    rows = infer_shapes(arch);
  } catch (const ShapeError&) {
    // Print what we have; validate() reports the failure.
  }
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& l = arch.layers[i];
    os << std::setw(6) << i;
    switch (l.kind) {
      case LayerKind::kConv:
        os << std::setw(11) << "conv" << std::setw(9) << l.filters;
        break;
      case LayerKind::kMaxPool:
        os << std::setw(11) << "max" << std::setw(9) << "";
        break;
      case LayerKind::kDetection:
        os << "detection\n";
        continue;
    }
    const std::string size =
        std::to_string(l.kernel) + "x" + std::to_string(l.kernel) + "/" + std::to_string(l.stride);
    os << std::setw(9) << size;
    if (i < rows.size()) {
      os << std::setw(16) << to_string(rows[i].input) << to_string(rows[i].output);
    } else {
      os << "-";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace alpr::netspec
