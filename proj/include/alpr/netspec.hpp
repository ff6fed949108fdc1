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

#include <cstddef>
#include <stdexcept>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alpr::netspec {

/// Width x height x channels of a feature map.
struct TensorShape {
  int width = 0;
  int height = 0;
  int channels = 0;

  bool operator==(const TensorShape&) const = default;
};

std::string to_string(const TensorShape& s);

enum class LayerKind { kConv, kMaxPool, kDetection };

struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int filters = 0;  // conv only
  int kernel = 0;   // conv and maxpool
  int stride = 0;   // conv and maxpool

  static LayerSpec conv(int filters, int kernel, int stride = 1) {
    return {LayerKind::kConv, filters, kernel, stride};
  }
  static LayerSpec maxpool(int kernel, int stride) { return {LayerKind::kMaxPool, 0, kernel, stride}; }
  static LayerSpec detection() { return {LayerKind::kDetection, 0, 0, 0}; }

  bool operator==(const LayerSpec&) const = default;
};

/// Layer list of a YOLO-style network. Layers are indexed from 0; tables
/// that number layers from 1 map to index - 1.
struct ArchSpec {
  std::string name;
  TensorShape input;
  std::vector<LayerSpec> layers;
  int classes = 0;
  int anchors = 0;
  // Shape the last conv layer is expected to produce, when known.
  std::optional<TensorShape> expected_output;

  bool operator==(const ArchSpec&) const = default;
};

struct LayerShape {
  std::size_t index = 0;
  TensorShape input;
  TensorShape output;
};

/// Filters of the detection head: (classes + 5) * anchors.
/// Throws std::invalid_argument when either count is below 1.
int required_filters(int classes, int anchors);

/// Propagates shapes through the layer list. Convs are same-padded; a pool of
/// stride s >= 2 maps d -> floor(d / s) and a stride-1 pool keeps d.
/// Throws ShapeError naming the layer when a dimension collapses to 0.
std::vector<LayerShape> infer_shapes(const ArchSpec& arch);

class ShapeError : public std::runtime_error {
 public:
  ShapeError(std::size_t layer, const std::string& what) : std::runtime_error(what), layer_(layer) {}
  std::size_t layer() const { return layer_; }

 private:
  std::size_t layer_;
};

struct Violation {
  std::optional<std::size_t> layer;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const ArchSpec& arch);

/// Fast-YOLO (one and two classes) and the CR-NET variants used for
/// character segmentation and letter/digit recognition.
std::vector<ArchSpec> builtin_archs();
std::optional<ArchSpec> find_builtin(std::string_view name);

/// Drops the first `count` layers and rewires the input to `input`.
ArchSpec drop_leading_layers(const ArchSpec& arch, std::size_t count, TensorShape input);

/// Replaces the filter count of the last conv layer to fit `classes`.
ArchSpec reheaded(const ArchSpec& arch, int classes);

/// Line-oriented descriptor:
///   name <id> input <W>x<H>x<C> classes <C> anchors <A> [output <W>x<H>x<C>]
///   conv <filters> <k>x<k>/<s> | max <k>x<k>/<s> | detection
ArchSpec parse_descriptor(std::string_view text);
std::string write_descriptor(const ArchSpec& arch);

/// Human-readable table with one row per layer, in the Filters/Size/Input/Output layout.
std::string shape_table(const ArchSpec& arch);

}  // namespace alpr::netspec
