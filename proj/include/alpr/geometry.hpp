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

#include <string>

namespace alpr {

/// Frame (or image) size in pixels.
struct FrameDims {
  int width = 0;
  int height = 0;

  bool is_valid() const { return width > 0 && height > 0; }
  bool operator==(const FrameDims&) const = default;
};

/// Axis-aligned rectangle in pixel coordinates. Coordinates are real-valued;
/// integer pixels only appear through rasterize().
struct BBox {
  double x = 0.0;  // left edge
  double y = 0.0;  // top edge
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  double aspect() const { return w / h; }
  bool is_valid() const { return w > 0.0 && h > 0.0; }

  bool operator==(const BBox&) const = default;
  auto operator<=>(const BBox&) const = default;
};

/// Integer pixel rectangle, half-open: [left, right) x [top, bottom).
struct PixelRect {
  long left = 0;
  long top = 0;
  long right = 0;
  long bottom = 0;

  long width() const { return right - left; }
  long height() const { return bottom - top; }
  bool operator==(const PixelRect&) const = default;
};

BBox from_corners(double x1, double y1, double x2, double y2);

double intersection_area(const BBox& a, const BBox& b);

/// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

/// Smallest rectangle containing both boxes.
BBox union_box(const BBox& a, const BBox& b);

/// True when `inner` lies entirely within `outer` (with `tolerance` pixels of slack).
bool contains(const BBox& outer, const BBox& inner, double tolerance = 1e-9);

bool inside_frame(const BBox& b, const FrameDims& frame, double tolerance = 1e-9);

/// Clips to [0,width] x [0,height]. Throws std::invalid_argument if nothing
/// of the box is left inside the frame.
BBox clip_to_frame(const BBox& b, const FrameDims& frame);

/// Clips `b` to the rectangle `region`. Throws std::invalid_argument on an
/// empty result.
BBox clip_to_region(const BBox& b, const BBox& region);

/// Grows each side by `margin` times the matching dimension (left/right by
/// margin*w, top/bottom by margin*h), then clips to the frame.
BBox expand_margin(const BBox& b, double margin, const FrameDims& frame);

/// Widens the box about its center until w/h reaches `target_w_over_h`, then
/// clips. Boxes already at least that wide are returned unchanged.
BBox enlarge_to_aspect(const BBox& b, double target_w_over_h, const FrameDims& frame);

/// Moves every edge outward by `pad` pixels and clips.
BBox pad_pixels(const BBox& b, double pad, const FrameDims& frame);

/// Rounds each edge half away from zero.
PixelRect rasterize(const BBox& b);

/// Moves a box expressed relative to `origin`'s top-left into absolute coordinates.
BBox to_absolute(const BBox& relative, const BBox& origin);
BBox to_relative(const BBox& absolute, const BBox& origin);

std::string to_string(const BBox& b);

}  // namespace alpr
