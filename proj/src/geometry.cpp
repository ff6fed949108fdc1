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

#include "alpr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace alpr {

BBox from_corners(double x1, double y1, double x2, double y2) {
  return BBox{x1, y1, x2 - x1, y2 - y1};
}

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BBox union_box(const BBox& a, const BBox& b) {
  return from_corners(std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.right(), b.right()),
                      std::max(a.bottom(), b.bottom()));
}

bool contains(const BBox& outer, const BBox& inner, double tolerance) {
  return inner.x >= outer.x - tolerance && inner.y >= outer.y - tolerance &&
         inner.right() <= outer.right() + tolerance && inner.bottom() <= outer.bottom() + tolerance;
}

bool inside_frame(const BBox& b, const FrameDims& frame, double tolerance) {
  return contains(BBox{0.0, 0.0, double(frame.width), double(frame.height)}, b, tolerance);
}

BBox clip_to_region(const BBox& b, const BBox& region) {
  const double x1 = std::max(b.x, region.x);
  const double y1 = std::max(b.y, region.y);
  const double x2 = std::min(b.right(), region.right());
  const double y2 = std::min(b.bottom(), region.bottom());
  if (x2 <= x1 || y2 <= y1) {
    throw std::invalid_argument("box " + to_string(b) + " does not intersect " + to_string(region));
  }
  return from_corners(x1, y1, x2, y2);
}

BBox clip_to_frame(const BBox& b, const FrameDims& frame) {
  return clip_to_region(b, BBox{0.0, 0.0, double(frame.width), double(frame.height)});
}

BBox expand_margin(const BBox& b, double margin, const FrameDims& frame) {
  if (margin < 0.0) throw std::invalid_argument("margin must be non-negative");
  const double dx = margin * b.w;
  const double dy = margin * b.h;
  return clip_to_frame(BBox{b.x - dx, b.y - dy, b.w + 2.0 * dx, b.h + 2.0 * dy}, frame);
}

BBox enlarge_to_aspect(const BBox& b, double target_w_over_h, const FrameDims& frame) {
  if (!(target_w_over_h > 0.0)) throw std::invalid_argument("target aspect must be positive");
  if (b.w >= target_w_over_h * b.h) return b;
  const double new_w = target_w_over_h * b.h;
  return clip_to_frame(BBox{b.center_x() - new_w / 2.0, b.y, new_w, b.h}, frame);
}

BBox pad_pixels(const BBox& b, double pad, const FrameDims& frame) {
  if (pad < 0.0) throw std::invalid_argument("padding must be non-negative");
  return clip_to_frame(BBox{b.x - pad, b.y - pad, b.w + 2.0 * pad, b.h + 2.0 * pad}, frame);
}

PixelRect rasterize(const BBox& b) {
  return PixelRect{std::lround(b.x), std::lround(b.y), std::lround(b.right()), std::lround(b.bottom())};
}

BBox to_absolute(const BBox& relative, const BBox& origin) {
  return BBox{relative.x + origin.x, relative.y + origin.y, relative.w, relative.h};
}

BBox to_relative(const BBox& absolute, const BBox& origin) {
  return BBox{absolute.x - origin.x, absolute.y - origin.y, absolute.w, absolute.h};
}

std::string to_string(const BBox& b) {
  std::ostringstream os;
  os << "(" << b.x << "," << b.y << "," << b.w << "," << b.h << ")";
  return os.str();
}

}  // namespace alpr
