/*
 Copyright 2026 The groundkit Authors
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

#include <ostream>

namespace groundkit {

// Continuous axis-aligned box in image pixels, origin top-left, closed
// extents. Valid boxes have finite coordinates with x1 <= x2 and y1 <= y2.
struct BoundingBox {
  double x1 = 0;
  double y1 = 0;
  double x2 = 0;
  double y2 = 0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const;
  // Closed containment: `other` lies inside this box.
  bool contains(const BoundingBox& other) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& b);

// Throws Error(kInvalidArgument) unless b.valid().
void RequireValid(const BoundingBox& b);

// Integer pixel window [x, x+w) x [y, y+h), w and h at least one pixel.
struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long long area() const { return static_cast<long long>(w) * h; }
  BoundingBox as_box() const { return {double(x), double(y), double(right()), double(bottom())}; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

std::ostream& operator<<(std::ostream& os, const PixelRect& r);

enum class FrameDirection { kOriginalToCrop, kCropToOriginal };

// Axis-separable affine map p' = p * scale + offset.
struct FrameTransform {
  double scale_x = 1;
  double scale_y = 1;
  double offset_x = 0;
  double offset_y = 0;
  FrameDirection direction = FrameDirection::kOriginalToCrop;

  static FrameTransform Identity() { return {}; }

  double map_x(double x) const { return x * scale_x + offset_x; }
  double map_y(double y) const { return y * scale_y + offset_y; }
  FrameTransform inverse() const;

  friend bool operator==(const FrameTransform&, const FrameTransform&) = default;
};

// Intersection over union; 0 for disjoint boxes and whenever the union has
// zero area.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Intersection of two boxes, or a zero-area box when they do not overlap.
BoundingBox Intersect(const BoundingBox& a, const BoundingBox& b);

// Componentwise r = gamma * whole + (1 - gamma) * detected. Exact at both
// endpoints and monotone in gamma. Throws for gamma outside [0, 1].
BoundingBox InterpolateBox(const BoundingBox& whole, const BoundingBox& detected,
                           double gamma);

// Outward rasterization: floor the top-left, ceil the bottom-right, clamp to
// the image, widen empty results to 1x1 at the clamped anchor.
PixelRect ClampRasterize(const BoundingBox& b, int image_w, int image_h);

// Transform taking original-image coordinates into the frame obtained by
// cropping to `rect` and resizing to out_w x out_h.
FrameTransform CropTransform(const PixelRect& rect, int out_w, int out_h);

// Maps both corners and re-normalizes so x1 <= x2, y1 <= y2.
BoundingBox ApplyTransform(const FrameTransform& t, const BoundingBox& b);

}  // namespace groundkit
