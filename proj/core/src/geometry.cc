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

#include "groundkit/geometry.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "groundkit/error.h"

namespace groundkit {

bool BoundingBox::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x1 <= x2 && y1 <= y2;
}

bool BoundingBox::contains(const BoundingBox& other) const {
  return x1 <= other.x1 && y1 <= other.y1 && other.x2 <= x2 && other.y2 <= y2;
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
  return os << "(" << b.x1 << ", " << b.y1 << ", " << b.x2 << ", " << b.y2 << ")";
}

std::ostream& operator<<(std::ostream& os, const PixelRect& r) {
  return os << "rect(" << r.x << ", " << r.y << ", " << r.w << ", " << r.h << ")";
}

void RequireValid(const BoundingBox& b) {
  if (!b.valid()) {
    std::ostringstream msg;
    msg << "invalid box " << b;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

FrameTransform FrameTransform::inverse() const {
  FrameTransform inv;
  inv.scale_x = 1.0 / scale_x;
  inv.scale_y = 1.0 / scale_y;
  inv.offset_x = -offset_x / scale_x;
  inv.offset_y = -offset_y / scale_y;
  inv.direction = direction == FrameDirection::kOriginalToCrop
                      ? FrameDirection::kCropToOriginal
                      : FrameDirection::kOriginalToCrop;
  return inv;
}

BoundingBox Intersect(const BoundingBox& a, const BoundingBox& b) {
  BoundingBox out{std::max(a.x1, b.x1), std::max(a.y1, b.y1),
                  std::min(a.x2, b.x2), std::min(a.y2, b.y2)};
  if (out.x2 < out.x1) out.x2 = out.x1;
  if (out.y2 < out.y1) out.y2 = out.y1;
  return out;
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BoundingBox InterpolateBox(const BoundingBox& whole, const BoundingBox& detected,
                           double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "interpolation weight must lie in [0, 1], got " + std::to_string(gamma));
  }
  RequireValid(whole);
  RequireValid(detected);
  // std::lerp(a, b, t) is exact at t = 0 and t = 1 and monotone in t.
  return {std::lerp(detected.x1, whole.x1, gamma), std::lerp(detected.y1, whole.y1, gamma),
          std::lerp(detected.x2, whole.x2, gamma), std::lerp(detected.y2, whole.y2, gamma)};
}

PixelRect ClampRasterize(const BoundingBox& b, int image_w, int image_h) {
  if (image_w < 1 || image_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "image extent must be at least 1x1");
  }
  RequireValid(b);
  auto clamp_to = [](double v, int hi) {
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(hi)));
  };
  const int x1 = clamp_to(std::floor(b.x1), image_w);
  const int y1 = clamp_to(std::floor(b.y1), image_h);
  const int x2 = clamp_to(std::ceil(b.x2), image_w);
  const int y2 = clamp_to(std::ceil(b.y2), image_h);

  PixelRect r;
  r.x = std::min(x1, image_w - 1);
  r.y = std::min(y1, image_h - 1);
  r.w = std::max(x2 - r.x, 1);
  r.h = std::max(y2 - r.y, 1);
  return r;
}

FrameTransform CropTransform(const PixelRect& rect, int out_w, int out_h) {
  if (rect.w < 1 || rect.h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "crop rect must have positive extent");
  }
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "output extent must be at least 1x1");
  }
  FrameTransform t;
  t.scale_x = static_cast<double>(out_w) / rect.w;
  t.scale_y = static_cast<double>(out_h) / rect.h;
  t.offset_x = -rect.x * t.scale_x;
  t.offset_y = -rect.y * t.scale_y;
  t.direction = FrameDirection::kOriginalToCrop;
  return t;
}

BoundingBox ApplyTransform(const FrameTransform& t, const BoundingBox& b) {
  const double ax = t.map_x(b.x1), bx = t.map_x(b.x2);
  const double ay = t.map_y(b.y1), by = t.map_y(b.y2);
  return {std::min(ax, bx), std::min(ay, by), std::max(ax, bx), std::max(ay, by)};
}

}  // namespace groundkit
