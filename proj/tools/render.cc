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

#include "render.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "groundkit/error.h"

namespace groundkit::render {
namespace {

std::uint8_t Clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void DrawOutline(RgbImage& img, const BoundingBox& box, Rgb color) {
  const PixelRect r = ClampRasterize(box, img.width, img.height);
  auto put = [&](int x, int y) { img.pixels[static_cast<std::size_t>(y) * img.width + x] = color; };
  for (int x = r.x; x < r.right(); ++x) {
    put(x, r.y);
    put(x, r.bottom() - 1);
  }
  for (int y = r.y; y < r.bottom(); ++y) {
    put(r.x, y);
    put(r.right() - 1, y);
  }
}

// Reads the next whitespace-delimited header field, skipping '#' comments.
std::string_view NextField(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return bytes.substr(start, pos - start);
}

int HeaderInt(std::string_view field) {
  if (field.empty() || field.size() > 9 ||
      !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::kBadNumber, "bad PGM header field '" + std::string(field) + "'");
  }
  return std::stoi(std::string(field));
}

}  // namespace

Rgb HotRamp(int level) {
  const int l = std::clamp(level, 0, 255);
  return {Clamp8(3 * l), Clamp8(3 * l - 255), Clamp8(3 * l - 510)};
}

GrayImage DecodePgm(std::string_view bytes) {
  std::size_t pos = 0;
  if (NextField(bytes, pos) != "P5") throw Error(ErrorCode::kBadMagic, "not a binary PGM (P5)");
  GrayImage img;
  img.width = HeaderInt(NextField(bytes, pos));
  img.height = HeaderInt(NextField(bytes, pos));
  const int maxval = HeaderInt(NextField(bytes, pos));
  if (img.width < 1 || img.height < 1) throw Error(ErrorCode::kInvalidArgument, "empty PGM");
  if (maxval != 255) throw Error(ErrorCode::kInvalidArgument, "only 8-bit PGM is supported");
  ++pos;  // single whitespace byte before the raster
  const std::size_t need = static_cast<std::size_t>(img.width) * img.height;
  if (pos > bytes.size() || bytes.size() - pos < need) {
    throw Error(ErrorCode::kTruncated, "PGM raster shorter than " + std::to_string(need) + " bytes");
  }
  img.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + need);
  return img;
}

std::string EncodePpm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const Rgb& p : image.pixels) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

RgbImage RenderOverlay(const OverlayInputs& in) {
  if (in.heatmap == nullptr) throw Error(ErrorCode::kInvalidArgument, "no heatmap to render");
  if (in.image_width < 1 || in.image_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "render target must be at least 1x1");
  }
  if (in.base && (in.base->width != in.image_width || in.base->height != in.image_height)) {
    throw Error(ErrorCode::kInvalidArgument, "base image size does not match the heatmap image");
  }
  const Heatmap& h = *in.heatmap;
  const auto values = h.values();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;

  RgbImage img{in.image_width, in.image_height,
               std::vector<Rgb>(static_cast<std::size_t>(in.image_width) * in.image_height)};
  for (int y = 0; y < img.height; ++y) {
    const int cy = static_cast<int>(static_cast<long long>(y) * h.height() / img.height);
    for (int x = 0; x < img.width; ++x) {
      const int cx = static_cast<int>(static_cast<long long>(x) * h.width() / img.width);
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      const int gray = in.base ? in.base->pixels[i] : 0;
      if (range <= 0) {
        img.pixels[i] = {Clamp8(gray), Clamp8(gray), Clamp8(gray)};
        continue;
      }
      const int level = static_cast<int>(std::lround((h.at(cx, cy) - lo) / range * 255.0));
      const Rgb c = HotRamp(level);
      if (in.base) {
        img.pixels[i] = {Clamp8((c.r + gray) / 2), Clamp8((c.g + gray) / 2), Clamp8((c.b + gray) / 2)};
      } else {
        img.pixels[i] = c;
      }
    }
  }
  if (in.prediction) DrawOutline(img, *in.prediction, kPredictionColor);
  if (in.ground_truth) DrawOutline(img, *in.ground_truth, kGroundTruthColor);
  return img;
}

}  // namespace groundkit::render
