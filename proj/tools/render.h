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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groundkit/geometry.h"
#include "groundkit/heatmap.h"

namespace groundkit::render {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kPredictionColor{255, 255, 0};
inline constexpr Rgb kGroundTruthColor{255, 0, 0};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Black -> red -> yellow -> white, brightness increasing with level (0..255).
Rgb HotRamp(int level);

// Binary 8-bit PGM (P5, maxval 255).
GrayImage DecodePgm(std::string_view bytes);
// Binary PPM (P6, maxval 255).
std::string EncodePpm(const RgbImage& image);

struct OverlayInputs {
  const Heatmap* heatmap = nullptr;
  int image_width = 0;
  int image_height = 0;
  const GrayImage* base = nullptr;  // optional
  std::optional<BoundingBox> prediction;
  std::optional<BoundingBox> ground_truth;
};

// Colorizes the min-max normalized heatmap (nearest cell per pixel) and, when
// a base image is given, averages it with the base. A constant heatmap leaves
// the base (or black) untouched. Box outlines are drawn one pixel wide,
// ground truth last.
RgbImage RenderOverlay(const OverlayInputs& in);

}  // namespace groundkit::render
