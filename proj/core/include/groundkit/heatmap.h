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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "groundkit/geometry.h"

namespace groundkit {

// Row-major grid of non-negative relevance values. cell_width/cell_height
// are the number of image pixels covered by one grid cell.
class Heatmap {
 public:
  Heatmap() = default;
  Heatmap(int width, int height, std::vector<double> values,
          double cell_width = 1.0, double cell_height = 1.0);
  static Heatmap Filled(int width, int height, double value,
                        double cell_width = 1.0, double cell_height = 1.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_width() const { return cell_width_; }
  double cell_height() const { return cell_height_; }
  std::size_t size() const { return values_.size(); }

  double at(int x, int y) const { return values_[index(x, y)]; }
  double& at(int x, int y) { return values_[index(x, y)]; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const Heatmap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Converts a box in image pixels to the covering cell rectangle.
  PixelRect ToGrid(const BoundingBox& image_box) const;

  // Returns a copy with every value multiplied by c (c > 0).
  Heatmap Scaled(double c) const;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  double cell_width_ = 1.0;
  double cell_height_ = 1.0;
  std::vector<double> values_;
};

// Per-token Grad-CAM maps for one query together with the token strings and
// the image geometry they were exported for.
struct HeatmapStack {
  std::vector<Heatmap> maps;
  std::vector<std::string> tokens;
  std::vector<bool> special;
  int image_width = 0;
  int image_height = 0;
  std::string continuation_marker = "##";
  std::string query;

  std::size_t token_count() const { return maps.size(); }
  // Throws Error(kInvalidArgument) when the members disagree.
  void Validate() const;
};

struct FusionOptions {
  // Delimiter tokens are skipped unless this is set.
  bool include_special_tokens = false;
};

// Indices of the tokens that take part in fusion, in stack order.
std::vector<std::size_t> IncludedTokens(const HeatmapStack& stack,
                                        const FusionOptions& options = {});

// Cellwise mean over the included tokens.
Heatmap CombineUniform(const HeatmapStack& stack, const FusionOptions& options = {});

// Cellwise (1/N) * sum_i w_i * G_i over the included tokens. The weights are
// not renormalized, so all-ones weights reproduce CombineUniform.
Heatmap CombineWeighted(const HeatmapStack& stack, std::span<const double> weights,
                        const FusionOptions& options = {});

// (width+1) x (height+1) inclusive prefix sums with a zero guard row/column.
class SummedAreaTable {
 public:
  explicit SummedAreaTable(const Heatmap& h);

  int width() const { return width_; }
  int height() const { return height_; }
  // Sum of all cells (x', y') with x' < x and y' < y.
  double at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  }

  double RectSum(const PixelRect& rect) const;
  // Mean over the cells of `rect`; throws Error(kOutOfBounds) when the rect
  // leaves the grid.
  double BoxMean(const PixelRect& rect) const;

 private:
  int width_;
  int height_;
  std::vector<double> sums_;
};

struct RankedProposal {
  std::size_t index = 0;
  BoundingBox box;
  double score = 0;
  std::size_t rank = 0;
};

// Scores every proposal by its mean heatmap value and sorts descending,
// ties broken by ascending input index. Element 0 is the prediction.
std::vector<RankedProposal> RankProposals(const Heatmap& h,
                                          std::span<const BoundingBox> proposals);

}  // namespace groundkit
