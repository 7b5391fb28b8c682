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

#include "groundkit/heatmap.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "groundkit/error.h"

namespace groundkit {

Heatmap::Heatmap(int width, int height, std::vector<double> values, double cell_width,
                 double cell_height)
    : width_(width),
      height_(height),
      cell_width_(cell_width),
      cell_height_(cell_height),
      values_(std::move(values)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap must have at least one cell");
  }
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap value count does not match width*height");
  }
  if (!(cell_width > 0 && std::isfinite(cell_width) && cell_height > 0 &&
        std::isfinite(cell_height))) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap cell scale must be positive and finite");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "heatmap value is not finite");
    if (v < 0) throw Error(ErrorCode::kNegativeValue, "heatmap value is negative");
  }
}

Heatmap Heatmap::Filled(int width, int height, double value, double cell_width,
                        double cell_height) {
  return Heatmap(width, height,
                 std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                         std::max(height, 0),
                                     value),
                 cell_width, cell_height);
}

PixelRect Heatmap::ToGrid(const BoundingBox& image_box) const {
  RequireValid(image_box);
  const BoundingBox cells{image_box.x1 / cell_width_, image_box.y1 / cell_height_,
                          image_box.x2 / cell_width_, image_box.y2 / cell_height_};
  return ClampRasterize(cells, width_, height_);
}

Heatmap Heatmap::Scaled(double c) const {
  if (!(c > 0)) throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive");
  std::vector<double> scaled(values_);
  for (double& v : scaled) v *= c;
  return Heatmap(width_, height_, std::move(scaled), cell_width_, cell_height_);
}

void HeatmapStack::Validate() const {
  if (maps.empty()) throw Error(ErrorCode::kInvalidArgument, "heatmap stack is empty");
  if (tokens.size() != maps.size() || special.size() != maps.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "heatmap stack token metadata does not match map count");
  }
  for (const Heatmap& m : maps) {
    if (!m.same_shape(maps.front())) {
      throw Error(ErrorCode::kInvalidArgument, "heatmap stack members differ in shape");
    }
  }
  if (image_width < 1 || image_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap stack image extent must be positive");
  }
}

std::vector<std::size_t> IncludedTokens(const HeatmapStack& stack,
                                        const FusionOptions& options) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < stack.token_count(); ++i) {
    if (options.include_special_tokens || !stack.special[i]) out.push_back(i);
  }
  return out;
}

namespace {

Heatmap Fuse(const HeatmapStack& stack, const std::vector<std::size_t>& included,
             std::span<const double> weights) {
  const Heatmap& first = stack.maps[included.front()];
  std::vector<double> acc(first.size(), 0.0);
  for (std::size_t k = 0; k < included.size(); ++k) {
    const auto values = stack.maps[included[k]].values();
    const double w = weights.empty() ? 1.0 : weights[k];
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w * values[c];
  }
  const double n = static_cast<double>(included.size());
  for (double& v : acc) v /= n;
  return Heatmap(first.width(), first.height(), std::move(acc), first.cell_width(),
                 first.cell_height());
}

std::vector<std::size_t> RequireIncluded(const HeatmapStack& stack,
                                         const FusionOptions& options) {
  stack.Validate();
  auto included = IncludedTokens(stack, options);
  if (included.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap stack has no non-special tokens");
  }
  return included;
}

}  // namespace

Heatmap CombineUniform(const HeatmapStack& stack, const FusionOptions& options) {
  return Fuse(stack, RequireIncluded(stack, options), {});
}

Heatmap CombineWeighted(const HeatmapStack& stack, std::span<const double> weights,
                        const FusionOptions& options) {
  const auto included = RequireIncluded(stack, options);
  if (weights.size() != included.size()) {
    std::ostringstream msg;
    msg << "weight count " << weights.size() << " does not match included token count "
        << included.size();
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "token weights must lie in [0, 1]");
    }
  }
  return Fuse(stack, included, weights);
}

SummedAreaTable::SummedAreaTable(const Heatmap& h)
    : width_(h.width()),
      height_(h.height()),
      sums_(static_cast<std::size_t>(h.width() + 1) * (h.height() + 1), 0.0) {
  const std::size_t stride = width_ + 1;
  for (int y = 0; y < height_; ++y) {
    double row = 0.0;
    for (int x = 0; x < width_; ++x) {
      row += h.at(x, y);
      sums_[(y + 1) * stride + (x + 1)] = sums_[y * stride + (x + 1)] + row;
    }
  }
}

double SummedAreaTable::RectSum(const PixelRect& rect) const {
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 || rect.right() > width_ ||
      rect.bottom() > height_) {
    std::ostringstream msg;
    msg << rect << " outside " << width_ << "x" << height_ << " grid";
    throw Error(ErrorCode::kOutOfBounds, msg.str());
  }
  return at(rect.right(), rect.bottom()) - at(rect.x, rect.bottom()) -
         at(rect.right(), rect.y) + at(rect.x, rect.y);
}

double SummedAreaTable::BoxMean(const PixelRect& rect) const {
  return RectSum(rect) / static_cast<double>(rect.area());
}

std::vector<RankedProposal> RankProposals(const Heatmap& h,
                                          std::span<const BoundingBox> proposals) {
  if (proposals.empty()) throw Error(ErrorCode::kInvalidArgument, "no proposals to rank");
  const SummedAreaTable sat(h);
  std::vector<RankedProposal> ranked(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    ranked[i].index = i;
    ranked[i].box = proposals[i];
    ranked[i].score = sat.BoxMean(h.ToGrid(proposals[i]));
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedProposal& a, const RankedProposal& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  for (std::size_t r = 0; r < ranked.size(); ++r) ranked[r].rank = r;
  return ranked;
}

}  // namespace groundkit
