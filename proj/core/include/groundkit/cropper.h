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
#include <span>
#include <string_view>
#include <vector>

#include "groundkit/depparse.h"
#include "groundkit/heatmap.h"
#include "groundkit/records.h"

namespace groundkit {

// Top-1 proposal under the fused heatmap. With no weights the stack is
// fused uniformly; otherwise with the given root-relative weights.
BoundingBox DetectTarget(const HeatmapStack& stack, const WeightVector* weights,
                         const ProposalSet& proposals, const FusionOptions& options = {});

// Uniform draw on [gamma_min, 1] from a counter-based generator keyed by
// (seed, sample_id). Same inputs, same result, independent of call order.
double SampleGamma(double gamma_min, std::uint64_t seed, std::string_view sample_id);

// Plans the crop for one sample: clamp `detected` into the image, draw
// gamma, interpolate toward the whole image, rasterize outward, and build
// the transform that resizes the crop back to the image size.
CropPlan PlanCrop(const SampleRecord& sample, const BoundingBox& detected, double gamma_min,
                  std::uint64_t seed);

// As PlanCrop with gamma given rather than drawn.
CropPlan PlanCropWithGamma(const SampleRecord& sample, const BoundingBox& detected, double gamma,
                           double gamma_min, std::uint64_t seed);

struct RemappedBox {
  BoundingBox box;    // in the crop frame
  double visibility;  // retained area / original area
};

// Clips each box to the crop window and maps it into the crop frame.
std::vector<RemappedBox> RemapAnnotations(const CropPlan& plan,
                                          std::span<const BoundingBox> boxes);

}  // namespace groundkit
