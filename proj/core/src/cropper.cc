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

#include "groundkit/cropper.h"

#include <algorithm>
#include <cmath>

#include "groundkit/error.h"

namespace groundkit {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

BoundingBox ClampInto(const BoundingBox& b, const BoundingBox& frame) {
  auto cx = [&](double v) { return std::clamp(v, frame.x1, frame.x2); };
  auto cy = [&](double v) { return std::clamp(v, frame.y1, frame.y2); };
  return {cx(b.x1), cy(b.y1), cx(b.x2), cy(b.y2)};
}

}  // namespace

BoundingBox DetectTarget(const HeatmapStack& stack, const WeightVector* weights,
                         const ProposalSet& proposals, const FusionOptions& options) {
  const Heatmap fused = weights ? CombineWeighted(stack, weights->weights, options)
                                : CombineUniform(stack, options);
  return RankProposals(fused, proposals.boxes).front().box;
}

double SampleGamma(double gamma_min, std::uint64_t seed, std::string_view sample_id) {
  if (!(gamma_min >= 0.0 && gamma_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma_min must lie in [0, 1]");
  }
  const std::uint64_t bits = SplitMix64(SplitMix64(seed) ^ Fnv1a(sample_id));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
  return std::lerp(gamma_min, 1.0, u);
}

CropPlan PlanCropWithGamma(const SampleRecord& sample, const BoundingBox& detected, double gamma,
                           double gamma_min, std::uint64_t seed) {
  if (sample.image_width < 1 || sample.image_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sample '" + sample.sample_id + "' has no image extent");
  }
  if (!(gamma >= gamma_min && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [gamma_min, 1]");
  }
  RequireValid(detected);
  CropPlan plan;
  plan.sample_id = sample.sample_id;
  plan.image_width = sample.image_width;
  plan.image_height = sample.image_height;
  plan.gamma = gamma;
  plan.gamma_min = gamma_min;
  plan.seed = seed;
  const BoundingBox whole = sample.image_box();
  plan.detected = ClampInto(detected, whole);
  plan.region = InterpolateBox(whole, plan.detected, gamma);
  plan.rect = ClampRasterize(plan.region, sample.image_width, sample.image_height);
  plan.transform = CropTransform(plan.rect, sample.image_width, sample.image_height);
  return plan;
}

CropPlan PlanCrop(const SampleRecord& sample, const BoundingBox& detected, double gamma_min,
                  std::uint64_t seed) {
  return PlanCropWithGamma(sample, detected, SampleGamma(gamma_min, seed, sample.sample_id),
                           gamma_min, seed);
}

std::vector<RemappedBox> RemapAnnotations(const CropPlan& plan,
                                          std::span<const BoundingBox> boxes) {
  const BoundingBox window = plan.rect.as_box();
  std::vector<RemappedBox> out;
  out.reserve(boxes.size());
  for (const BoundingBox& b : boxes) {
    RequireValid(b);
    const BoundingBox kept = ClampInto(b, window);
    double visibility;
    if (b.area() > 0) {
      visibility = kept.area() / b.area();
    } else {
      visibility = window.contains(b) ? 1.0 : 0.0;
    }
    out.push_back({ApplyTransform(plan.transform, kept), visibility});
  }
  return out;
}

}  // namespace groundkit
