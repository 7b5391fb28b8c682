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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groundkit/geometry.h"

namespace groundkit {

// One image/query/ground-truth triple from a manifest. Artifact paths are
// kept as written; `base_dir` is the directory they are relative to.
struct SampleRecord {
  std::string sample_id;
  std::string image_id;
  int image_width = 0;
  int image_height = 0;
  std::string query;
  BoundingBox gt_box;
  std::string bundle_path;
  std::string parse_path;
  std::string base_dir;

  std::string ResolvedBundlePath() const;
  std::string ResolvedParsePath() const;
  BoundingBox image_box() const {
    return {0, 0, static_cast<double>(image_width), static_cast<double>(image_height)};
  }
};

struct ProposalSet {
  std::string image_id;
  std::vector<BoundingBox> boxes;
  std::vector<double> confidences;  // empty, or one per box
};

using ProposalMap = std::map<std::string, ProposalSet>;

struct PipelineConfig {
  double alpha = 0.16;
  bool weighting = true;
  bool include_special_tokens = false;
  double iou_threshold = 0.5;
  std::string tie_break = "ascending-index";
  std::uint64_t seed = 0;
  double gamma_min = 1.0;

  // Throws Error(kInvalidArgument) for out-of-range values.
  void Validate() const;
};

struct CropPlan {
  std::string sample_id;
  int image_width = 0;
  int image_height = 0;
  double gamma = 1.0;
  double gamma_min = 1.0;
  std::uint64_t seed = 0;
  BoundingBox detected;
  BoundingBox region;
  PixelRect rect;
  FrameTransform transform;

  friend bool operator==(const CropPlan&, const CropPlan&) = default;
};

struct SampleOutcome {
  std::string sample_id;
  bool ok = false;
  std::string error;  // set when !ok
  std::size_t chosen_index = 0;
  BoundingBox chosen_box;
  double score = 0;
  double iou = 0;
  // Largest IoU any proposal reaches against the ground truth.
  double best_proposal_iou = 0;
  bool correct = false;

  friend bool operator==(const SampleOutcome&, const SampleOutcome&) = default;
};

struct EvaluationReport {
  PipelineConfig config;
  std::map<std::string, std::string> inputs;
  std::vector<SampleOutcome> samples;
  std::size_t sample_count = 0;
  std::size_t evaluated_count = 0;
  std::size_t errored_count = 0;
  std::size_t correct_count = 0;
  double accuracy = 0;
};

struct SweepCell {
  double gamma_min = 1.0;
  double sqrt_alpha = 1.0;
  double alpha = 1.0;
  bool ok = false;
  std::string error;
  std::size_t evaluated_count = 0;
  std::size_t errored_count = 0;
  std::size_t correct_count = 0;
  double accuracy = 0;
};

struct SweepTable {
  PipelineConfig config;
  std::vector<double> gamma_mins;
  std::vector<double> sqrt_alphas;
  std::map<std::string, std::string> inputs;
  std::vector<SweepCell> cells;  // row-major: gamma_min outer, alpha inner
};

}  // namespace groundkit
