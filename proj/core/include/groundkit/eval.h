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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groundkit/cropper.h"
#include "groundkit/depparse.h"
#include "groundkit/heatmap.h"
#include "groundkit/records.h"

namespace groundkit {

// Per-sample inputs after loading. `error` is set instead of the artifacts
// when a file is missing or corrupt.
struct LoadedSample {
  const SampleRecord* record = nullptr;
  const ProposalSet* proposals = nullptr;
  HeatmapStack stack;
  std::vector<ParsedSentence> parse;  // empty unless requested
  std::optional<std::string> error;
};

// Reads the bundle (and the parse, when `need_parse`) for every sample.
std::vector<LoadedSample> LoadSamples(const std::vector<SampleRecord>& samples,
                                      const ProposalMap& proposals, bool need_parse,
                                      int workers = 1);

// Root-relative weights for a stack, from the parse of its query. Words of
// all sentences are aligned in order; the first sentence's root is used.
WeightVector QueryWeights(const HeatmapStack& stack, const std::vector<ParsedSentence>& parse,
                          double alpha, bool include_special_tokens);

// Fuses the stack (weighted when cfg.weighting is on, uniform otherwise) and
// returns every proposal ranked.
std::vector<RankedProposal> RankForSample(const HeatmapStack& stack,
                                          const std::vector<ParsedSentence>& parse,
                                          const ProposalSet& proposals, const PipelineConfig& cfg);

// Top-1 proposal for a sample, loading its artifacts from disk.
RankedProposal InferSample(const SampleRecord& sample, const ProposalSet& proposals,
                           const PipelineConfig& cfg);

// Correct iff IoU(prediction, gt) > threshold, strictly.
bool IsCorrect(double iou, double threshold);

SampleOutcome EvaluateLoaded(const LoadedSample& sample, const PipelineConfig& cfg);

// Per-sample outcomes in manifest order plus exact accuracy over the
// non-errored samples. Output does not depend on `workers`.
EvaluationReport EvaluateSamples(const std::vector<LoadedSample>& samples,
                                 const PipelineConfig& cfg, int workers = 1);
EvaluationReport Evaluate(const std::vector<SampleRecord>& samples, const ProposalMap& proposals,
                          const PipelineConfig& cfg, int workers = 1);

// Plans one crop per sample. The detected region is the top-1 proposal
// under uniform fusion, or weighted fusion when cfg.weighting is on.
std::vector<CropPlan> PlanCrops(const std::vector<SampleRecord>& samples,
                                const ProposalMap& proposals, const PipelineConfig& cfg,
                                int workers = 1);

struct SweepGrid {
  std::vector<double> gamma_mins = {1.0};
  // Exactly one of the alpha axes is used: sqrt_alphas when non-empty.
  std::vector<double> sqrt_alphas;
  std::vector<double> alphas;
  // Manifest per gamma_min value. Models trained with target-aware cropping
  // are produced outside this toolkit, so each row needs its own exports.
  std::map<double, std::string> manifests;

  void Validate() const;
};

// Evaluates the full gamma_min x alpha cross product with weighting on.
// Rows without a usable manifest, and cells where no sample evaluates, are
// marked errored; the remaining cells are still filled.
SweepTable Sweep(const SweepGrid& grid, const ProposalMap& proposals, const PipelineConfig& cfg,
                 int workers = 1);

}  // namespace groundkit
