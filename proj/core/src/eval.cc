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

#include "groundkit/eval.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "groundkit/bundleio.h"
#include "groundkit/error.h"
#include "parallel.h"

namespace groundkit {

using internal::ParallelFor;

std::vector<LoadedSample> LoadSamples(const std::vector<SampleRecord>& samples,
                                      const ProposalMap& proposals, bool need_parse,
                                      int workers) {
  std::vector<LoadedSample> loaded(samples.size());
  ParallelFor(samples.size(), workers, [&](std::size_t i) {
    LoadedSample& out = loaded[i];
    out.record = &samples[i];
    try {
      auto it = proposals.find(samples[i].image_id);
      if (it == proposals.end()) {
        throw Error(ErrorCode::kDanglingReference,
                    "no proposals for image '" + samples[i].image_id + "'");
      }
      out.proposals = &it->second;
      out.stack = ReadBundle(samples[i].ResolvedBundlePath());
      if (need_parse) out.parse = ReadConlluFile(samples[i].ResolvedParsePath());
    } catch (const Error& e) {
      out.error = e.what();
    }
  });
  return loaded;
}

WeightVector QueryWeights(const HeatmapStack& stack, const std::vector<ParsedSentence>& parse,
                          double alpha, bool include_special_tokens) {
  if (parse.empty()) throw Error(ErrorCode::kInvalidArgument, "query parse has no sentences");
  std::vector<std::string> words;
  for (const ParsedSentence& s : parse) {
    for (const DepToken& t : s.tokens) words.push_back(t.form);
  }
  const SubwordAlignment alignment =
      AlignSubwords(words, stack.tokens, stack.continuation_marker, stack.special);
  return MakeWeightVector(alignment, FindRoot(parse.front()), alpha, include_special_tokens);
}

std::vector<RankedProposal> RankForSample(const HeatmapStack& stack,
                                          const std::vector<ParsedSentence>& parse,
                                          const ProposalSet& proposals,
                                          const PipelineConfig& cfg) {
  const FusionOptions options{cfg.include_special_tokens};
  if (!cfg.weighting) return RankProposals(CombineUniform(stack, options), proposals.boxes);
  const WeightVector w = QueryWeights(stack, parse, cfg.alpha, cfg.include_special_tokens);
  return RankProposals(CombineWeighted(stack, w.weights, options), proposals.boxes);
}

RankedProposal InferSample(const SampleRecord& sample, const ProposalSet& proposals,
                           const PipelineConfig& cfg) {
  cfg.Validate();
  const HeatmapStack stack = ReadBundle(sample.ResolvedBundlePath());
  std::vector<ParsedSentence> parse;
  if (cfg.weighting) parse = ReadConlluFile(sample.ResolvedParsePath());
  return RankForSample(stack, parse, proposals, cfg).front();
}

bool IsCorrect(double iou, double threshold) { return iou > threshold; }

SampleOutcome EvaluateLoaded(const LoadedSample& sample, const PipelineConfig& cfg) {
  SampleOutcome out;
  out.sample_id = sample.record->sample_id;
  if (sample.error) {
    out.error = *sample.error;
    return out;
  }
  try {
    const RankedProposal top = RankForSample(sample.stack, sample.parse, *sample.proposals, cfg).front();
    const BoundingBox& gt = sample.record->gt_box;
    out.ok = true;
    out.chosen_index = top.index;
    out.chosen_box = top.box;
    out.score = top.score;
    out.iou = Iou(top.box, gt);
    for (const BoundingBox& b : sample.proposals->boxes) {
      out.best_proposal_iou = std::max(out.best_proposal_iou, Iou(b, gt));
    }
    out.correct = IsCorrect(out.iou, cfg.iou_threshold);
  } catch (const Error& e) {
    out = SampleOutcome{};
    out.sample_id = sample.record->sample_id;
    out.error = e.what();
  }
  return out;
}

EvaluationReport EvaluateSamples(const std::vector<LoadedSample>& samples,
                                 const PipelineConfig& cfg, int workers) {
  cfg.Validate();
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest has no samples");
  EvaluationReport report;
  report.config = cfg;
  report.samples.resize(samples.size());
  ParallelFor(samples.size(), workers,
              [&](std::size_t i) { report.samples[i] = EvaluateLoaded(samples[i], cfg); });
  report.sample_count = samples.size();
  for (const SampleOutcome& s : report.samples) {
    if (!s.ok) {
      ++report.errored_count;
      continue;
    }
    ++report.evaluated_count;
    if (s.correct) ++report.correct_count;
  }
  report.accuracy = report.evaluated_count == 0
                        ? 0.0
                        : static_cast<double>(report.correct_count) /
                              static_cast<double>(report.evaluated_count);
  return report;
}

EvaluationReport Evaluate(const std::vector<SampleRecord>& samples, const ProposalMap& proposals,
                          const PipelineConfig& cfg, int workers) {
  cfg.Validate();
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest has no samples");
  CheckProposalCoverage(samples, proposals);
  return EvaluateSamples(LoadSamples(samples, proposals, cfg.weighting, workers), cfg, workers);
}

std::vector<CropPlan> PlanCrops(const std::vector<SampleRecord>& samples,
                                const ProposalMap& proposals, const PipelineConfig& cfg,
                                int workers) {
  cfg.Validate();
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest has no samples");
  CheckProposalCoverage(samples, proposals);
  std::vector<CropPlan> plans(samples.size());
  ParallelFor(samples.size(), workers, [&](std::size_t i) {
    const SampleRecord& s = samples[i];
    const RankedProposal top = InferSample(s, proposals.at(s.image_id), cfg);
    plans[i] = PlanCrop(s, top.box, cfg.gamma_min, cfg.seed);
  });
  return plans;
}

void SweepGrid::Validate() const {
  auto check_axis = [](const std::vector<double>& axis, const char* name) {
    for (double v : axis) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(name) + " value " + std::to_string(v) + " outside [0, 1]");
      }
    }
  };
  if (gamma_mins.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep needs a gamma_min axis");
  if (sqrt_alphas.empty() && alphas.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep needs an alpha axis");
  }
  if (!sqrt_alphas.empty() && !alphas.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give either sqrt-alpha or alpha values, not both");
  }
  check_axis(gamma_mins, "gamma_min");
  check_axis(sqrt_alphas, "sqrt_alpha");
  check_axis(alphas, "alpha");
}

SweepTable Sweep(const SweepGrid& grid, const ProposalMap& proposals, const PipelineConfig& cfg,
                 int workers) {
  grid.Validate();
  cfg.Validate();

  SweepTable table;
  table.config = cfg;
  table.config.weighting = true;
  table.gamma_mins = grid.gamma_mins;
  std::vector<double> alphas;
  if (!grid.sqrt_alphas.empty()) {
    table.sqrt_alphas = grid.sqrt_alphas;
    for (double s : grid.sqrt_alphas) alphas.push_back(s * s);
  } else {
    alphas = grid.alphas;
    for (double a : grid.alphas) table.sqrt_alphas.push_back(std::sqrt(a));
  }
  for (const auto& [g, path] : grid.manifests) {
    std::ostringstream key;
    key << "manifest@gamma_min=" << g;
    table.inputs[key.str()] = path;
  }

  for (double gamma_min : grid.gamma_mins) {
    std::optional<std::string> row_error;
    std::vector<SampleRecord> samples;
    std::vector<LoadedSample> loaded;
    auto it = grid.manifests.find(gamma_min);
    if (it == grid.manifests.end()) {
      std::ostringstream msg;
      msg << "no manifest for gamma_min=" << gamma_min
          << " (models trained with cropping are exported externally)";
      row_error = msg.str();
    } else {
      try {
        samples = ReadManifest(it->second);
        if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "manifest has no samples");
        CheckProposalCoverage(samples, proposals);
        loaded = LoadSamples(samples, proposals, true, workers);
      } catch (const Error& e) {
        row_error = e.what();
      }
    }

    for (std::size_t a = 0; a < alphas.size(); ++a) {
      SweepCell cell;
      cell.gamma_min = gamma_min;
      cell.sqrt_alpha = table.sqrt_alphas[a];
      cell.alpha = alphas[a];
      if (row_error) {
        cell.error = *row_error;
      } else {
        PipelineConfig cell_cfg = table.config;
        cell_cfg.alpha = alphas[a];
        cell_cfg.gamma_min = gamma_min;
        const EvaluationReport r = EvaluateSamples(loaded, cell_cfg, workers);
        cell.evaluated_count = r.evaluated_count;
        cell.errored_count = r.errored_count;
        cell.correct_count = r.correct_count;
        cell.accuracy = r.accuracy;
        cell.ok = r.evaluated_count > 0;
        if (!cell.ok) cell.error = "no sample could be evaluated";
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

}  // namespace groundkit
