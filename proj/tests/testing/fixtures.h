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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "groundkit/depparse.h"
#include "groundkit/geometry.h"
#include "groundkit/heatmap.h"
#include "groundkit/records.h"

namespace groundkit::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string TestDataPath(const std::string& name);

// Random stack with `tokens` maps of width x height, values in [0, 1).
HeatmapStack RandomStack(std::mt19937_64& rng, int tokens, int width, int height);

// Brute-force references, deliberately written without the library's
// fusion or summed-area code.
double NaiveRectMean(const Heatmap& h, const PixelRect& r);
std::vector<double> NaiveWeightedFusion(const HeatmapStack& stack, const std::vector<double>& w);
// Argmax by direct per-cell scoring; first index wins ties.
std::size_t NaiveTop1(const Heatmap& h, const std::vector<BoundingBox>& proposals);

// Writes a CoNLL-U block for (form, head, relation) triples.
std::string ConlluBlock(const std::vector<std::tuple<std::string, int, std::string>>& rows);

// The "women under pink umbrella" fixture: the sub-object tokens "pink" and
// "umbrella" light up proposal 1, the main object "women" lights up
// proposal 0. Uniform fusion picks 1, root-relative weighting with a small
// alpha picks 0.
struct MainVsSubFixture {
  HeatmapStack stack;
  std::vector<ParsedSentence> parse;
  std::vector<BoundingBox> proposals;  // 0: main object, 1: sub-object
  BoundingBox gt;                      // equals proposals[0]
};
MainVsSubFixture MakeMainVsSub();

// Materializes samples on disk: one bundle and one parse per sample plus a
// manifest and a proposal file.
struct SyntheticCorpus {
  std::string manifest_path;
  std::string proposals_path;
  std::vector<SampleRecord> samples;
  ProposalMap proposals;
};

// `count` random samples with subword-split queries, random dependency trees
// and 4-9 proposals each. Deterministic in `seed`.
SyntheticCorpus WriteRandomCorpus(const std::filesystem::path& dir, int count, std::uint64_t seed,
                                  double value_scale = 1.0);

// Writes the main-vs-sub fixture as a one-sample corpus.
SyntheticCorpus WriteMainVsSubCorpus(const std::filesystem::path& dir);

// Single-proposal samples whose predicted box reaches the given IoUs with a
// 10x10 ground-truth box.
SyntheticCorpus WriteIouCorpus(const std::filesystem::path& dir, const std::vector<double>& widths);

// Rewrites every bundle of `src` into `dir` with values multiplied by c.
SyntheticCorpus ScaleCorpus(const SyntheticCorpus& src, const std::filesystem::path& dir, double c);

}  // namespace groundkit::testing
