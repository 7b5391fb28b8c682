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
#include <string>
#include <string_view>
#include <vector>

#include "groundkit/heatmap.h"
#include "groundkit/records.h"

namespace groundkit {

// HMB1 heatmap bundle, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "HMB1"
//   4       2     format version (u16, currently 1)
//   6       4     token count T (u32)
//   10      4     grid height H (u32)
//   14      4     grid width W (u32)
//   18      4     image height (u32)
//   22      4     image width (u32)
//   26      4*T*H*W  float32 values, token-major, row-major per token
//   ...     4     trailer length L (u32)
//   ...     L     UTF-8 JSON: tokens, special, continuation_marker, query
//
// Values must be finite and non-negative. Nothing may follow the trailer.
inline constexpr char kBundleMagic[4] = {'H', 'M', 'B', '1'};
inline constexpr std::uint16_t kBundleVersion = 1;
inline constexpr std::size_t kBundleHeaderSize = 26;

std::string EncodeBundle(const HeatmapStack& stack);
HeatmapStack DecodeBundle(std::string_view bytes);

void WriteBundle(const HeatmapStack& stack, const std::string& path);
HeatmapStack ReadBundle(const std::string& path);

// JSON lines; blank lines are skipped and unknown fields ignored. Errors
// carry the 1-based line number.
std::vector<SampleRecord> ParseManifest(std::string_view text, const std::string& base_dir = "");
std::vector<SampleRecord> ReadManifest(const std::string& path);
void WriteManifest(const std::vector<SampleRecord>& samples, const std::string& path);

ProposalMap ParseProposals(std::string_view text);
ProposalMap ReadProposals(const std::string& path);
void WriteProposals(const ProposalMap& proposals, const std::string& path);

// Every sample's image id must have a proposal set.
void CheckProposalCoverage(const std::vector<SampleRecord>& samples,
                           const ProposalMap& proposals);

std::string EncodeReport(const EvaluationReport& report);
EvaluationReport DecodeReport(std::string_view text);
void WriteReport(const EvaluationReport& report, const std::string& path);
EvaluationReport ReadReport(const std::string& path);

std::string EncodeCropPlans(const std::vector<CropPlan>& plans);
std::vector<CropPlan> DecodeCropPlans(std::string_view text);
void WriteCropPlans(const std::vector<CropPlan>& plans, const std::string& path);
std::vector<CropPlan> ReadCropPlans(const std::string& path);

std::string EncodeSweep(const SweepTable& table);
// Fixed-width text rendering: one row per gamma_min, one column per alpha.
std::string RenderSweepText(const SweepTable& table);
void WriteSweep(const SweepTable& table, const std::string& path);

// Whole-file helpers shared by the readers and the CLI.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view bytes);

}  // namespace groundkit
