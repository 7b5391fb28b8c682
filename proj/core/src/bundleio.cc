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

#include "groundkit/bundleio.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "groundkit/error.h"

namespace groundkit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[offset + i]);
  return v;
}

std::uint16_t GetU16(std::string_view bytes, std::size_t offset) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[offset]) |
                                    (static_cast<unsigned char>(bytes[offset + 1]) << 8));
}

std::uint32_t ToU32(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

std::string Truncated(std::size_t expected, std::size_t actual, const char* part) {
  return std::string(part) + ": expected at least " + std::to_string(expected) +
         " bytes, file has " + std::to_string(actual);
}

// --- JSON field helpers ------------------------------------------------------

[[noreturn]] void Missing(const std::string& field, std::size_t line, const char* kind) {
  throw Error(ErrorCode::kMissingField, "required " + std::string(kind) + " field '" + field + "'",
              line);
}

const json& Field(const json& obj, const std::string& name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) Missing(name, line, "");
  return *it;
}

std::string StringField(const json& obj, const std::string& name, std::size_t line) {
  const json& v = Field(obj, name, line);
  if (!v.is_string()) Missing(name, line, "string");
  return v.get<std::string>();
}

int PositiveIntField(const json& obj, const std::string& name, std::size_t line) {
  const json& v = Field(obj, name, line);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1 << 30) {
    Missing(name, line, "positive integer");
  }
  return v.get<int>();
}

BoundingBox BoxFromJson(const json& v, const std::string& name, std::size_t line) {
  if (!v.is_array() || v.size() != 4) Missing(name, line, "[x1, y1, x2, y2]");
  for (const auto& c : v) {
    if (!c.is_number()) Missing(name, line, "[x1, y1, x2, y2]");
  }
  BoundingBox b{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  if (!b.valid()) {
    std::ostringstream msg;
    msg << "'" << name << "' is not a valid box " << b;
    throw Error(ErrorCode::kInvalidArgument, msg.str(), line);
  }
  return b;
}

template <typename J>
J BoxToJson(const BoundingBox& b) {
  return J::array({b.x1, b.y1, b.x2, b.y2});
}

// Calls fn(parsed_object, line_number) for every non-blank line.
template <typename Fn>
void ForEachJsonLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformedJson, e.what(), line_no);
    }
    if (!obj.is_object()) throw Error(ErrorCode::kMalformedJson, "expected a JSON object", line_no);
    fn(obj, line_no);
  }
}

std::string ResolveAgainst(const std::string& base, const std::string& path) {
  if (base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base) / path).string();
}

std::string ParentDir(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

// --- config ------------------------------------------------------------------

ordered_json ConfigToJson(const PipelineConfig& c) {
  ordered_json j;
  j["alpha"] = c.alpha;
  j["sqrt_alpha"] = std::sqrt(c.alpha);
  j["weighting"] = c.weighting ? "on" : "off";
  j["include_special_tokens"] = c.include_special_tokens;
  j["iou_threshold"] = c.iou_threshold;
  j["tie_break"] = c.tie_break;
  j["seed"] = c.seed;
  j["gamma_min"] = c.gamma_min;
  return j;
}

PipelineConfig ConfigFromJson(const json& j) {
  PipelineConfig c;
  c.alpha = Field(j, "alpha", 0).get<double>();
  c.weighting = Field(j, "weighting", 0).get<std::string>() == "on";
  c.include_special_tokens = Field(j, "include_special_tokens", 0).get<bool>();
  c.iou_threshold = Field(j, "iou_threshold", 0).get<double>();
  c.tie_break = Field(j, "tie_break", 0).get<std::string>();
  c.seed = Field(j, "seed", 0).get<std::uint64_t>();
  c.gamma_min = Field(j, "gamma_min", 0).get<double>();
  return c;
}

}  // namespace

// --- SampleRecord / PipelineConfig -------------------------------------------

std::string SampleRecord::ResolvedBundlePath() const { return ResolveAgainst(base_dir, bundle_path); }
std::string SampleRecord::ResolvedParsePath() const { return ResolveAgainst(base_dir, parse_path); }

void PipelineConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "IoU threshold must lie in (0, 1)");
  }
  if (!(gamma_min >= 0.0 && gamma_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma_min must lie in [0, 1]");
  }
  if (tie_break != "ascending-index") {
    throw Error(ErrorCode::kInvalidArgument, "unsupported tie-break policy '" + tie_break + "'");
  }
}

// --- files -------------------------------------------------------------------

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

// --- HMB1 --------------------------------------------------------------------

std::string EncodeBundle(const HeatmapStack& stack) {
  stack.Validate();
  const Heatmap& first = stack.maps.front();

  std::string out(kBundleMagic, sizeof(kBundleMagic));
  PutU16(out, kBundleVersion);
  PutU32(out, ToU32(stack.token_count(), "token count"));
  PutU32(out, ToU32(first.height(), "grid height"));
  PutU32(out, ToU32(first.width(), "grid width"));
  PutU32(out, ToU32(stack.image_height, "image height"));
  PutU32(out, ToU32(stack.image_width, "image width"));
  out.reserve(out.size() + stack.token_count() * first.size() * 4);
  for (const Heatmap& m : stack.maps) {
    for (double v : m.values()) {
      const float f = static_cast<float>(v);
      if (!std::isfinite(f)) throw Error(ErrorCode::kNonFiniteValue, "value overflows float32");
      PutU32(out, std::bit_cast<std::uint32_t>(f));
    }
  }

  json trailer;
  trailer["tokens"] = stack.tokens;
  trailer["special"] = stack.special;
  trailer["continuation_marker"] = stack.continuation_marker;
  trailer["query"] = stack.query;
  std::string text;
  try {
    text = trailer.dump();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("token metadata: ") + e.what());
  }
  PutU32(out, ToU32(text.size(), "trailer length"));
  out += text;
  return out;
}

HeatmapStack DecodeBundle(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBundleMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "file does not start with \"HMB1\"");
  }
  if (bytes.size() < kBundleHeaderSize) {
    throw Error(ErrorCode::kTruncated, Truncated(kBundleHeaderSize, bytes.size(), "header"));
  }
  const std::uint16_t version = GetU16(bytes, 4);
  if (version != kBundleVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "version " + std::to_string(version) + ", expected " + std::to_string(kBundleVersion));
  }
  const std::uint64_t tokens = GetU32(bytes, 6);
  const std::uint64_t grid_h = GetU32(bytes, 10);
  const std::uint64_t grid_w = GetU32(bytes, 14);
  const std::uint32_t image_h = GetU32(bytes, 18);
  const std::uint32_t image_w = GetU32(bytes, 22);
  if (tokens == 0 || grid_h == 0 || grid_w == 0 || image_h == 0 || image_w == 0) {
    throw Error(ErrorCode::kInvalidArgument, "header has a zero extent");
  }
  if (grid_h > (1u << 30) || grid_w > (1u << 30) || image_h > (1u << 30) || image_w > (1u << 30)) {
    throw Error(ErrorCode::kInvalidArgument, "header extent too large");
  }
  const std::uint64_t cells = grid_h * grid_w;
  const std::uint64_t payload = tokens * cells * 4;
  const std::uint64_t trailer_at = kBundleHeaderSize + payload;
  if (bytes.size() < trailer_at + 4) {
    throw Error(ErrorCode::kTruncated, Truncated(trailer_at + 4, bytes.size(), "payload"));
  }
  const std::uint64_t trailer_len = GetU32(bytes, trailer_at);
  const std::uint64_t end = trailer_at + 4 + trailer_len;
  if (bytes.size() < end) {
    throw Error(ErrorCode::kTruncated, Truncated(end, bytes.size(), "trailer"));
  }
  if (bytes.size() > end) {
    throw Error(ErrorCode::kTrailingData,
                std::to_string(bytes.size() - end) + " bytes after the trailer");
  }

  HeatmapStack stack;
  stack.image_width = static_cast<int>(image_w);
  stack.image_height = static_cast<int>(image_h);
  const double cell_w = static_cast<double>(image_w) / grid_w;
  const double cell_h = static_cast<double>(image_h) / grid_h;
  std::size_t offset = kBundleHeaderSize;
  for (std::uint64_t t = 0; t < tokens; ++t) {
    std::vector<double> values(cells);
    for (std::uint64_t c = 0; c < cells; ++c, offset += 4) {
      const float f = std::bit_cast<float>(GetU32(bytes, offset));
      if (!std::isfinite(f)) {
        throw Error(ErrorCode::kNonFiniteValue,
                    "token " + std::to_string(t) + " cell " + std::to_string(c) + " is not finite");
      }
      if (f < 0) {
        throw Error(ErrorCode::kNegativeValue,
                    "token " + std::to_string(t) + " cell " + std::to_string(c) + " is negative");
      }
      values[c] = f;
    }
    stack.maps.emplace_back(static_cast<int>(grid_w), static_cast<int>(grid_h), std::move(values),
                            cell_w, cell_h);
  }

  try {
    const json trailer = json::parse(bytes.substr(trailer_at + 4, trailer_len));
    stack.tokens = trailer.at("tokens").get<std::vector<std::string>>();
    stack.special = trailer.at("special").get<std::vector<bool>>();
    stack.continuation_marker = trailer.at("continuation_marker").get<std::string>();
    stack.query = trailer.at("query").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadTrailer, e.what());
  }
  if (stack.tokens.size() != tokens || stack.special.size() != tokens) {
    throw Error(ErrorCode::kBadTrailer, "trailer token metadata does not match token count " +
                                            std::to_string(tokens));
  }
  return stack;
}

void WriteBundle(const HeatmapStack& stack, const std::string& path) {
  WriteFile(path, EncodeBundle(stack));
}

HeatmapStack ReadBundle(const std::string& path) {
  const std::string bytes = ReadFile(path);
  try {
    return DecodeBundle(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.line());
  }
}

// --- manifest ----------------------------------------------------------------

std::vector<SampleRecord> ParseManifest(std::string_view text, const std::string& base_dir) {
  std::vector<SampleRecord> samples;
  std::set<std::string> seen;
  ForEachJsonLine(text, [&](const json& obj, std::size_t line) {
    SampleRecord s;
    s.sample_id = StringField(obj, "sample_id", line);
    s.image_id = StringField(obj, "image_id", line);
    s.image_width = PositiveIntField(obj, "image_width", line);
    s.image_height = PositiveIntField(obj, "image_height", line);
    s.query = StringField(obj, "query", line);
    s.gt_box = BoxFromJson(Field(obj, "gt_box", line), "gt_box", line);
    s.bundle_path = StringField(obj, "bundle", line);
    s.parse_path = StringField(obj, "parse", line);
    s.base_dir = base_dir;
    if (!s.image_box().contains(s.gt_box)) {
      std::ostringstream msg;
      msg << "sample '" << s.sample_id << "' gt_box " << s.gt_box << " outside " << s.image_width
          << "x" << s.image_height << " image";
      throw Error(ErrorCode::kOutOfBounds, msg.str(), line);
    }
    if (!seen.insert(s.sample_id).second) {
      throw Error(ErrorCode::kDuplicateId, "sample id '" + s.sample_id + "' repeated", line);
    }
    samples.push_back(std::move(s));
  });
  return samples;
}

std::vector<SampleRecord> ReadManifest(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    return ParseManifest(text, ParentDir(path));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.line());
  }
}

void WriteManifest(const std::vector<SampleRecord>& samples, const std::string& path) {
  std::string out;
  for (const SampleRecord& s : samples) {
    ordered_json j;
    j["sample_id"] = s.sample_id;
    j["image_id"] = s.image_id;
    j["image_width"] = s.image_width;
    j["image_height"] = s.image_height;
    j["query"] = s.query;
    j["gt_box"] = BoxToJson<ordered_json>(s.gt_box);
    j["bundle"] = s.bundle_path;
    j["parse"] = s.parse_path;
    out += j.dump();
    out += '\n';
  }
  WriteFile(path, out);
}

// --- proposals ---------------------------------------------------------------

ProposalMap ParseProposals(std::string_view text) {
  ProposalMap out;
  ForEachJsonLine(text, [&](const json& obj, std::size_t line) {
    ProposalSet set;
    set.image_id = StringField(obj, "image_id", line);
    const json& boxes = Field(obj, "boxes", line);
    if (!boxes.is_array() || boxes.empty()) {
      throw Error(ErrorCode::kMissingField,
                  "image '" + set.image_id + "' needs a non-empty 'boxes' array", line);
    }
    for (const json& b : boxes) set.boxes.push_back(BoxFromJson(b, "boxes", line));
    if (auto it = obj.find("confidences"); it != obj.end()) {
      if (!it->is_array() || it->size() != set.boxes.size()) {
        throw Error(ErrorCode::kMissingField, "'confidences' must have one number per box", line);
      }
      for (const json& c : *it) {
        if (!c.is_number()) Missing("confidences", line, "numeric");
        set.confidences.push_back(c.get<double>());
      }
    }
    const std::string id = set.image_id;
    if (!out.emplace(id, std::move(set)).second) {
      throw Error(ErrorCode::kDuplicateId, "image id '" + id + "' repeated", line);
    }
  });
  return out;
}

ProposalMap ReadProposals(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    return ParseProposals(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.detail(), e.line());
  }
}

void WriteProposals(const ProposalMap& proposals, const std::string& path) {
  std::string out;
  for (const auto& [id, set] : proposals) {
    ordered_json j;
    j["image_id"] = id;
    j["boxes"] = ordered_json::array();
    for (const BoundingBox& b : set.boxes) j["boxes"].push_back(BoxToJson<ordered_json>(b));
    if (!set.confidences.empty()) j["confidences"] = set.confidences;
    out += j.dump();
    out += '\n';
  }
  WriteFile(path, out);
}

void CheckProposalCoverage(const std::vector<SampleRecord>& samples,
                           const ProposalMap& proposals) {
  for (const SampleRecord& s : samples) {
    if (!proposals.contains(s.image_id)) {
      throw Error(ErrorCode::kDanglingReference,
                  "sample '" + s.sample_id + "' references image '" + s.image_id +
                      "' which has no proposals");
    }
  }
}

// --- evaluation report -------------------------------------------------------

std::string EncodeReport(const EvaluationReport& report) {
  ordered_json j;
  j["config"] = ConfigToJson(report.config);
  j["inputs"] = report.inputs;
  ordered_json summary;
  summary["accuracy"] = report.accuracy;
  summary["correct_count"] = report.correct_count;
  summary["evaluated_count"] = report.evaluated_count;
  summary["errored_count"] = report.errored_count;
  summary["sample_count"] = report.sample_count;
  j["summary"] = summary;
  j["samples"] = ordered_json::array();
  for (const SampleOutcome& s : report.samples) {
    ordered_json o;
    o["sample_id"] = s.sample_id;
    o["status"] = s.ok ? "ok" : "error";
    if (s.ok) {
      o["chosen_index"] = s.chosen_index;
      o["chosen_box"] = BoxToJson<ordered_json>(s.chosen_box);
      o["score"] = s.score;
      o["iou"] = s.iou;
      o["best_proposal_iou"] = s.best_proposal_iou;
      o["correct"] = s.correct;
    } else {
      o["error"] = s.error;
    }
    j["samples"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

EvaluationReport DecodeReport(std::string_view text) {
  EvaluationReport r;
  try {
    const json j = json::parse(text);
    r.config = ConfigFromJson(j.at("config"));
    r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    const json& summary = j.at("summary");
    r.accuracy = summary.at("accuracy").get<double>();
    r.correct_count = summary.at("correct_count").get<std::size_t>();
    r.evaluated_count = summary.at("evaluated_count").get<std::size_t>();
    r.errored_count = summary.at("errored_count").get<std::size_t>();
    r.sample_count = summary.at("sample_count").get<std::size_t>();
    for (const json& o : j.at("samples")) {
      SampleOutcome s;
      s.sample_id = o.at("sample_id").get<std::string>();
      s.ok = o.at("status").get<std::string>() == "ok";
      if (s.ok) {
        s.chosen_index = o.at("chosen_index").get<std::size_t>();
        s.chosen_box = BoxFromJson(o.at("chosen_box"), "chosen_box", 0);
        s.score = o.at("score").get<double>();
        s.iou = o.at("iou").get<double>();
        s.best_proposal_iou = o.at("best_proposal_iou").get<double>();
        s.correct = o.at("correct").get<bool>();
      } else {
        s.error = o.at("error").get<std::string>();
      }
      r.samples.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  return r;
}

void WriteReport(const EvaluationReport& report, const std::string& path) {
  WriteFile(path, EncodeReport(report));
}

EvaluationReport ReadReport(const std::string& path) { return DecodeReport(ReadFile(path)); }

// --- crop plans --------------------------------------------------------------

std::string EncodeCropPlans(const std::vector<CropPlan>& plans) {
  std::string out;
  for (const CropPlan& p : plans) {
    ordered_json j;
    j["sample_id"] = p.sample_id;
    j["image_width"] = p.image_width;
    j["image_height"] = p.image_height;
    j["gamma"] = p.gamma;
    j["gamma_min"] = p.gamma_min;
    j["seed"] = p.seed;
    j["detected"] = BoxToJson<ordered_json>(p.detected);
    j["region"] = BoxToJson<ordered_json>(p.region);
    j["rect"] = ordered_json::array({p.rect.x, p.rect.y, p.rect.w, p.rect.h});
    ordered_json t;
    t["scale_x"] = p.transform.scale_x;
    t["scale_y"] = p.transform.scale_y;
    t["offset_x"] = p.transform.offset_x;
    t["offset_y"] = p.transform.offset_y;
    j["transform"] = t;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<CropPlan> DecodeCropPlans(std::string_view text) {
  std::vector<CropPlan> plans;
  ForEachJsonLine(text, [&](const json& j, std::size_t line) {
    try {
      CropPlan p;
      p.sample_id = j.at("sample_id").get<std::string>();
      p.image_width = j.at("image_width").get<int>();
      p.image_height = j.at("image_height").get<int>();
      p.gamma = j.at("gamma").get<double>();
      p.gamma_min = j.at("gamma_min").get<double>();
      p.seed = j.at("seed").get<std::uint64_t>();
      p.detected = BoxFromJson(j.at("detected"), "detected", line);
      p.region = BoxFromJson(j.at("region"), "region", line);
      const auto rect = j.at("rect").get<std::vector<int>>();
      if (rect.size() != 4) Missing("rect", line, "[x, y, w, h]");
      p.rect = {rect[0], rect[1], rect[2], rect[3]};
      const json& t = j.at("transform");
      p.transform.scale_x = t.at("scale_x").get<double>();
      p.transform.scale_y = t.at("scale_y").get<double>();
      p.transform.offset_x = t.at("offset_x").get<double>();
      p.transform.offset_y = t.at("offset_y").get<double>();
      plans.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMissingField, e.what(), line);
    }
  });
  return plans;
}

void WriteCropPlans(const std::vector<CropPlan>& plans, const std::string& path) {
  WriteFile(path, EncodeCropPlans(plans));
}

std::vector<CropPlan> ReadCropPlans(const std::string& path) {
  return DecodeCropPlans(ReadFile(path));
}

// --- sweep -------------------------------------------------------------------

std::string EncodeSweep(const SweepTable& table) {
  ordered_json j;
  j["config"] = ConfigToJson(table.config);
  j["inputs"] = table.inputs;
  j["gamma_min"] = table.gamma_mins;
  j["sqrt_alpha"] = table.sqrt_alphas;
  j["cells"] = ordered_json::array();
  for (const SweepCell& c : table.cells) {
    ordered_json o;
    o["gamma_min"] = c.gamma_min;
    o["sqrt_alpha"] = c.sqrt_alpha;
    o["alpha"] = c.alpha;
    o["status"] = c.ok ? "ok" : "error";
    if (c.ok) {
      o["accuracy"] = c.accuracy;
      o["correct_count"] = c.correct_count;
      o["evaluated_count"] = c.evaluated_count;
      o["errored_count"] = c.errored_count;
    } else {
      o["error"] = c.error;
    }
    j["cells"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string RenderSweepText(const SweepTable& table) {
  std::ostringstream out;
  out << std::fixed;
  out << std::setw(14) << "gamma_min \\ sa";
  for (double s : table.sqrt_alphas) out << std::setw(10) << std::setprecision(2) << s;
  out << "\n";
  out << std::setw(14) << "(alpha)";
  for (double s : table.sqrt_alphas) out << std::setw(10) << std::setprecision(4) << s * s;
  out << "\n";
  std::size_t k = 0;
  for (double g : table.gamma_mins) {
    out << std::setw(14) << std::setprecision(2) << g;
    for (std::size_t a = 0; a < table.sqrt_alphas.size(); ++a, ++k) {
      const SweepCell& c = table.cells[k];
      if (c.ok) {
        out << std::setw(10) << std::setprecision(2) << c.accuracy * 100.0;
      } else {
        out << std::setw(10) << "error";
      }
    }
    out << "\n";
  }
  return out.str();
}

void WriteSweep(const SweepTable& table, const std::string& path) {
  WriteFile(path, EncodeSweep(table));
}

}  // namespace groundkit
