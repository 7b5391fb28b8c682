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

#include "cli.h"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "groundkit/bundleio.h"
#include "groundkit/cropper.h"
#include "groundkit/depparse.h"
#include "groundkit/error.h"
#include "groundkit/eval.h"
#include "groundkit/heatmap.h"
#include "render.h"

namespace groundkit::cli {
namespace {

using nlohmann::json;

[[noreturn]] void InputError(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

// Flags shared by the pipeline subcommands. Values from --config are
// applied first; flags given on the command line win.
struct PipelineFlags {
  std::string config_path;
  double alpha = 0;
  double sqrt_alpha = 0;
  double threshold = 0;
  double gamma_min = 0;
  std::string weighting;
  bool include_special = false;
  std::uint64_t seed = 0;
  int workers = 1;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* sqrt_alpha_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* gamma_min_opt = nullptr;
  CLI::Option* weighting_opt = nullptr;
  CLI::Option* include_special_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;

  json config;  // loaded --config contents, or an empty object
};

void AddPipelineFlags(CLI::App* sub, PipelineFlags& f, bool scalar_axes) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  if (scalar_axes) {
    f.alpha_opt = sub->add_option("--alpha", f.alpha, "weight for tokens after the root word")
                      ->check(CLI::Range(0.0, 1.0));
    f.sqrt_alpha_opt = sub->add_option("--sqrt-alpha", f.sqrt_alpha, "alpha given as its square root")
                           ->check(CLI::Range(0.0, 1.0));
    f.alpha_opt->excludes(f.sqrt_alpha_opt);
    f.gamma_min_opt = sub->add_option("--gamma-min", f.gamma_min, "lower bound of the crop weight")
                          ->check(CLI::Range(0.0, 1.0));
  }
  f.weighting_opt = sub->add_option("--weighting", f.weighting, "root-relative token weighting")
                        ->check(CLI::IsMember({"on", "off"}));
  f.include_special_opt = sub->add_flag("--include-special-tokens", f.include_special,
                                        "fuse delimiter tokens too");
  f.threshold_opt = sub->add_option("--threshold", f.threshold, "IoU threshold (strict)");
  f.seed_opt = sub->add_option("--seed", f.seed, "seed for crop-weight sampling");
  f.workers_opt = sub->add_option("--workers", f.workers, "parallel workers")->check(CLI::PositiveNumber);
}

const std::map<std::string, bool>& KnownConfigKeys() {
  // key -> may be an array (sweep axes)
  static const std::map<std::string, bool> keys = {
      {"alpha", true},       {"sqrt_alpha", true},    {"weighting", false},
      {"include_special_tokens", false}, {"threshold", false}, {"seed", false},
      {"gamma_min", true},   {"workers", false},      {"cell_manifests", false},
  };
  return keys;
}

void LoadConfig(PipelineFlags& f) {
  f.config = json::object();
  if (f.config_path.empty()) return;
  try {
    f.config = json::parse(ReadFile(f.config_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, f.config_path + ": " + e.what());
  }
  if (!f.config.is_object()) InputError(f.config_path + ": config must be a JSON object");
  for (const auto& [key, value] : f.config.items()) {
    if (!KnownConfigKeys().contains(key)) InputError(f.config_path + ": unknown config key '" + key + "'");
  }
  if (f.config.contains("alpha") && f.config.contains("sqrt_alpha")) {
    InputError(f.config_path + ": give either alpha or sqrt_alpha");
  }
}

template <typename T>
T ConfigValue(const PipelineFlags& f, const char* key) {
  try {
    return f.config.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, f.config_path + ": config key '" + key + "': " + e.what());
  }
}

bool Given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

bool ParseOnOff(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  InputError("weighting must be 'on' or 'off', got '" + v + "'");
}

PipelineConfig Resolve(PipelineFlags& f, PipelineConfig cfg) {
  LoadConfig(f);
  const bool scalar = f.alpha_opt != nullptr;
  if (scalar && f.config.contains("alpha")) cfg.alpha = ConfigValue<double>(f, "alpha");
  if (scalar && f.config.contains("sqrt_alpha")) {
    const double s = ConfigValue<double>(f, "sqrt_alpha");
    cfg.alpha = s * s;
  }
  if (scalar && f.config.contains("gamma_min")) cfg.gamma_min = ConfigValue<double>(f, "gamma_min");
  if (f.config.contains("weighting")) cfg.weighting = ParseOnOff(ConfigValue<std::string>(f, "weighting"));
  if (f.config.contains("include_special_tokens")) {
    cfg.include_special_tokens = ConfigValue<bool>(f, "include_special_tokens");
  }
  if (f.config.contains("threshold")) cfg.iou_threshold = ConfigValue<double>(f, "threshold");
  if (f.config.contains("seed")) cfg.seed = ConfigValue<std::uint64_t>(f, "seed");
  if (f.config.contains("workers") && !Given(f.workers_opt)) f.workers = ConfigValue<int>(f, "workers");

  if (Given(f.alpha_opt)) cfg.alpha = f.alpha;
  if (Given(f.sqrt_alpha_opt)) cfg.alpha = f.sqrt_alpha * f.sqrt_alpha;
  if (Given(f.gamma_min_opt)) cfg.gamma_min = f.gamma_min;
  if (Given(f.weighting_opt)) cfg.weighting = ParseOnOff(f.weighting);
  if (Given(f.include_special_opt)) cfg.include_special_tokens = f.include_special;
  if (Given(f.threshold_opt)) cfg.iou_threshold = f.threshold;
  if (Given(f.seed_opt)) cfg.seed = f.seed;
  if (f.workers < 1) InputError("workers must be at least 1");
  cfg.Validate();
  return cfg;
}

BoundingBox ParseBoxFlag(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      InputError(std::string(flag) + " expects x1,y1,x2,y2, got '" + text + "'");
    }
  }
  if (v.size() != 4) InputError(std::string(flag) + " expects x1,y1,x2,y2, got '" + text + "'");
  BoundingBox b{v[0], v[1], v[2], v[3]};
  RequireValid(b);
  return b;
}

std::vector<double> ReadWeightsFile(const std::string& path) {
  try {
    const json j = json::parse(ReadFile(path));
    const json& w = j.is_array() ? j : j.at("weights");
    return w.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, path + ": expected {\"weights\": [...]}: " + e.what());
  }
}

const ProposalSet& PickProposals(const ProposalMap& proposals, const std::string& image_id,
                                 const std::string& path) {
  if (!image_id.empty()) {
    auto it = proposals.find(image_id);
    if (it == proposals.end()) {
      throw Error(ErrorCode::kDanglingReference, path + " has no proposals for image '" + image_id + "'");
    }
    return it->second;
  }
  if (proposals.size() != 1) {
    InputError(path + " holds " + std::to_string(proposals.size()) +
               " images; pick one with --image-id");
  }
  return proposals.begin()->second;
}

// Fuses a bundle for combine/rank/render: explicit weights, weights derived
// from a parse, or uniform.
struct FusionSource {
  std::string weights_path;
  std::string parses_path;
};

Heatmap FuseBundle(const HeatmapStack& stack, const FusionSource& src, const PipelineConfig& cfg,
                   bool weighting_given) {
  const FusionOptions options{cfg.include_special_tokens};
  if (!src.weights_path.empty()) {
    if (weighting_given && !cfg.weighting) InputError("--weights conflicts with --weighting off");
    return CombineWeighted(stack, ReadWeightsFile(src.weights_path), options);
  }
  if (!src.parses_path.empty() && cfg.weighting) {
    const auto parse = ReadConlluFile(src.parses_path);
    return CombineWeighted(stack, QueryWeights(stack, parse, cfg.alpha, cfg.include_special_tokens).weights,
                           options);
  }
  if (weighting_given && cfg.weighting) InputError("--weighting on needs --parses or --weights");
  return CombineUniform(stack, options);
}

json RankedToJson(const std::vector<RankedProposal>& ranked) {
  json out = json::array();
  for (const RankedProposal& r : ranked) {
    out.push_back({{"rank", r.rank},
                   {"index", r.index},
                   {"box", {r.box.x1, r.box.y1, r.box.x2, r.box.y2}},
                   {"score", r.score}});
  }
  return out;
}

void Emit(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
  } else {
    WriteFile(path, data);
  }
}

int Dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heatmap fusion, proposal ranking, crop planning and IoU evaluation for "
               "weakly supervised visual grounding.",
               "groundkit"};
  app.require_subcommand(1, 1);

  // combine
  auto* combine = app.add_subcommand("combine", "fuse a heatmap bundle into one query heatmap");
  std::string combine_bundle, combine_out;
  FusionSource combine_src;
  PipelineFlags combine_flags;
  combine->add_option("--bundle", combine_bundle, "HMB1 heatmap bundle")->required()->check(CLI::ExistingFile);
  auto* combine_weights = combine->add_option("--weights", combine_src.weights_path, "JSON token weights")
                              ->check(CLI::ExistingFile);
  auto* combine_parses = combine->add_option("--parses", combine_src.parses_path, "CoNLL-U parse of the query")
                             ->check(CLI::ExistingFile);
  combine_weights->excludes(combine_parses);
  combine->add_option("--out", combine_out, "output HMB1 bundle")->required();
  AddPipelineFlags(combine, combine_flags, true);

  // rank
  auto* rank = app.add_subcommand("rank", "rank proposals by mean fused heatmap value");
  std::string rank_bundle, rank_proposals, rank_image, rank_out;
  FusionSource rank_src;
  PipelineFlags rank_flags;
  rank->add_option("--bundle", rank_bundle, "HMB1 heatmap bundle")->required()->check(CLI::ExistingFile);
  rank->add_option("--proposals", rank_proposals, "proposal JSON lines")->required()->check(CLI::ExistingFile);
  rank->add_option("--image-id", rank_image, "image whose proposals to rank");
  auto* rank_weights = rank->add_option("--weights", rank_src.weights_path, "JSON token weights")
                           ->check(CLI::ExistingFile);
  auto* rank_parses = rank->add_option("--parses", rank_src.parses_path, "CoNLL-U parse of the query")
                          ->check(CLI::ExistingFile);
  rank_weights->excludes(rank_parses);
  rank->add_option("--out", rank_out, "output JSON (default: stdout)");
  AddPipelineFlags(rank, rank_flags, true);

  // crop-plan
  auto* crop = app.add_subcommand("crop-plan", "plan target-aware crops for every manifest sample");
  std::string crop_manifest, crop_proposals, crop_out;
  PipelineFlags crop_flags;
  crop->add_option("--manifest", crop_manifest, "sample manifest (JSON lines)")->required()->check(CLI::ExistingFile);
  crop->add_option("--proposals", crop_proposals, "proposals used to detect the target")->required()->check(CLI::ExistingFile);
  crop->add_option("--out", crop_out, "crop plans (JSON lines, default: stdout)");
  AddPipelineFlags(crop, crop_flags, true);

  // eval
  auto* eval = app.add_subcommand("eval", "top-1 accuracy at IoU > threshold over a manifest");
  std::string eval_manifest, eval_proposals, eval_out;
  PipelineFlags eval_flags;
  eval->add_option("--manifest", eval_manifest, "sample manifest (JSON lines)")->required()->check(CLI::ExistingFile);
  eval->add_option("--proposals", eval_proposals, "proposal JSON lines")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "report JSON (default: stdout)");
  AddPipelineFlags(eval, eval_flags, true);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "accuracy over a gamma_min x alpha grid");
  std::string sweep_manifest, sweep_proposals, sweep_out, sweep_table_out;
  std::vector<double> sweep_sqrt_alphas, sweep_alphas, sweep_gammas;
  std::vector<std::string> sweep_cells;
  PipelineFlags sweep_flags;
  sweep->add_option("--manifest", sweep_manifest, "manifest for the gamma_min = 1 (uncropped) row")
      ->check(CLI::ExistingFile);
  sweep->add_option("--cell-manifest", sweep_cells, "GAMMA_MIN=PATH manifest for a cropped-model row");
  sweep->add_option("--proposals", sweep_proposals, "proposal JSON lines")->required()->check(CLI::ExistingFile);
  auto* sqrt_axis = sweep->add_option("--sqrt-alpha", sweep_sqrt_alphas, "sqrt(alpha) axis")
                        ->check(CLI::Range(0.0, 1.0));
  auto* alpha_axis = sweep->add_option("--alpha", sweep_alphas, "alpha axis")->check(CLI::Range(0.0, 1.0));
  sqrt_axis->excludes(alpha_axis);
  auto* gamma_axis = sweep->add_option("--gamma-min", sweep_gammas, "gamma_min axis")->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--out", sweep_out, "sweep table JSON");
  sweep->add_option("--table-out", sweep_table_out, "aligned text table (default: stdout)");
  AddPipelineFlags(sweep, sweep_flags, false);

  // render
  auto* rend = app.add_subcommand("render", "draw the fused heatmap with prediction and ground truth as PPM");
  std::string render_bundle, render_proposals, render_image_id, render_pred, render_gt, render_base, render_out;
  FusionSource render_src;
  PipelineFlags render_flags;
  rend->add_option("--bundle", render_bundle, "HMB1 heatmap bundle")->required()->check(CLI::ExistingFile);
  auto* render_weights = rend->add_option("--weights", render_src.weights_path, "JSON token weights")
                             ->check(CLI::ExistingFile);
  auto* render_parses = rend->add_option("--parses", render_src.parses_path, "CoNLL-U parse of the query")
                            ->check(CLI::ExistingFile);
  render_weights->excludes(render_parses);
  auto* render_props_opt = rend->add_option("--proposals", render_proposals, "proposals; top-1 is drawn")
                               ->check(CLI::ExistingFile);
  rend->add_option("--image-id", render_image_id, "image whose proposals to use");
  auto* render_pred_opt = rend->add_option("--pred", render_pred, "prediction box x1,y1,x2,y2");
  render_pred_opt->excludes(render_props_opt);
  rend->add_option("--gt", render_gt, "ground-truth box x1,y1,x2,y2");
  rend->add_option("--image", render_base, "grayscale base image (binary PGM)")->check(CLI::ExistingFile);
  rend->add_option("--out", render_out, "output PPM")->required();
  AddPipelineFlags(rend, render_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }

  if (combine->parsed()) {
    PipelineConfig defaults;
    defaults.weighting = !combine_src.weights_path.empty() || !combine_src.parses_path.empty();
    const PipelineConfig cfg = Resolve(combine_flags, defaults);
    HeatmapStack stack = ReadBundle(combine_bundle);
    const Heatmap fused = FuseBundle(stack, combine_src, cfg, Given(combine_flags.weighting_opt));
    HeatmapStack result;
    result.maps = {fused};
    result.tokens = {"<fused>"};
    result.special = {false};
    result.image_width = stack.image_width;
    result.image_height = stack.image_height;
    result.continuation_marker = stack.continuation_marker;
    result.query = stack.query;
    WriteBundle(result, combine_out);
    return kExitOk;
  }

  if (rank->parsed()) {
    PipelineConfig defaults;
    defaults.weighting = !rank_src.weights_path.empty() || !rank_src.parses_path.empty();
    const PipelineConfig cfg = Resolve(rank_flags, defaults);
    const HeatmapStack stack = ReadBundle(rank_bundle);
    const ProposalMap proposals = ReadProposals(rank_proposals);
    const ProposalSet& set = PickProposals(proposals, rank_image, rank_proposals);
    const Heatmap fused = FuseBundle(stack, rank_src, cfg, Given(rank_flags.weighting_opt));
    json j;
    j["image_id"] = set.image_id;
    j["weighted"] = cfg.weighting && (!rank_src.weights_path.empty() || !rank_src.parses_path.empty());
    j["alpha"] = cfg.alpha;
    j["ranked"] = RankedToJson(RankProposals(fused, set.boxes));
    Emit(rank_out, j.dump(2) + "\n", out);
    return kExitOk;
  }

  if (crop->parsed()) {
    PipelineConfig defaults;
    defaults.weighting = false;
    const PipelineConfig cfg = Resolve(crop_flags, defaults);
    const auto samples = ReadManifest(crop_manifest);
    const auto proposals = ReadProposals(crop_proposals);
    Emit(crop_out, EncodeCropPlans(PlanCrops(samples, proposals, cfg, crop_flags.workers)), out);
    return kExitOk;
  }

  if (eval->parsed()) {
    const PipelineConfig cfg = Resolve(eval_flags, PipelineConfig{});
    const auto samples = ReadManifest(eval_manifest);
    const auto proposals = ReadProposals(eval_proposals);
    EvaluationReport report = Evaluate(samples, proposals, cfg, eval_flags.workers);
    report.inputs = {{"manifest", eval_manifest}, {"proposals", eval_proposals}};
    Emit(eval_out, EncodeReport(report), out);
    return kExitOk;
  }

  if (sweep->parsed()) {
    const PipelineConfig cfg = Resolve(sweep_flags, PipelineConfig{});
    SweepGrid grid;
    grid.gamma_mins = {1.0};
    grid.sqrt_alphas = {1.0, 0.8, 0.6, 0.4, 0.2};
    const json& c = sweep_flags.config;
    auto axis = [&](const char* key) {
      const json& v = c.at(key);
      return v.is_array() ? ConfigValue<std::vector<double>>(sweep_flags, key)
                          : std::vector<double>{ConfigValue<double>(sweep_flags, key)};
    };
    if (c.contains("gamma_min")) grid.gamma_mins = axis("gamma_min");
    if (c.contains("sqrt_alpha")) grid.sqrt_alphas = axis("sqrt_alpha");
    if (c.contains("alpha")) {
      grid.sqrt_alphas.clear();
      grid.alphas = axis("alpha");
    }
    if (c.contains("cell_manifests")) {
      for (const auto& [k, v] : ConfigValue<std::map<std::string, std::string>>(sweep_flags, "cell_manifests")) {
        sweep_cells.push_back(k + "=" + v);
      }
    }
    if (Given(gamma_axis)) grid.gamma_mins = sweep_gammas;
    if (Given(sqrt_axis)) {
      grid.sqrt_alphas = sweep_sqrt_alphas;
      grid.alphas.clear();
    }
    if (Given(alpha_axis)) {
      grid.alphas = sweep_alphas;
      grid.sqrt_alphas.clear();
    }
    if (!sweep_manifest.empty()) grid.manifests[1.0] = sweep_manifest;
    for (const std::string& cell : sweep_cells) {
      const auto eq = cell.find('=');
      if (eq == std::string::npos) InputError("--cell-manifest expects GAMMA_MIN=PATH, got '" + cell + "'");
      double g = 0;
      try {
        std::size_t used = 0;
        g = std::stod(cell.substr(0, eq), &used);
        if (used != eq) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        InputError("--cell-manifest expects GAMMA_MIN=PATH, got '" + cell + "'");
      }
      grid.manifests[g] = cell.substr(eq + 1);
    }
    if (grid.manifests.empty()) InputError("sweep needs --manifest or --cell-manifest");
    const auto proposals = ReadProposals(sweep_proposals);
    SweepTable table = Sweep(grid, proposals, cfg, sweep_flags.workers);
    table.inputs["proposals"] = sweep_proposals;
    if (!sweep_out.empty()) WriteSweep(table, sweep_out);
    if (!sweep_table_out.empty() || sweep_out.empty()) Emit(sweep_table_out, RenderSweepText(table), out);
    return kExitOk;
  }

  if (rend->parsed()) {
    PipelineConfig defaults;
    defaults.weighting = !render_src.weights_path.empty() || !render_src.parses_path.empty();
    const PipelineConfig cfg = Resolve(render_flags, defaults);
    const HeatmapStack stack = ReadBundle(render_bundle);
    const Heatmap fused = FuseBundle(stack, render_src, cfg, Given(render_flags.weighting_opt));
    render::OverlayInputs in;
    in.heatmap = &fused;
    in.image_width = stack.image_width;
    in.image_height = stack.image_height;
    std::optional<render::GrayImage> base;
    if (!render_base.empty()) {
      base = render::DecodePgm(ReadFile(render_base));
      in.base = &*base;
    }
    if (!render_pred.empty()) in.prediction = ParseBoxFlag(render_pred, "--pred");
    if (!render_proposals.empty()) {
      const ProposalMap proposals = ReadProposals(render_proposals);
      in.prediction = RankProposals(fused, PickProposals(proposals, render_image_id, render_proposals).boxes)
                          .front()
                          .box;
    }
    if (!render_gt.empty()) in.ground_truth = ParseBoxFlag(render_gt, "--gt");
    WriteFile(render_out, render::EncodePpm(render::RenderOverlay(in)));
    return kExitOk;
  }
  return kExitInternalError;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return Dispatch(argc, argv, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"groundkit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace groundkit::cli
