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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "groundkit/bundleio.h"
#include "groundkit/cropper.h"
#include "groundkit/depparse.h"
#include "groundkit/error.h"
#include "groundkit/eval.h"
#include "groundkit/geometry.h"
#include "groundkit/heatmap.h"
#include "testing/fixtures.h"

namespace groundkit {
namespace {

using testing::TempDir;

// A check that failed records why; the first failure ends the criterion.
struct Failure {
  std::string what;
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<std::string()> body;  // returns a short detail string
  double time_limit_s = 0;            // 0: no limit
};

int CliRun(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  if (code != 0) throw Failure{"groundkit " + args.front() + " exited " + std::to_string(code) + ": " + err.str()};
  return code;
}

std::string Fixed(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string UniformEqualsAllOnes() {
  std::mt19937_64 rng(1001);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const int tokens = std::uniform_int_distribution<int>(1, 12)(rng);
    const int w = std::uniform_int_distribution<int>(1, 24)(rng);
    const int h = std::uniform_int_distribution<int>(1, 24)(rng);
    const HeatmapStack s = testing::RandomStack(rng, tokens, w, h);
    const std::vector<double> ones(tokens, 1.0);
    const Heatmap u = CombineUniform(s), weighted = CombineWeighted(s, ones);
    for (std::size_t c = 0; c < u.size(); ++c) {
      worst = std::max(worst, std::abs(u.values()[c] - weighted.values()[c]));
    }
  }
  Require(worst <= 1e-12, "max cell difference " + Fixed(worst));
  return "100 stacks, max |diff| = " + Fixed(worst);
}

std::string SummedAreaOracle() {
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<int> coord(0, 63);
  double worst = 0;
  for (int map = 0; map < 10; ++map) {
    const HeatmapStack s = testing::RandomStack(rng, 1, 64, 64);
    const Heatmap& h = s.maps[0];
    const SummedAreaTable sat(h);
    for (int i = 0; i < 100; ++i) {
      int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      const PixelRect r{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      worst = std::max(worst, std::abs(sat.BoxMean(r) - testing::NaiveRectMean(h, r)));
    }
  }
  Require(worst <= 1e-9, "max error " + Fixed(worst));
  return "1000 rects, max |err| = " + Fixed(worst);
}

std::string InterpolationEndpointsAndNesting() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox r0{0, 0, 1 + 999 * unit(rng), 1 + 999 * unit(rng)};
    const double x1 = r0.x2 * unit(rng), y1 = r0.y2 * unit(rng);
    const BoundingBox r1{x1, y1, x1 + (r0.x2 - x1) * unit(rng), y1 + (r0.y2 - y1) * unit(rng)};
    Require(InterpolateBox(r0, r1, 1.0) == r0, "gamma = 1 is not the whole box");
    Require(InterpolateBox(r0, r1, 0.0) == r1, "gamma = 0 is not the detected box");
    double ga = unit(rng), gb = unit(rng);
    if (ga < gb) std::swap(ga, gb);
    Require(InterpolateBox(r0, r1, ga).contains(InterpolateBox(r0, r1, gb)), "nesting violated");
  }
  return "500 cases, endpoints exact, nested";
}

std::string StrictThreshold() {
  TempDir dir("ac4");
  const auto c = testing::WriteIouCorpus(dir.path(), {0.9, 0.51, 0.5, 0.1});
  const EvaluationReport r = Evaluate(c.samples, c.proposals, PipelineConfig{});
  Require(r.accuracy == 0.5, "accuracy " + Fixed(r.accuracy));
  Require(r.samples[2].iou == 0.5 && !r.samples[2].correct, "IoU 0.5 sample counted correct");
  return "accuracy = " + Fixed(r.accuracy);
}

Heatmap AsHeatmap(const Heatmap& like, std::vector<double> values) {
  return Heatmap(like.width(), like.height(), std::move(values), like.cell_width(), like.cell_height());
}

std::string MainVsSub() {
  const auto f = testing::MakeMainVsSub();
  const ProposalSet set{"img", f.proposals, {}};
  const double sqrt_alpha = 0.4;
  PipelineConfig uniform_cfg;
  uniform_cfg.weighting = false;
  PipelineConfig weighted_cfg;
  weighted_cfg.alpha = sqrt_alpha * sqrt_alpha;
  const auto uniform = RankForSample(f.stack, f.parse, set, uniform_cfg);
  const auto weighted = RankForSample(f.stack, f.parse, set, weighted_cfg);
  Require(uniform.front().index == 1, "uniform picked proposal " + std::to_string(uniform.front().index));
  Require(weighted.front().index == 0, "weighted picked proposal " + std::to_string(weighted.front().index));

  // Independent check: per-cell fusion and direct per-proposal scoring.
  const Heatmap& like = f.stack.maps[0];
  const WeightVector w = QueryWeights(f.stack, f.parse, weighted_cfg.alpha, false);
  const double a = weighted_cfg.alpha;
  Require(w.weights == std::vector<double>({1, a, a, a}), "unexpected token weights");
  const std::vector<double> ones(w.weights.size(), 1.0);
  const std::size_t naive_uniform =
      testing::NaiveTop1(AsHeatmap(like, testing::NaiveWeightedFusion(f.stack, ones)), f.proposals);
  const std::size_t naive_weighted =
      testing::NaiveTop1(AsHeatmap(like, testing::NaiveWeightedFusion(f.stack, w.weights)), f.proposals);
  Require(naive_uniform == 1 && naive_weighted == 0, "naive scoring disagrees");
  return "uniform -> sub-object, weighted (alpha = 0.16) -> main object";
}

std::string Determinism() {
  TempDir dir("ac6");
  const auto c = testing::WriteRandomCorpus(dir.path(), 40, 606);
  for (const char* workers : {"1", "8"}) {
    const std::string w = workers;
    CliRun({"eval", "--manifest", c.manifest_path, "--proposals", c.proposals_path, "--seed", "7",
            "--workers", w, "--out", dir.file("report" + w + ".json")});
    CliRun({"crop-plan", "--manifest", c.manifest_path, "--proposals", c.proposals_path, "--seed", "7",
            "--gamma-min", "0.2", "--workers", w, "--out", dir.file("plans" + w + ".jsonl")});
  }
  Require(ReadFile(dir.file("report1.json")) == ReadFile(dir.file("report8.json")), "eval reports differ");
  Require(ReadFile(dir.file("plans1.jsonl")) == ReadFile(dir.file("plans8.jsonl")), "crop plans differ");
  return "eval and crop-plan byte-identical at 1 and 8 workers";
}

std::string ScalingInvariance() {
  TempDir base("ac7");
  const auto c = testing::WriteRandomCorpus(base.path(), 50, 707);
  for (double scale : {1e-3, 0.37, 3.7, 1e3}) {
    TempDir scaled_dir("ac7s");
    const auto scaled = testing::ScaleCorpus(c, scaled_dir.path(), scale);
    for (bool weighting : {false, true}) {
      PipelineConfig cfg;
      cfg.weighting = weighting;
      const auto a = Evaluate(c.samples, c.proposals, cfg);
      const auto b = Evaluate(scaled.samples, scaled.proposals, cfg);
      for (std::size_t i = 0; i < a.samples.size(); ++i) {
        Require(a.samples[i].chosen_index == b.samples[i].chosen_index,
                "sample " + a.samples[i].sample_id + " changed at c = " + Fixed(scale));
      }
    }
  }
  return "50 samples, c in {0.001, 0.37, 3.7, 1000}, uniform and weighted";
}

std::string GammaSampling() {
  double lo = 1, hi = 0, sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double g = SampleGamma(0.5, 808, "draw-" + std::to_string(i));
    lo = std::min(lo, g);
    hi = std::max(hi, g);
    sum += g;
  }
  const double mean = sum / n;
  Require(lo >= 0.5 && hi <= 1.0, "draw outside [0.5, 1]");
  Require(std::abs(mean - 0.75) <= 0.01, "mean " + Fixed(mean));
  for (int i = 0; i < 1000; ++i) {
    Require(SampleGamma(1.0, i, "s" + std::to_string(i)) == 1.0, "gamma_min = 1 drew gamma != 1");
  }
  return "min " + Fixed(lo) + ", max " + Fixed(hi) + ", mean " + Fixed(mean);
}

std::string ConlluRobustness() {
  const auto sentences = ReadConlluFile(testing::TestDataPath("refexp_corpus.conllu"));
  Require(sentences.size() == 20, "corpus has " + std::to_string(sentences.size()) + " sentences");
  for (const ParsedSentence& s : sentences) {
    Require(std::count_if(s.tokens.begin(), s.tokens.end(), [](const DepToken& t) { return t.head == 0; }) == 1,
            "sentence without exactly one root");
  }
  struct Mutation {
    const char* name;
    std::string text;
    ErrorCode code;
    std::size_t line;
  };
  const std::string row1 = "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n";
  const std::vector<Mutation> mutations{
      {"no root", "1\ta\t_\t_\t_\t_\t2\tx\t_\t_\n2\tb\t_\t_\t_\t_\t1\tx\t_\t_\n", ErrorCode::kNoRoot, 1},
      {"double root", row1 + "2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n", ErrorCode::kMultipleRoots, 2},
      {"cycle", row1 + "2\tb\t_\t_\t_\t_\t3\tx\t_\t_\n3\tc\t_\t_\t_\t_\t2\tx\t_\t_\n", ErrorCode::kCycle, 2},
      {"bad column count", row1 + "2\tb\t_\t_\t_\t_\t1\tx\n", ErrorCode::kBadColumnCount, 2},
  };
  for (const Mutation& m : mutations) {
    try {
      ParseConllu(m.text);
      throw Failure{std::string(m.name) + " accepted"};
    } catch (const Error& e) {
      Require(e.code() == m.code, std::string(m.name) + " raised " + std::string(ToString(e.code())));
      Require(e.line().has_value() && *e.line() == m.line,
              std::string(m.name) + " reported line " + std::to_string(e.line().value_or(0)));
    }
  }
  return "20 sentences, 4 mutations raise their errors with line numbers";
}

std::string FormatRoundTrips() {
  TempDir dir("ac10");
  std::mt19937_64 rng(1010);
  for (int i = 0; i < 50; ++i) {
    const int tokens = std::uniform_int_distribution<int>(1, 12)(rng);
    const int w = std::uniform_int_distribution<int>(1, 24)(rng);
    const int h = std::uniform_int_distribution<int>(1, 24)(rng);
    HeatmapStack s = testing::RandomStack(rng, tokens, w, h);
    s.query = "query " + std::to_string(i);
    const std::string path = dir.file("b" + std::to_string(i) + ".hmb");
    WriteBundle(s, path);
    const std::string bytes = ReadFile(path);
    WriteBundle(ReadBundle(path), path + ".again");
    Require(ReadFile(path + ".again") == bytes, "bundle " + std::to_string(i) + " not byte-identical");
  }
  const std::string good = ReadFile(dir.file("b0.hmb"));
  auto code_of = [](const std::string& bytes) {
    try {
      DecodeBundle(bytes);
    } catch (const Error& e) {
      return e.code();
    }
    throw Failure{"corrupt bundle accepted"};
  };
  std::string bad_magic = good;
  bad_magic.replace(0, 4, "XXXX");
  Require(code_of(bad_magic) == ErrorCode::kBadMagic, "bad magic not detected");
  Require(code_of(good.substr(0, good.size() - 4)) == ErrorCode::kTruncated, "truncation not detected");
  Require(code_of(good.substr(0, 12)) == ErrorCode::kTruncated, "short header not detected");
  return "50 bundles byte-identical, bad magic and truncation rejected";
}

std::string SweepDriver() {
  TempDir dir("ac11");
  const auto c = testing::WriteRandomCorpus(dir.path(), 40, 1111);
  for (const char* run : {"a", "b"}) {
    const std::string r = run;
    CliRun({"sweep", "--manifest", c.manifest_path, "--proposals", c.proposals_path, "--out",
            dir.file("sweep_" + r + ".json"), "--table-out", dir.file("sweep_" + r + ".txt")});
  }
  Require(ReadFile(dir.file("sweep_a.json")) == ReadFile(dir.file("sweep_b.json")), "sweep JSON differs on rerun");
  Require(ReadFile(dir.file("sweep_a.txt")) == ReadFile(dir.file("sweep_b.txt")), "sweep table differs on rerun");
  const auto j = nlohmann::json::parse(ReadFile(dir.file("sweep_a.json")));
  Require(j.contains("config") && j["config"].contains("alpha") && j["config"].contains("seed"),
          "config echo missing");
  const std::vector<double> axis{1.0, 0.8, 0.6, 0.4, 0.2};
  Require(j.at("sqrt_alpha").get<std::vector<double>>() == axis, "sqrt_alpha axis differs");
  Require(j.at("cells").size() == axis.size(), "table has " + std::to_string(j.at("cells").size()) + " cells");
  std::string accuracies;
  for (const auto& cell : j.at("cells")) {
    Require(cell.at("status") == "ok", "cell errored: " + cell.value("error", std::string()));
    accuracies += (accuracies.empty() ? "" : " ") + Fixed(cell.at("accuracy").get<double>(), 3);
  }
  return "5 cells, rerun-identical, accuracies " + accuracies;
}

}  // namespace
}  // namespace groundkit

int main() {
  using namespace groundkit;
  const std::vector<Criterion> criteria{
      {"AC1", "all-ones weighting equals uniform fusion", UniformEqualsAllOnes, 1.0},
      {"AC2", "summed-area box mean matches naive mean", SummedAreaOracle, 1.0},
      {"AC3", "crop interpolation endpoints and nesting", InterpolationEndpointsAndNesting, 1.0},
      {"AC4", "IoU threshold is strict", StrictThreshold},
      {"AC5", "root weighting moves the choice to the main object", MainVsSub},
      {"AC6", "eval and crop-plan are deterministic across workers", Determinism},
      {"AC7", "top-1 choices invariant to heatmap scaling", ScalingInvariance},
      {"AC8", "crop weight sampling", GammaSampling},
      {"AC9", "CoNLL-U roots and error reporting", ConlluRobustness},
      {"AC10", "HMB1 round trips and corruption errors", FormatRoundTrips},
      {"AC11", "sqrt-alpha sweep", SweepDriver},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.time_limit_s > 0 && seconds >= c.time_limit_s) {
      ok = false;
      detail += "; took " + std::to_string(seconds) + " s";
    }
    failed += ok ? 0 : 1;
    std::printf("[%s] %-5s %s: %s (%.3f s)\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                detail.c_str(), seconds);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
