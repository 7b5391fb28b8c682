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

#include "testing/fixtures.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "groundkit/bundleio.h"

namespace groundkit::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("groundkit_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string TestDataPath(const std::string& name) {
  return (fs::path(GROUNDKIT_TESTDATA_DIR) / name).string();
}

HeatmapStack RandomStack(std::mt19937_64& rng, int tokens, int width, int height) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  HeatmapStack s;
  for (int t = 0; t < tokens; ++t) {
    std::vector<double> v(static_cast<std::size_t>(width) * height);
    for (double& x : v) x = unit(rng);
    s.maps.emplace_back(width, height, std::move(v));
    s.tokens.push_back("tok" + std::to_string(t));
    s.special.push_back(false);
  }
  s.image_width = width;
  s.image_height = height;
  return s;
}

double NaiveRectMean(const Heatmap& h, const PixelRect& r) {
  double sum = 0;
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) sum += h.at(x, y);
  }
  return sum / static_cast<double>(r.w * r.h);
}

std::vector<double> NaiveWeightedFusion(const HeatmapStack& stack, const std::vector<double>& w) {
  std::vector<double> out(stack.maps.front().size(), 0.0);
  std::vector<std::size_t> included;
  for (std::size_t t = 0; t < stack.maps.size(); ++t) {
    if (!stack.special[t]) included.push_back(t);
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    double cell = 0;
    for (std::size_t k = 0; k < included.size(); ++k) {
      cell += w[k] * stack.maps[included[k]].values()[c];
    }
    out[c] = cell / static_cast<double>(included.size());
  }
  return out;
}

std::size_t NaiveTop1(const Heatmap& h, const std::vector<BoundingBox>& proposals) {
  std::size_t best = 0;
  double best_score = -1;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    const BoundingBox& b = proposals[i];
    // Covering cells, computed directly from the cell size.
    const int x0 = std::max(0, static_cast<int>(std::floor(b.x1 / h.cell_width())));
    const int y0 = std::max(0, static_cast<int>(std::floor(b.y1 / h.cell_height())));
    int x1 = std::min(h.width(), static_cast<int>(std::ceil(b.x2 / h.cell_width())));
    int y1 = std::min(h.height(), static_cast<int>(std::ceil(b.y2 / h.cell_height())));
    x1 = std::max(x1, x0 + 1);
    y1 = std::max(y1, y0 + 1);
    double sum = 0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) sum += h.at(x, y);
    }
    const double score = sum / ((x1 - x0) * (y1 - y0));
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::string ConlluBlock(const std::vector<std::tuple<std::string, int, std::string>>& rows) {
  std::ostringstream out;
  int id = 1;
  for (const auto& [form, head, rel] : rows) {
    out << id++ << '\t' << form << "\t_\t_\t_\t_\t" << head << '\t' << rel << "\t_\t_\n";
  }
  out << '\n';
  return out.str();
}

namespace {

// Adds a rectangular block of `value` (in cells) to a map.
void AddBlock(std::vector<double>& v, int width, int x0, int y0, int x1, int y1, double value) {
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) v[static_cast<std::size_t>(y) * width + x] += value;
  }
}

constexpr const char* kVocabulary[] = {
    "man",    "woman",  "girl",   "boy",      "dog",   "cat",    "horse", "umbrella",
    "pink",   "blue",   "red",    "green",    "left",  "right",  "under", "with",
    "holding", "near",  "bench",  "giraffe",  "zebra", "table",  "chair", "bottle",
    "white",  "black",  "tall",   "smallest", "front", "behind", "coat",  "brown",
};

std::string WriteSampleFiles(const fs::path& dir, const std::string& id, const HeatmapStack& stack,
                             const std::string& conllu) {
  WriteBundle(stack, (dir / (id + ".hmb")).string());
  WriteFile((dir / (id + ".conllu")).string(), conllu);
  return id;
}

SyntheticCorpus Finish(const fs::path& dir, std::vector<SampleRecord> samples, ProposalMap proposals) {
  SyntheticCorpus c;
  c.manifest_path = (dir / "manifest.jsonl").string();
  c.proposals_path = (dir / "proposals.jsonl").string();
  for (SampleRecord& s : samples) s.base_dir = dir.string();
  WriteManifest(samples, c.manifest_path);
  WriteProposals(proposals, c.proposals_path);
  c.samples = std::move(samples);
  c.proposals = std::move(proposals);
  return c;
}

}  // namespace

MainVsSubFixture MakeMainVsSub() {
  // 64x64 image, 16x16 grid of 4-pixel cells. Main object occupies cells
  // [2,6)x[4,12), sub-object cells [10,14)x[4,12).
  constexpr int kGrid = 16;
  auto map = [&](double main, double sub, double floor) {
    std::vector<double> v(kGrid * kGrid, floor);
    AddBlock(v, kGrid, 2, 4, 6, 12, main);
    AddBlock(v, kGrid, 10, 4, 14, 12, sub);
    return Heatmap(kGrid, kGrid, std::move(v), 4.0, 4.0);
  };
  MainVsSubFixture f;
  f.stack.image_width = 64;
  f.stack.image_height = 64;
  f.stack.query = "women under pink umbrella";
  f.stack.tokens = {"[CLS]", "women", "under", "pink", "umbrella", "[SEP]"};
  f.stack.special = {true, false, false, false, false, true};
  f.stack.maps = {
      map(0.0, 0.0, 0.01),  // [CLS]
      map(0.5, 0.0, 0.0),   // women
      map(0.05, 0.05, 0.02),  // under
      map(0.0, 0.6, 0.0),   // pink
      map(0.0, 1.0, 0.0),   // umbrella
      map(0.0, 0.0, 0.01),  // [SEP]
  };
  f.parse = ParseConllu(ConlluBlock({{"women", 0, "ROOT"},
                                     {"under", 1, "prep"},
                                     {"pink", 4, "amod"},
                                     {"umbrella", 2, "pobj"}}));
  f.proposals = {{8, 16, 24, 48}, {40, 16, 56, 48}, {0, 0, 64, 8}};
  f.gt = f.proposals[0];
  return f;
}

SyntheticCorpus WriteMainVsSubCorpus(const fs::path& dir) {
  const MainVsSubFixture f = MakeMainVsSub();
  SampleRecord s;
  s.sample_id = "umbrella-0";
  s.image_id = "img-umbrella";
  s.image_width = 64;
  s.image_height = 64;
  s.query = f.stack.query;
  s.gt_box = f.gt;
  s.bundle_path = "umbrella-0.hmb";
  s.parse_path = "umbrella-0.conllu";
  WriteSampleFiles(dir, "umbrella-0", f.stack,
                   ConlluBlock({{"women", 0, "ROOT"}, {"under", 1, "prep"}, {"pink", 4, "amod"},
                                {"umbrella", 2, "pobj"}}));
  ProposalMap proposals;
  proposals["img-umbrella"] = ProposalSet{"img-umbrella", f.proposals, {}};
  return Finish(dir, {s}, std::move(proposals));
}

SyntheticCorpus WriteRandomCorpus(const fs::path& dir, int count, std::uint64_t seed,
                                  double value_scale) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  std::vector<SampleRecord> samples;
  ProposalMap proposals;
  for (int n = 0; n < count; ++n) {
    const std::string id = "s" + std::to_string(n);
    const int grid_w = uniform_int(6, 16), grid_h = uniform_int(6, 16);
    const int image_w = uniform_int(48, 160), image_h = uniform_int(48, 160);

    // Query words and their subword pieces.
    const int word_count = uniform_int(1, 7);
    std::vector<std::string> words, tokens{"[CLS]"};
    for (int w = 0; w < word_count; ++w) {
      std::string word = kVocabulary[uniform_int(0, std::size(kVocabulary) - 1)];
      words.push_back(word);
      std::size_t at = 0;
      const int pieces = std::min<int>(uniform_int(1, 3), static_cast<int>(word.size()));
      for (int p = 0; p < pieces; ++p) {
        const std::size_t remaining = word.size() - at;
        const std::size_t len =
            p == pieces - 1 ? remaining
                            : static_cast<std::size_t>(uniform_int(1, static_cast<int>(remaining) - (pieces - p - 1)));
        tokens.push_back((p == 0 ? "" : "##") + word.substr(at, len));
        at += len;
      }
    }
    tokens.push_back("[SEP]");

    // Random tree: attach each word to an already attached one.
    std::vector<int> order(word_count);
    for (int i = 0; i < word_count; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> head(word_count, 0);
    for (int k = 1; k < word_count; ++k) head[order[k]] = order[uniform_int(0, k - 1)] + 1;
    std::vector<std::tuple<std::string, int, std::string>> rows;
    for (int w = 0; w < word_count; ++w) rows.emplace_back(words[w], head[w], head[w] == 0 ? "ROOT" : "dep");

    HeatmapStack stack;
    stack.image_width = image_w;
    stack.image_height = image_h;
    stack.query = "";
    for (std::size_t w = 0; w < words.size(); ++w) stack.query += (w ? " " : "") + words[w];
    stack.tokens = tokens;
    for (const std::string& t : tokens) stack.special.push_back(t == "[CLS]" || t == "[SEP]");
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      std::vector<double> v(static_cast<std::size_t>(grid_w) * grid_h);
      const double cx = uniform(0, grid_w), cy = uniform(0, grid_h);
      const double amp = uniform(0.2, 1.0), sigma = uniform(1.0, 3.0);
      for (int y = 0; y < grid_h; ++y) {
        for (int x = 0; x < grid_w; ++x) {
          const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
          const double value = uniform(0.0, 0.05) + amp * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
          v[static_cast<std::size_t>(y) * grid_w + x] = value * value_scale;
        }
      }
      stack.maps.emplace_back(grid_w, grid_h, std::move(v), double(image_w) / grid_w,
                              double(image_h) / grid_h);
    }

    ProposalSet set;
    set.image_id = "img-" + id;
    const int proposal_count = uniform_int(4, 9);
    for (int p = 0; p < proposal_count; ++p) {
      const double w = uniform(8.0, image_w * 0.6), h = uniform(8.0, image_h * 0.6);
      const double x = uniform(0.0, image_w - w), y = uniform(0.0, image_h - h);
      set.boxes.push_back({x, y, x + w, y + h});
      set.confidences.push_back(uniform(0.0, 1.0));
    }

    SampleRecord s;
    s.sample_id = id;
    s.image_id = set.image_id;
    s.image_width = image_w;
    s.image_height = image_h;
    s.query = stack.query;
    const BoundingBox target = set.boxes[uniform_int(0, proposal_count - 1)];
    const double jx = uniform(-3, 3), jy = uniform(-3, 3);
    s.gt_box = {std::clamp(target.x1 + jx, 0.0, double(image_w)), std::clamp(target.y1 + jy, 0.0, double(image_h)),
                std::clamp(target.x2 + jx, 0.0, double(image_w)), std::clamp(target.y2 + jy, 0.0, double(image_h))};
    s.bundle_path = id + ".hmb";
    s.parse_path = id + ".conllu";
    WriteSampleFiles(dir, id, stack, ConlluBlock(rows));
    proposals[set.image_id] = std::move(set);
    samples.push_back(std::move(s));
  }
  return Finish(dir, std::move(samples), std::move(proposals));
}

SyntheticCorpus WriteIouCorpus(const fs::path& dir, const std::vector<double>& ious) {
  std::vector<SampleRecord> samples;
  ProposalMap proposals;
  for (std::size_t i = 0; i < ious.size(); ++i) {
    const std::string id = "iou" + std::to_string(i);
    HeatmapStack stack;
    stack.image_width = 10;
    stack.image_height = 10;
    stack.query = "thing";
    stack.tokens = {"thing"};
    stack.special = {false};
    stack.maps = {Heatmap::Filled(10, 10, 0.5)};
    WriteSampleFiles(dir, id, stack, ConlluBlock({{"thing", 0, "ROOT"}}));

    SampleRecord s;
    s.sample_id = id;
    s.image_id = "img-" + id;
    s.image_width = 10;
    s.image_height = 10;
    s.query = "thing";
    s.gt_box = {0, 0, 10, 10};
    s.bundle_path = id + ".hmb";
    s.parse_path = id + ".conllu";
    // IoU of (0,0,w,10) with the full 10x10 box is w/10.
    proposals[s.image_id] = ProposalSet{s.image_id, {{0, 0, 10 * ious[i], 10}}, {}};
    samples.push_back(std::move(s));
  }
  return Finish(dir, std::move(samples), std::move(proposals));
}

SyntheticCorpus ScaleCorpus(const SyntheticCorpus& src, const fs::path& dir, double c) {
  std::vector<SampleRecord> samples = src.samples;
  for (SampleRecord& s : samples) {
    HeatmapStack stack = ReadBundle(s.ResolvedBundlePath());
    for (Heatmap& m : stack.maps) m = m.Scaled(c);
    WriteBundle(stack, (dir / s.bundle_path).string());
    WriteFile((dir / s.parse_path).string(), ReadFile(s.ResolvedParsePath()));
  }
  return Finish(dir, std::move(samples), src.proposals);
}

}  // namespace groundkit::testing
