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

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <vector>

#include "groundkit/depparse.h"
#include "groundkit/heatmap.h"

namespace groundkit {
namespace {

Heatmap RandomMap(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = unit(rng);
  return Heatmap(w, h, std::move(v));
}

HeatmapStack RandomStack(int tokens, int side) {
  std::mt19937_64 rng(1);
  HeatmapStack s;
  s.image_width = side;
  s.image_height = side;
  for (int t = 0; t < tokens; ++t) {
    s.maps.push_back(RandomMap(rng, side, side));
    s.tokens.push_back("t" + std::to_string(t));
    s.special.push_back(false);
  }
  return s;
}

std::vector<BoundingBox> RandomBoxes(int n, int side) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coord(0, side);
  std::vector<BoundingBox> boxes;
  for (int i = 0; i < n; ++i) {
    double a = coord(rng), b = coord(rng), c = coord(rng), d = coord(rng);
    boxes.push_back({std::min(a, b), std::min(c, d), std::max(a, b) + 1, std::max(c, d) + 1});
  }
  return boxes;
}

void BM_BuildSat(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Heatmap h = RandomMap(rng, state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(SummedAreaTable(h));
  state.SetItemsProcessed(state.iterations() * h.size());
}
BENCHMARK(BM_BuildSat)->Arg(24)->Arg(64)->Arg(256);

void BM_BoxMean(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const Heatmap h = RandomMap(rng, 64, 64);
  const SummedAreaTable sat(h);
  std::vector<PixelRect> rects;
  for (const BoundingBox& b : RandomBoxes(1024, 60)) rects.push_back(h.ToGrid(b));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sat.BoxMean(rects[i++ & 1023]));
}
BENCHMARK(BM_BoxMean);

void BM_RankProposals(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const Heatmap h = RandomMap(rng, 24, 24);
  const auto boxes = RandomBoxes(state.range(0), 23);
  for (auto _ : state) benchmark::DoNotOptimize(RankProposals(h, boxes));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankProposals)->Arg(10)->Arg(100)->Arg(1000);

void BM_CombineWeighted(benchmark::State& state) {
  const HeatmapStack s = RandomStack(state.range(0), 24);
  std::vector<double> w(state.range(0), 0.16);
  w[0] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(CombineWeighted(s, w));
}
BENCHMARK(BM_CombineWeighted)->Arg(4)->Arg(12)->Arg(32);

void BM_ParseConllu(benchmark::State& state) {
  std::ostringstream text;
  for (int s = 0; s < 100; ++s) {
    text << "# sent " << s << "\n";
    for (int i = 1; i <= 8; ++i) {
      text << i << "\tw" << i << "\t_\t_\t_\t_\t" << (i == 1 ? 0 : i - 1) << "\tdep\t_\t_\n";
    }
    text << "\n";
  }
  const std::string doc = text.str();
  for (auto _ : state) benchmark::DoNotOptimize(ParseConllu(doc));
  state.SetBytesProcessed(state.iterations() * doc.size());
}
BENCHMARK(BM_ParseConllu);

}  // namespace
}  // namespace groundkit

BENCHMARK_MAIN();
