// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ellipsoid/representation.hpp"
#include "ellipsoid/spatial_index.hpp"
#include "ellipsoid/synthetic.hpp"

namespace {

using namespace ellipsoid;

void BM_Hierarchical(benchmark::State& state) {
  const PointCloud cloud = synthetic_object(42, 2048);
  RepresentationConfig config;
  config.partitions = {static_cast<int>(state.range(0))};
  config.resolution = static_cast<int>(state.range(1));
  config.threads = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(represent_hierarchical(cloud.points, config));
}
BENCHMARK(BM_Hierarchical)
    ->Args({36, 32, 1})
    ->Args({16, 16, 1})
    ->Args({36, 64, 1})
    ->Args({36, 32, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Single(benchmark::State& state) {
  const PointCloud cloud = synthetic_object(42, 2048);
  std::vector<std::uint32_t> idx(cloud.size());
  for (std::uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(represent_single(cloud.points, idx, m, ChannelLayout::local_only(), AnchorMode::centered));
}
BENCHMARK(BM_Single)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NearestQuery(benchmark::State& state) {
  const PointCloud cloud = synthetic_object(7, static_cast<std::size_t>(state.range(0)));
  const NNIndex index(cloud.points);
  std::size_t i = 0;
  for (auto _ : state) {
    const Vec3 q = cloud.points[i++ % cloud.size()] * 1.01;
    benchmark::DoNotOptimize(index.nearest(q));
  }
}
BENCHMARK(BM_NearestQuery)->Arg(64)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
