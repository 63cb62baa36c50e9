// Copyright 2026 The meshpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>

#include "meshpipe/apps.hpp"
#include "meshpipe/explore.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/reference.hpp"
#include "meshpipe/simulator.hpp"

namespace {

using namespace meshpipe;

FieldSet make_inputs(const PipelineSpec& pipe, const MeshGeometry& g) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  auto field = [&](const MeshGeometry& geo) {
    std::vector<float> v(static_cast<std::size_t>(geo.value_count()));
    for (float& x : v) x = dist(gen);
    return FieldData(geo, std::move(v));
  };
  FieldSet set{field(g), {}};
  for (int f = 0; f < pipe.pointwise_count(); ++f) set.pointwise.push_back(field(g.with_arity(1)));
  return set;
}

void BM_Predict(benchmark::State& state) {
  const auto pipe = apps::poisson_2d();
  const MeshGeometry g({200, 100}, 1, 4);
  const auto dev = ResourceProfile::u280_ddr4();
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::predict(apps::poisson_design(), pipe, g, 60000, dev));
  }
}
BENCHMARK(BM_Predict);

void BM_ExplorePoisson(benchmark::State& state) {
  const auto pipe = apps::poisson_2d();
  const MeshGeometry g({200, 100}, 1, 4);
  const auto dev = ResourceProfile::u280_ddr4();
  explore::Constraints c;
  c.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(explore::enumerate_designs(dev, pipe, g, c));
}
BENCHMARK(BM_ExplorePoisson)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SimulatePoisson(benchmark::State& state) {
  const auto pipe = apps::poisson_2d();
  const auto side = state.range(0);
  const MeshGeometry g({side, side}, 1, 4);
  DesignPoint d;
  d.V = 8;
  d.p = 4;
  const auto sp = sim::build_pipeline(pipe, d, g);
  const auto in = make_inputs(pipe, g);
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate(sp, in, 4));
  state.SetItemsProcessed(state.iterations() * side * side * 4);
}
BENCHMARK(BM_SimulatePoisson)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ReferencePoisson(benchmark::State& state) {
  const auto pipe = apps::poisson_2d();
  const auto side = state.range(0);
  const MeshGeometry g({side, side}, 1, 4);
  const auto in = make_inputs(pipe, g);
  for (auto _ : state) benchmark::DoNotOptimize(reference::run_reference(pipe, in, 4));
  state.SetItemsProcessed(state.iterations() * side * side * 4);
}
BENCHMARK(BM_ReferencePoisson)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulateJacobiTiled(benchmark::State& state) {
  const auto pipe = apps::jacobi_3d({0.125f, 0.125f, 0.125f, 0.25f, 0.125f, 0.125f, 0.125f});
  const MeshGeometry g({48, 48, 24}, 1, 4);
  DesignPoint d;
  d.V = 8;
  d.p = 2;
  d.tile = TileShape{24, 24};
  const auto sp = sim::build_pipeline(pipe, d, g);
  const auto in = make_inputs(pipe, g);
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_tiled(sp, in, 2, *d.tile));
}
BENCHMARK(BM_SimulateJacobiTiled)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
