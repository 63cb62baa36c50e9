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


#include <catch_amalgamated.hpp>

#include <random>

#include "meshpipe/apps.hpp"
#include "meshpipe/error.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/reference.hpp"
#include "meshpipe/simulator.hpp"
#include "oracle.hpp"

namespace mp = meshpipe;
using mp::DesignPoint;
using mp::MeshGeometry;
using mp::TileShape;

namespace {

DesignPoint design(int V, int p, std::optional<TileShape> tile = std::nullopt, int batch = 1) {
  return DesignPoint{V, p, tile, batch, 300e6};
}

}  // namespace

TEST_CASE("poisson p=1 holds two rows plus shift registers", "[simulator]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({64, 10});
  const auto sp = mp::sim::build_pipeline(pipe, design(8, 1), g);
  REQUIRE(sp.stages().size() == 1);
  REQUIRE(sp.buffers().size() == 1);
  const auto& b = sp.buffers().front();
  CHECK(b.depth == 2);
  CHECK(b.window_cells == 2 * 64);
  CHECK(b.lag_vectors == 8);
  CHECK(b.capacity_vectors == 2 * 8 + 1);
  CHECK(b.shift_register_cells == 8);
}

TEST_CASE("rtm unrolled three times chains twelve stage instances", "[simulator]") {
  const auto pipe = mp::apps::rtm_forward(mp::testing::random_star(1), 0.01f);
  const MeshGeometry g({16, 16, 16}, mp::apps::kRtmArity);
  const auto sp = mp::sim::build_pipeline(pipe, design(1, 3), g);
  CHECK(sp.stages().size() == 12);
  CHECK(sp.stages()[11].iteration == 2);
  CHECK(sp.stages()[11].stage == 3);
  CHECK(sp.alu_latency_estimate() == 12 * mp::sim::kStageLatencyEstimate);
}

TEST_CASE("jacobi window holds two planes per stage", "[simulator]") {
  const auto pipe = mp::apps::jacobi_3d(mp::testing::kDyadicJacobi);
  const MeshGeometry g({24, 20, 12});
  const auto sp = mp::sim::build_pipeline(pipe, design(8, 2), g);
  REQUIRE(sp.buffers().size() == 2);
  for (const auto& b : sp.buffers()) CHECK(b.window_cells == 2 * 24 * 20);
}

TEST_CASE("simulate matches reference and the cycle formula", "[simulator]") {
  SECTION("poisson 8x10, one iteration") {
    const auto pipe = mp::apps::poisson_2d();
    const MeshGeometry g({8, 10});
    const auto in = mp::testing::random_inputs(pipe, g, 3);
    const auto res = mp::sim::simulate(mp::sim::build_pipeline(pipe, design(8, 1), g), in, 1);
    CHECK(res.cycles == 11);
    CHECK(res.outputs.front() == mp::reference::run_reference(pipe, in, 1));
  }
  SECTION("jacobi 50^3, V=8, p=29") {
    const auto pipe = mp::apps::jacobi_3d(mp::testing::random_jacobi(5));
    const MeshGeometry g({50, 50, 50});
    const auto in = mp::testing::random_inputs(pipe, g, 4);
    const auto res = mp::sim::simulate(mp::sim::build_pipeline(pipe, design(8, 29), g), in, 29);
    CHECK(res.cycles == 27650);
    CHECK(res.outputs.front() == mp::reference::run_reference(pipe, in, 29));
  }
  SECTION("poisson 100x100, p=10 rounds iterations up") {
    const auto pipe = mp::apps::poisson_2d();
    const MeshGeometry g({100, 100});
    const auto in = mp::testing::random_inputs(pipe, g, 6);
    const auto res = mp::sim::simulate(mp::sim::build_pipeline(pipe, design(8, 10), g), in, 25);
    CHECK(res.effective_iterations == 30);
    CHECK(res.cycles == 3 * 13 * 110);
    CHECK(res.outputs.front() == mp::reference::run_reference(pipe, in, 30));
  }
}

TEST_CASE("cycle counts do not depend on the data", "[simulator]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({40, 30});
  const auto sp = mp::sim::build_pipeline(pipe, design(4, 3), g);
  const auto a = mp::sim::simulate(sp, mp::testing::random_inputs(pipe, g, 1), 6);
  const auto b = mp::sim::simulate(sp, mp::FieldSet{mp::FieldData::filled(g, 2.0f), {}}, 6);
  CHECK(a.cycles == b.cycles);
  CHECK(a.bytes_read == b.bytes_read);
  CHECK(a.bytes_written == b.bytes_written);
  CHECK(b.outputs.front() == mp::FieldData::filled(g, 2.0f));
}

TEST_CASE("external traffic does not grow with p", "[simulator]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({32, 24});
  const auto in = mp::testing::random_inputs(pipe, g, 9);
  const auto one = mp::sim::simulate(mp::sim::build_pipeline(pipe, design(4, 1), g), in, 1);
  const auto four = mp::sim::simulate(mp::sim::build_pipeline(pipe, design(4, 4), g), in, 4);
  CHECK(one.bytes_read == four.bytes_read);
  CHECK(one.bytes_written == four.bytes_written);
  CHECK(one.bytes_read == 32 * 24 * 4);
}

TEST_CASE("tiled runs equal untiled runs bitwise", "[simulator]") {
  SECTION("poisson 512x512, M=128, V=8, p=4") {
    const auto pipe = mp::apps::poisson_2d();
    const MeshGeometry g({512, 512});
    const auto in = mp::testing::random_inputs(pipe, g, 11);
    const auto sp = mp::sim::build_pipeline(pipe, design(8, 4), g);
    const auto plain = mp::sim::simulate(sp, in, 8);
    const auto tiled = mp::sim::simulate_tiled(sp, in, 8, TileShape{128, 0});
    CHECK(tiled.outputs.front() == plain.outputs.front());
    CHECK(tiled.tiles == 5);
  }
  SECTION("whole-mesh tile has no redundancy") {
    const auto pipe = mp::apps::poisson_2d();
    const MeshGeometry g({64, 20});
    const auto in = mp::testing::random_inputs(pipe, g, 12);
    const auto sp = mp::sim::build_pipeline(pipe, design(8, 2), g);
    const auto plain = mp::sim::simulate(sp, in, 4);
    const auto tiled = mp::sim::simulate_tiled(sp, in, 4, TileShape{64, 0});
    CHECK(tiled.outputs.front() == plain.outputs.front());
    CHECK(tiled.redundant_cells == 0);
    CHECK(tiled.cycles == plain.cycles);
  }
  SECTION("jacobi 96^3, M=N=32, p=3") {
    const auto pipe = mp::apps::jacobi_3d(mp::testing::random_jacobi(13));
    const MeshGeometry g({96, 96, 96});
    const auto in = mp::testing::random_inputs(pipe, g, 14);
    const auto sp = mp::sim::build_pipeline(pipe, design(8, 3, TileShape{32, 32}), g);
    const auto tiled = mp::sim::simulate_tiled(sp, in, 3, TileShape{32, 32});
    CHECK(tiled.outputs.front() == mp::reference::run_reference(pipe, in, 3));
    const double ratio =
        static_cast<double>(tiled.redundant_cells) / static_cast<double>(tiled.computed_cells);
    CHECK(ratio == Catch::Approx(1.0 - (26.0 / 32.0) * (26.0 / 32.0)));
    for (auto c : tiled.tile_pass_cycles) CHECK(c == 4 * 32 * (96 + 3));
  }
}

TEST_CASE("batched runs equal solo runs", "[simulator]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({200, 100});
  SECTION("three random meshes") {
    std::vector<mp::FieldSet> batch;
    for (int i = 0; i < 3; ++i) batch.push_back(mp::testing::random_inputs(pipe, g, 20 + i));
    const auto sp = mp::sim::build_pipeline(pipe, design(8, 5, std::nullopt, 3), g);
    const auto res = mp::sim::simulate_batched(sp, batch, 10);
    REQUIRE(res.outputs.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(res.outputs[static_cast<std::size_t>(i)] ==
            mp::reference::run_reference(pipe, batch[static_cast<std::size_t>(i)], 10));
    }
    CHECK(res.cycles == 2 * 25 * (3 * 100 + 5));
  }
  SECTION("one hundred meshes, p=60, one pass") {
    std::vector<mp::FieldSet> batch(100, mp::FieldSet{mp::FieldData::filled(g, 1.0f), {}});
    const auto sp = mp::sim::build_pipeline(pipe, design(8, 60, std::nullopt, 100), g);
    const auto res = mp::sim::simulate_batched(sp, batch, 60);
    CHECK(res.cycles == 251500);
  }
}

TEST_CASE("capacity and configuration errors", "[simulator]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({1000, 16});
  auto small = mp::ResourceProfile::u280_ddr4();
  small.onchip_mem_bytes = 4 * 2 * 1000 * 2;
  small.mem_util_cap = 1.0;
  const auto in = mp::testing::random_inputs(pipe, g, 1);
  CHECK_NOTHROW(mp::sim::simulate(mp::sim::build_pipeline(pipe, design(8, 2), g, small), in, 2));
  CHECK_THROWS_AS(mp::sim::simulate(mp::sim::build_pipeline(pipe, design(8, 3), g, small), in, 3),
                  mp::CapacityError);
  CHECK_THROWS_AS(mp::sim::build_pipeline(pipe, design(8, 2, TileShape{4, 0}), g),
                  mp::ConfigurationError);
  CHECK_THROWS_AS(mp::sim::build_pipeline(pipe, design(8, 2, TileShape{36, 0}), g),
                  mp::ConfigurationError);
  CHECK_THROWS_AS(mp::sim::build_pipeline(pipe, design(8, 2, TileShape{64, 0}, 4), g),
                  mp::ConfigurationError);
  CHECK_THROWS_AS(mp::sim::build_pipeline(pipe, design(8, 1), MeshGeometry({8, 8, 8})),
                  mp::GeometryError);
}
