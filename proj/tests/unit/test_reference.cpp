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

#include <cmath>

#include "meshpipe/apps.hpp"
#include "meshpipe/error.hpp"
#include "meshpipe/reference.hpp"
#include "oracle.hpp"

namespace mp = meshpipe;
using mp::FieldData;
using mp::FieldSet;
using mp::MeshGeometry;
using mp::reference::run_reference;

TEST_CASE("constant fields are fixed points of poisson", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({17, 9});
  for (float c : {0.0f, 1.5f, -3.25f, 1024.0f}) {
    const FieldData in = FieldData::filled(g, c);
    CHECK(run_reference(pipe, FieldSet{in, {}}, 7) == in);
  }
}

TEST_CASE("zero iterations return the input", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({12, 12});
  const auto in = mp::testing::random_inputs(pipe, g, 1);
  CHECK(run_reference(pipe, in, 0) == in.primary);
  CHECK_THROWS_AS(run_reference(pipe, in, -1), mp::InvalidArgument);
}

TEST_CASE("poisson impulse response on 5x5", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({5, 5});
  std::vector<float> v(25, 0.0f);
  v[2 * 5 + 2] = 1.0f;
  const auto out = run_reference(pipe, FieldSet{FieldData(g, v), {}}, 1);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      float expect = 0.0f;
      const bool interior = x >= 1 && x <= 3 && y >= 1 && y <= 3;
      if (x == 2 && y == 2) {
        expect = 0.5f;
      } else if (interior && std::abs(x - 2) + std::abs(y - 2) == 1) {
        expect = 0.125f;
      }
      CHECK(out.at(x, y) == expect);
    }
  }
}

TEST_CASE("batch equals independent runs", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({16, 16});
  std::vector<FieldSet> batch;
  for (int i = 0; i < 3; ++i) batch.push_back(mp::testing::random_inputs(pipe, g, 40 + i));
  const auto outs = mp::reference::run_reference_batch(pipe, batch, 4);
  REQUIRE(outs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(outs[i] == run_reference(pipe, batch[i], 4));

  std::vector<FieldSet> same(4, batch.front());
  const auto rep = mp::reference::run_reference_batch(pipe, same, 2);
  for (const auto& o : rep) CHECK(o == rep.front());

  batch.push_back(mp::testing::random_inputs(pipe, MeshGeometry({16, 15}), 1));
  CHECK_THROWS_AS(mp::reference::run_reference_batch(pipe, batch, 1), mp::GeometryError);
}

TEST_CASE("linearity of pure-tap kernels", "[reference]") {
  const auto pipe = mp::apps::jacobi_3d(mp::testing::random_jacobi(3));
  const MeshGeometry g({10, 9, 8});
  const auto u1 = mp::testing::random_field(g, 1);
  const auto u2 = mp::testing::random_field(g, 2);
  const float a = 0.75f, b = -1.25f;
  std::vector<float> mix(static_cast<std::size_t>(g.value_count()));
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * u1.values()[i] + b * u2.values()[i];
  const auto r1 = run_reference(pipe, FieldSet{u1, {}}, 3);
  const auto r2 = run_reference(pipe, FieldSet{u2, {}}, 3);
  const auto rm = run_reference(pipe, FieldSet{FieldData(g, mix), {}}, 3);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double expect = a * r1.values()[i] + b * r2.values()[i];
    CHECK(rm.values()[i] == Catch::Approx(expect).epsilon(1e-5).margin(1e-6));
  }
}

TEST_CASE("translation equivariance in the interior", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  const MeshGeometry g({24, 20});
  const auto u = mp::testing::random_field(g, 5);
  std::vector<float> shifted(static_cast<std::size_t>(g.value_count()), 0.0f);
  const int sx = 2, sy = 1;
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 24; ++x) {
      const int tx = x - sx, ty = y - sy;
      if (tx >= 0 && ty >= 0) shifted[static_cast<std::size_t>(y * 24 + x)] = u.at(tx, ty);
    }
  }
  const auto a = run_reference(pipe, FieldSet{u, {}}, 2);
  const auto b = run_reference(pipe, FieldSet{FieldData(g, shifted), {}}, 2);
  // Cells far enough from every edge in both frames.
  for (int y = 2 + sy + 2; y < 20 - 2; ++y) {
    for (int x = 2 + sx + 2; x < 24 - 2; ++x) CHECK(b.at(x, y) == a.at(x - sx, y - sy));
  }
}

TEST_CASE("geometry mismatch is rejected", "[reference]") {
  const auto pipe = mp::apps::poisson_2d();
  CHECK_THROWS_AS(run_reference(pipe, FieldSet{FieldData::filled(MeshGeometry({4, 4, 4}), 1), {}}, 1),
                  mp::GeometryError);
  CHECK_THROWS_AS(
      run_reference(pipe, FieldSet{FieldData::filled(MeshGeometry({4, 4}, 2), 1), {}}, 1),
      mp::GeometryError);
}
