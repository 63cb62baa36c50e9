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

#include "meshpipe/apps.hpp"
#include "meshpipe/error.hpp"
#include "meshpipe/reference.hpp"
#include "meshpipe/simulator.hpp"
#include "meshpipe/validate.hpp"
#include "oracle.hpp"

namespace mp = meshpipe;
using mp::DesignPoint;
using mp::FieldData;
using mp::FieldSet;
using mp::MeshGeometry;
using mp::reference::run_reference;

TEST_CASE("poisson pipeline", "[apps]") {
  const auto pipe = mp::apps::poisson_2d();
  REQUIRE(pipe.stages().size() == 1);
  const auto& k = pipe.stages().front().kernel;
  float sum = 0.0f;
  for (const auto& t : k.taps()) sum += t.coefficient;
  CHECK(sum == 1.0f);
  CHECK(k.order() == 2);
  CHECK(pipe.dsp_cost() == 14);
  CHECK(pipe.arity() == 1);
}

TEST_CASE("jacobi pipeline", "[apps]") {
  const MeshGeometry g({8, 8, 8});
  const auto identity = mp::apps::jacobi_3d({0, 0, 0, 1, 0, 0, 0});
  const auto u = mp::testing::random_field(g, 1);
  CHECK(run_reference(identity, FieldSet{u, {}}, 3) == u);
  CHECK(identity.dsp_cost() == 33);
  CHECK(identity.stages().front().kernel.order() == 2);

  const auto dyadic = mp::apps::jacobi_3d(mp::testing::kDyadicJacobi);
  const auto c = FieldData::filled(g, 1.5f);
  CHECK(run_reference(dyadic, FieldSet{c, {}}, 4) == c);

  const float s = 1.0f / 7.0f;
  const auto sevenths = mp::apps::jacobi_3d({s, s, s, s, s, s, s});
  const auto out = run_reference(sevenths, FieldSet{c, {}}, 4);
  for (float v : out.values()) CHECK(v == Catch::Approx(1.5).epsilon(1e-6));

  const auto random = mp::apps::jacobi_3d(mp::testing::random_jacobi(9));
  const auto in = mp::testing::random_inputs(random, g, 2);
  const auto sp = mp::sim::build_pipeline(random, DesignPoint{4, 2}, g);
  CHECK(mp::sim::simulate(sp, in, 2).outputs.front() == run_reference(random, in, 2));
}

TEST_CASE("jacobi taps follow the documented order", "[apps]") {
  const auto pipe = mp::apps::jacobi_3d({1, 2, 3, 4, 5, 6, 7});
  const auto& taps = pipe.stages().front().kernel.taps();
  const std::vector<mp::Offset> order{{1, 0, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 0},
                                      {0, 1, 0}, {0, 0, 1},  {0, 0, -1}};
  REQUIRE(taps.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(taps[i].offset == order[i]);
    CHECK(taps[i].coefficient == static_cast<float>(i + 1));
  }
}

TEST_CASE("rtm pipeline structure", "[apps]") {
  const auto pipe = mp::apps::rtm_forward(mp::testing::random_star(3), 0.01f, 0.5f, 2.0f);
  CHECK(pipe.stages().size() == 4);
  CHECK(pipe.arity() == 6);
  CHECK(pipe.slot_count() == 6);
  CHECK(pipe.dsp_cost() == 2444);
  CHECK(pipe.pointwise_fields() == std::vector<std::string>{"rho", "mu"});
  for (const auto& st : pipe.stages()) {
    CHECK(st.kernel.order() == 8);
    CHECK(st.kernel.taps().size() == 25);
    CHECK(st.boundary == mp::BoundaryMode::kZero);
    CHECK(st.result_scale == 0.01f);
  }
  CHECK(pipe.stages()[0].source_slot == mp::apps::kY);
  CHECK(pipe.stages()[3].updates.front().target == mp::apps::kY);
  CHECK(pipe.stages()[3].updates.front().terms.size() == 4);
}

TEST_CASE("rtm leaves Y unchanged without a derivative", "[apps]") {
  const MeshGeometry g({16, 16, 12}, 6);
  SECTION("zero star coefficients") {
    const auto pipe = mp::apps::rtm_forward(mp::apps::StarCoefficients{}, 0.1f);
    const auto in = mp::testing::random_inputs(pipe, g, 5);
    CHECK(run_reference(pipe, in, 3) == in.primary);
  }
  SECTION("zero time step") {
    const auto pipe = mp::apps::rtm_forward(mp::testing::random_star(4), 0.0f);
    const auto in = mp::testing::random_inputs(pipe, g, 6);
    CHECK(run_reference(pipe, in, 3) == in.primary);
  }
}

TEST_CASE("rtm one step matches a hand-written RK4", "[apps]") {
  const MeshGeometry g({10, 10, 10}, 6);
  const auto star = mp::testing::random_star(8, 0.2f);
  const float dt = 0.05f, a = 0.7f, b = 0.3f;
  const auto pipe = mp::apps::rtm_forward(star, dt, a, b);
  const auto in = mp::testing::random_inputs(pipe, g, 9);
  const auto out = run_reference(pipe, in, 1);

  // Same recurrence in double: on a 10^3 mesh only cells 4..5 on every axis
  // are interior, K is zero elsewhere.
  auto idx = [](int x, int y, int z) { return (z * 10 + y) * 10 + x; };
  const auto& Y = in.primary.values();
  const auto& rho = in.pointwise[0].values();
  const auto& mu = in.pointwise[1].values();
  std::vector<double> y0(Y.begin(), Y.end());
  auto f = [&](const std::vector<double>& U, int x, int yy, int z, int c) {
    static constexpr int kOff[8] = {-4, -3, -2, -1, 1, 2, 3, 4};
    double acc = star[0] * U[static_cast<std::size_t>(idx(x, yy, z) * 6 + c)];
    for (int j = 0; j < 8; ++j) {
      acc += star[static_cast<std::size_t>(1 + j)] * U[static_cast<std::size_t>(idx(x + kOff[j], yy, z) * 6 + c)];
      acc += star[static_cast<std::size_t>(9 + j)] * U[static_cast<std::size_t>(idx(x, yy + kOff[j], z) * 6 + c)];
      acc += star[static_cast<std::size_t>(17 + j)] * U[static_cast<std::size_t>(idx(x, yy, z + kOff[j]) * 6 + c)];
    }
    const auto cell = static_cast<std::size_t>(idx(x, yy, z));
    return acc * (a * rho[cell] + b * mu[cell]) * dt;
  };
  auto stage = [&](const std::vector<double>& src, std::vector<double>& K) {
    K.assign(src.size(), 0.0);
    for (int z = 4; z < 6; ++z)
      for (int yy = 4; yy < 6; ++yy)
        for (int x = 4; x < 6; ++x)
          for (int c = 0; c < 6; ++c) K[static_cast<std::size_t>(idx(x, yy, z) * 6 + c)] = f(src, x, yy, z, c);
  };
  std::vector<double> k1, k2, k3, k4, t(y0.size());
  stage(y0, k1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = y0[i] + k1[i] / 2;
  stage(t, k2);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = y0[i] + k2[i] / 2;
  stage(t, k3);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = y0[i] + k3[i];
  stage(t, k4);
  for (std::size_t i = 0; i < y0.size(); ++i) {
    const double expect = y0[i] + k1[i] / 6 + k2[i] / 3 + k3[i] / 3 + k4[i] / 6;
    CHECK(out.values()[i] == Catch::Approx(expect).epsilon(1e-4).margin(1e-6));
  }
}

TEST_CASE("rtm simulator equals reference", "[apps]") {
  const MeshGeometry g({16, 16, 16}, 6);
  const auto pipe = mp::apps::rtm_forward(mp::testing::random_star(10), 0.02f);
  const auto in = mp::testing::random_inputs(pipe, g, 11);
  const auto sp = mp::sim::build_pipeline(pipe, mp::apps::rtm_design(), g);
  const auto res = mp::sim::simulate(sp, in, 2);
  CHECK(res.effective_iterations == 3);
  CHECK(res.outputs.front() == run_reference(pipe, in, 3));
  // One read of Y, rho and mu and one write of Y per pass.
  CHECK(res.bytes_read == res.passes * 16 * 16 * 16 * (6 * 4 + 4 + 4));
  CHECK(res.bytes_written == res.passes * 16 * 16 * 16 * 6 * 4);
}

TEST_CASE("applications pass validation at their reference designs", "[apps]") {
  const auto r = mp::ResourceProfile::u280_ddr4();
  CHECK(mp::validate_design(mp::apps::poisson_design(), r, mp::apps::poisson_2d(),
                            MeshGeometry({4096, 4096}))
            .pass());
  const auto jacobi = mp::apps::jacobi_3d(mp::testing::kDyadicJacobi);
  const MeshGeometry cube({100, 100, 100});
  auto jd = mp::apps::jacobi_design();
  const auto built = mp::validate_design(jd, r, jacobi, cube);
  CHECK(built.violates("p>p_dsp"));
  CHECK(built.violations.size() == 1);
  auto relaxed = r;
  relaxed.dsp_util_cap = 0.91;
  CHECK(mp::validate_design(jd, relaxed, jacobi, cube).pass());
  jd.p = 28;
  CHECK(mp::validate_design(jd, r, jacobi, cube).pass());
  CHECK(mp::validate_design(mp::apps::rtm_design(), r,
                            mp::apps::rtm_forward(mp::testing::random_star(1), 0.1f),
                            MeshGeometry({64, 64, 64}, 6))
            .pass());
}
