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


#include "meshpipe/apps.hpp"

#include <utility>
#include <vector>

namespace meshpipe::apps {

PipelineSpec poisson_2d() {
  std::vector<Tap> taps{
      {{-1, 0, 0}, 0.125f}, {{1, 0, 0}, 0.125f}, {{0, -1, 0}, 0.125f},
      {{0, 1, 0}, 0.125f},  {{0, 0, 0}, 0.5f},
  };
  StencilKernel k(2, std::move(taps), 1, {}, {}, kPoissonDsp);
  return PipelineSpec::single(std::move(k), "poisson-5pt-2d");
}

PipelineSpec jacobi_3d(const std::array<float, 7>& k) {
  std::vector<Tap> taps{
      {{1, 0, 0}, k[0]}, {{-1, 0, 0}, k[1]}, {{0, -1, 0}, k[2]}, {{0, 0, 0}, k[3]},
      {{0, 1, 0}, k[4]}, {{0, 0, 1}, k[5]},  {{0, 0, -1}, k[6]},
  };
  StencilKernel kernel(3, std::move(taps), 1, {}, {}, kJacobiDsp);
  return PipelineSpec::single(std::move(kernel), "jacobi-7pt-3d");
}

namespace {

StencilKernel star_kernel(const StarCoefficients& star, float rho_weight, float mu_weight) {
  static constexpr int kOffsets[8] = {-4, -3, -2, -1, 1, 2, 3, 4};
  std::vector<Tap> taps;
  taps.push_back({{0, 0, 0}, star[0]});
  for (int axis = 0; axis < 3; ++axis) {
    for (int j = 0; j < 8; ++j) {
      Offset o{0, 0, 0};
      o[static_cast<std::size_t>(axis)] = kOffsets[j];
      taps.push_back({o, star[static_cast<std::size_t>(1 + 8 * axis + j)]});
    }
  }
  return StencilKernel(3, std::move(taps), kRtmArity, {"rho", "mu"},
                       {{0, rho_weight}, {1, mu_weight}});
}

}  // namespace

PipelineSpec rtm_forward(const StarCoefficients& star, float dt, float rho_weight,
                         float mu_weight) {
  const StencilKernel f = star_kernel(star, rho_weight, mu_weight);
  auto stage = [&](std::string name, int source, int result, std::vector<SlotUpdate> updates) {
    return Stage{std::move(name), f, source, result, dt, BoundaryMode::kZero, std::move(updates)};
  };
  std::vector<Stage> stages;
  stages.push_back(stage("k1", kY, kK1, {{kT, kY, {{kK1, 0.5f}}}}));
  stages.push_back(stage("k2", kT, kK2, {{kT, kY, {{kK2, 0.5f}}}}));
  stages.push_back(stage("k3", kT, kK3, {{kT, kY, {{kK3, 1.0f}}}}));
  stages.push_back(stage(
      "k4", kT, kK4,
      {{kY, kY, {{kK1, 1.0f / 6.0f}, {kK2, 1.0f / 3.0f}, {kK3, 1.0f / 3.0f}, {kK4, 1.0f / 6.0f}}}}));
  return PipelineSpec("rtm-forward", std::move(stages), kRtmSlots, kRtmDsp)
      .with_plane_limits(kRtmMinPlaneExtent, kRtmAdvisoryPlane);
}

DesignPoint poisson_design() { return DesignPoint{8, 60, std::nullopt, 1, 250e6}; }
DesignPoint jacobi_design() { return DesignPoint{8, 29, std::nullopt, 1, 246e6}; }
DesignPoint rtm_design() { return DesignPoint{1, 3, std::nullopt, 1, 261e6}; }

}  // namespace meshpipe::apps
