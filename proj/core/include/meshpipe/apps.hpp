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


/**
 * @file apps.hpp
 * @brief Ready-made pipelines: a 2D Poisson smoother, a 3D 7-point Jacobi
 * iteration and a fused RK4 forward pass of a wave solver (RTM).
 */

#pragma once

#include <array>
#include <cstdint>

#include "meshpipe/core.hpp"

namespace meshpipe::apps {

/// Measured DSP blocks per mesh-point update.
inline constexpr std::int64_t kPoissonDsp = 14;
inline constexpr std::int64_t kJacobiDsp = 33;
inline constexpr std::int64_t kRtmDsp = 2444;

/// 5-point smoother: 1/8 on each of the four neighbours, 1/2 on the centre.
PipelineSpec poisson_2d();

/// Coefficients k1..k7 weight U(x+1), U(x-1), U(y-1), U, U(y+1), U(z+1),
/// U(z-1) in that order, which is also the accumulation order.
PipelineSpec jacobi_3d(const std::array<float, 7>& k);

/// Star coefficients: [0] is the centre, then for each axis x, y, z eight
/// entries for offsets -4, -3, -2, -1, +1, +2, +3, +4.
using StarCoefficients = std::array<float, 25>;

/// Slots of the RTM record, each six components wide.
enum RtmSlot : int { kY = 0, kT = 1, kK1 = 2, kK2 = 3, kK3 = 4, kK4 = 5 };
inline constexpr int kRtmArity = 6;
inline constexpr int kRtmSlots = 6;
/// Planes narrower than this are rejected; planes above kRtmAdvisoryPlane
/// cells get a warning.
inline constexpr std::int64_t kRtmMinPlaneExtent = 8;
inline constexpr std::int64_t kRtmAdvisoryPlane = 64 * 64;

/**
 * Four fused stages per iteration:
 *   K1 = f(Y) dt, T = Y + K1/2
 *   K2 = f(T) dt, T = Y + K2/2
 *   K3 = f(T) dt, T = Y + K3
 *   K4 = f(T) dt, Y = Y + K1/6 + K2/3 + K3/3 + K4/6
 * where f(U) = (sum of star taps on U) * (rho_weight * rho + mu_weight * mu),
 * applied per component. rho and mu are scalar pointwise fields. Outside
 * the stencil interior K is 0, so T and Y hold.
 */
PipelineSpec rtm_forward(const StarCoefficients& star, float dt, float rho_weight = 1.0f,
                         float mu_weight = 1.0f);

/// Designs the pipelines were built with on the reference device. The
/// Jacobi build uses slightly more than 90% of the DSPs, so it fails the
/// default utilization cap.
DesignPoint poisson_design();  // V=8, p=60, 250 MHz
DesignPoint jacobi_design();   // V=8, p=29, 246 MHz
DesignPoint rtm_design();      // V=1, p=3, 261 MHz

}  // namespace meshpipe::apps
