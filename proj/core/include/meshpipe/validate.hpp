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

#pragma once

#include <string>
#include <vector>

#include "meshpipe/core.hpp"

namespace meshpipe {

/// One violated bound. `constraint` is a short stable key such as "p>p_dsp".
struct Violation {
  std::string constraint;
  double value = 0.0;
  double limit = 0.0;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
  bool violates(const std::string& constraint) const;
  std::string summary() const;
};

/**
 * Checks a design against the bandwidth, DSP and on-chip memory budgets and
 * the tile-shape rules. Infeasibility is reported, never thrown; only inputs
 * that break their own invariants throw.
 */
FeasibilityReport validate_design(const DesignPoint& d, const ResourceProfile& r,
                                  const PipelineSpec& pipe, const MeshGeometry& g);
FeasibilityReport validate_design(const DesignPoint& d, const ResourceProfile& r,
                                  const StencilKernel& kernel, const MeshGeometry& g);

/// Cells buffered per row (2D) or plane (3D) by one stage: m or m*n untiled,
/// the block footprint when tiled.
std::int64_t buffered_extent(const DesignPoint& d, const MeshGeometry& g);

}  // namespace meshpipe
