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
 * @file explore.hpp
 * @brief Design-space sweep over V, p, blocking, batching and clock
 * frequency, ranked by the analytic model.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meshpipe/core.hpp"
#include "meshpipe/model.hpp"

namespace meshpipe::explore {

enum class Tiling {
  kAuto,   ///< untiled designs and blocked designs
  kNever,  ///< untiled only (batching allowed)
  kOnly,   ///< blocked designs only
};

/// Optional pins and sweep bounds. Unset pins are swept.
struct Constraints {
  std::optional<std::int64_t> V;
  std::optional<std::int64_t> p;
  std::optional<TileShape> tile;  ///< implies blocked designs
  std::optional<std::int64_t> batch;
  std::optional<std::int64_t> max_p;  ///< extra cap on the swept p
  Tiling tiling = Tiling::kAuto;
  std::vector<double> frequencies{300e6, 250e6};
  std::vector<std::int64_t> batch_sizes{1, 10, 50, 100, 1000};
  std::int64_t iterations = 60000;  ///< run length used for runtime and throughput
  int jobs = 1;                     ///< worker threads evaluating candidates
};

struct Candidate {
  DesignPoint design;
  model::ModelReport report;
};

struct Exploration {
  std::vector<Candidate> designs;  ///< feasible designs, best first
  std::int64_t evaluated = 0;      ///< candidates generated before filtering
  /// Empty when designs exist; otherwise the bound that rules everything
  /// out ("V_max<1", "p_dsp<1", "p_mem<1") or "constraints" when only the
  /// pins do.
  std::string binding_constraint;
};

/**
 * Every feasible design of the sweep, sorted by predicted throughput
 * (descending), then runtime, then smaller p, V, tile, batch and higher
 * frequency. The order is total, so output is independent of `jobs`.
 *
 * V runs over powers of two up to the bandwidth bound; p from 1 to
 * min(p_dsp, p_mem); square 3D blocks over multiples of V up to twice the
 * memory-optimal width; 2D strips over V times powers of two up to the
 * widest strip the buffers can hold.
 */
Exploration enumerate_designs(const ResourceProfile& r, const PipelineSpec& pipe,
                              const MeshGeometry& g, const Constraints& c = {});

/// Head of enumerate_designs, or nullopt when nothing is feasible.
std::optional<Candidate> best_design(const ResourceProfile& r, const PipelineSpec& pipe,
                                     const MeshGeometry& g, const Constraints& c = {});

/// Ranking predicate used by enumerate_designs (true if `a` ranks first).
bool ranks_before(const Candidate& a, const Candidate& b);

}  // namespace meshpipe::explore
