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
 * @file simulator.hpp
 * @brief Cycle-counting model of the streaming accelerator.
 *
 * The mesh is streamed from external memory one V-wide vector per cycle,
 * x fastest, then rows, then planes. Each iteration is a chain of stage
 * instances; p iterations are chained back to back and only the chain ends
 * touch external memory. Every stage owns a cyclic window buffer and emits a
 * vector once the farthest row (2D) or plane (3D) its stencil needs has
 * arrived, so a stage of order D delays the stream by D/2 rows or planes.
 *
 * The count is of streamed vectors, not register-level timing: arithmetic
 * latency inside a stage is excluded from `cycles` and reported separately
 * as an estimate.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshpipe/core.hpp"

namespace meshpipe::sim {

/// Estimated arithmetic latency per stage instance (cycles). Not part of
/// `SimResult::cycles`.
inline constexpr std::int64_t kStageLatencyEstimate = 12;

/// Shape of one stage's cyclic buffer for a given stream.
struct WindowBuffer {
  int depth = 0;                          ///< rows or planes held (stage order D)
  std::int64_t window_cells = 0;          ///< depth * padded row/plane cells
  std::int64_t shift_register_cells = 0;  ///< extra cells for in-row and in-plane taps
  std::int64_t lag_vectors = 0;           ///< vectors between accepting input and emitting output
  std::int64_t capacity_vectors = 0;

  std::int64_t capacity_cells() const { return window_cells + shift_register_cells; }
};

/// Position of one stage instance in the unrolled chain.
struct StageInstance {
  int iteration = 0;  ///< 0 .. p-1 within a pass
  int stage = 0;      ///< index into PipelineSpec::stages()
};

class SimPipeline {
 public:
  const PipelineSpec& spec() const { return spec_; }
  const DesignPoint& design() const { return design_; }
  const MeshGeometry& geometry() const { return geometry_; }
  const std::optional<ResourceProfile>& profile() const { return profile_; }

  const std::vector<StageInstance>& stages() const { return stages_; }
  /// Window buffers of every stage instance for the design's stream (the
  /// untiled mesh, or one block when the design is tiled).
  const std::vector<WindowBuffer>& buffers() const { return buffers_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::int64_t alu_latency_estimate() const {
    return static_cast<std::int64_t>(stages_.size()) * kStageLatencyEstimate;
  }

 private:
  friend SimPipeline build_pipeline(const PipelineSpec&, const DesignPoint&,
                                    const MeshGeometry&, std::optional<ResourceProfile>);
  SimPipeline(PipelineSpec spec, DesignPoint design, MeshGeometry geometry,
              std::optional<ResourceProfile> profile)
      : spec_(std::move(spec)),
        design_(design),
        geometry_(std::move(geometry)),
        profile_(std::move(profile)) {}

  PipelineSpec spec_;
  DesignPoint design_;
  MeshGeometry geometry_;
  std::optional<ResourceProfile> profile_;
  std::vector<StageInstance> stages_;
  std::vector<WindowBuffer> buffers_;
  std::vector<std::string> warnings_;
};

/**
 * Unrolls `pipe` p times for design `d` on meshes of geometry `g`.
 * When `profile` is given, simulate() enforces its on-chip memory bound.
 *
 * Throws GeometryError for a pipeline/mesh mismatch and ConfigurationError
 * for tile or batch settings the mesh cannot honor, or for a stencil that
 * reads ahead of the rows its window buffer has received.
 */
SimPipeline build_pipeline(const PipelineSpec& pipe, const DesignPoint& d, const MeshGeometry& g,
                           std::optional<ResourceProfile> profile = std::nullopt);

/// Buffer shapes for a stream `row_cells` wide and `rows_per_plane` tall
/// (1 for 2D).
std::vector<WindowBuffer> window_buffers(const PipelineSpec& pipe, int V, std::int64_t row_cells,
                                         std::int64_t rows_per_plane);

struct SimResult {
  std::vector<FieldData> outputs;
  std::int64_t cycles = 0;
  std::int64_t bytes_read = 0;
  std::int64_t bytes_written = 0;
  std::int64_t computed_cells = 0;   ///< block cells streamed, all passes
  std::int64_t redundant_cells = 0;  ///< computed minus valid-per-block, all passes
  std::int64_t iterations = 0;
  std::int64_t effective_iterations = 0;
  std::int64_t passes = 0;
  std::int64_t tiles = 1;
  std::vector<std::int64_t> tile_pass_cycles;  ///< cycles of each block in one pass
  std::int64_t alu_latency_estimate = 0;
};

/// Untiled, unbatched run. Output is bitwise equal to the reference executor
/// after `effective_iterations`.
SimResult simulate(const SimPipeline& sp, const FieldSet& inputs, std::int64_t n_iter);

/// Overlapped blocks of `tile` sequenced on the device; every mesh cell is
/// taken from the block that owns it.
SimResult simulate_tiled(const SimPipeline& sp, const FieldSet& inputs, std::int64_t n_iter,
                         TileShape tile);

/// Meshes stacked along the slowest dimension and streamed as one.
SimResult simulate_batched(const SimPipeline& sp, std::span<const FieldSet> batch,
                           std::int64_t n_iter);

/// Dispatches on the design: tiled, batched (one input set per mesh) or plain.
SimResult run(const SimPipeline& sp, std::span<const FieldSet> inputs, std::int64_t n_iter);

}  // namespace meshpipe::sim
