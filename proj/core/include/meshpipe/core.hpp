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
 * @file core.hpp
 * @brief Domain types shared by the model, the reference executor, the
 * streaming simulator and the design-space explorer.
 *
 * Coordinates are always written (x, y, z). x is the streaming dimension
 * (the mesh extent m, fastest varying in memory), y is n and z is l. A 2D
 * mesh streams row by row along y; a 3D mesh streams plane by plane along z.
 * All types are immutable after construction.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace meshpipe {

/// Relative cell offset (dx, dy, dz). The z component is zero for 2D kernels.
using Offset = std::array<int, 3>;

/// One stencil access. When `field` is set, the coefficient is additionally
/// multiplied by that pointwise field at the updated cell.
struct Tap {
  Offset offset{};
  float coefficient = 0.0f;
  int field = -1;

  bool operator==(const Tap&) const = default;
};

/// weight * pointwise_field[field], summed into a per-cell scale factor.
struct FieldTerm {
  int field = 0;
  float weight = 0.0f;

  bool operator==(const FieldTerm&) const = default;
};

/// Operation counts behind the DSP estimate. This is an estimate only; real
/// per-kernel DSP costs come from post-synthesis reports.
struct DspEstimate {
  std::int64_t multiplies = 0;
  std::int64_t adds = 0;
  std::int64_t dsp_blocks = 0;
};

inline constexpr std::int64_t kDspPerMultiply = 2;
inline constexpr std::int64_t kDspPerAdd = 2;

/**
 * Affine stencil: S = (sum_i c_i [* f_i(self)] * U(x + o_i)) [* sum_j w_j f_j(self)].
 *
 * Each of the `arity` components of U is updated with the same taps. Taps are
 * accumulated in declaration order; the simulator and the reference executor
 * both rely on that order for bitwise agreement.
 */
class StencilKernel {
 public:
  /// `dsp_cost` of zero means "not measured"; the estimate is used instead.
  StencilKernel(int ndim, std::vector<Tap> taps, int arity = 1,
                std::vector<std::string> pointwise_fields = {},
                std::vector<FieldTerm> scale = {}, std::int64_t dsp_cost = 0);

  int ndim() const { return ndim_; }
  const std::vector<Tap>& taps() const { return taps_; }
  int arity() const { return arity_; }
  const std::vector<std::string>& pointwise_fields() const { return pointwise_fields_; }
  const std::vector<FieldTerm>& scale() const { return scale_; }

  /// Stencil order D: twice the largest absolute tap offset over all dims.
  int order() const { return order_; }
  int halo() const { return order_ / 2; }

  std::int64_t dsp_cost() const { return dsp_cost_; }
  bool dsp_cost_is_estimate() const { return dsp_cost_estimated_; }

  bool operator==(const StencilKernel&) const = default;

 private:
  int ndim_;
  std::vector<Tap> taps_;
  int arity_;
  std::vector<std::string> pointwise_fields_;
  std::vector<FieldTerm> scale_;
  int order_ = 0;
  std::int64_t dsp_cost_ = 0;
  bool dsp_cost_estimated_ = false;
};

/// Counts multiplies and adds for one mesh-point update (all components) at
/// kDspPerMultiply / kDspPerAdd blocks each.
DspEstimate estimate_dsp_cost(std::span<const Tap> taps, std::span<const FieldTerm> scale,
                              int arity);

class MeshGeometry {
 public:
  /// dims = {m, n} or {m, n, l}. `element_bytes` is the size of one scalar
  /// component; a point holds `arity` of them.
  explicit MeshGeometry(std::vector<std::int64_t> dims, int arity = 1, int element_bytes = 4);

  int ndim() const { return static_cast<int>(dims_.size()); }
  const std::vector<std::int64_t>& dims() const { return dims_; }
  std::int64_t extent(int d) const { return d < ndim() ? dims_[static_cast<std::size_t>(d)] : 1; }
  std::int64_t m() const { return dims_[0]; }
  std::int64_t n() const { return dims_[1]; }
  std::int64_t l() const { return extent(2); }

  std::int64_t cells() const;
  std::int64_t value_count() const { return cells() * arity_; }
  int arity() const { return arity_; }
  int element_bytes() const { return element_bytes_; }
  /// Bytes of one mesh point (arity * element_bytes).
  std::int64_t point_bytes() const { return static_cast<std::int64_t>(arity_) * element_bytes_; }

  /// Same dims, different arity (used for scalar pointwise fields).
  MeshGeometry with_arity(int arity) const;

  bool operator==(const MeshGeometry&) const = default;

 private:
  std::vector<std::int64_t> dims_;
  int arity_;
  int element_bytes_;
};

/// Flat single-precision storage, row-major with x fastest then y, z, and the
/// arity components interleaved per point.
class FieldData {
 public:
  FieldData(MeshGeometry geometry, std::vector<float> values);

  static FieldData filled(const MeshGeometry& geometry, float value);

  const MeshGeometry& geometry() const { return geometry_; }
  std::span<const float> values() const { return values_; }
  std::vector<float> release() && { return std::move(values_); }

  std::int64_t index(std::int64_t x, std::int64_t y, std::int64_t z = 0, int component = 0) const;
  float at(std::int64_t x, std::int64_t y, std::int64_t z = 0, int component = 0) const {
    return values_[static_cast<std::size_t>(index(x, y, z, component))];
  }

  bool operator==(const FieldData& other) const;

 private:
  MeshGeometry geometry_;
  std::vector<float> values_;
};

/// True when both fields have the same geometry and identical bit patterns.
bool bitwise_equal(const FieldData& a, const FieldData& b);

/// Primary field plus the scalar pointwise coefficient fields a pipeline reads.
struct FieldSet {
  FieldData primary;
  std::vector<FieldData> pointwise;
};

struct ResourceProfile {
  std::int64_t dsp_total = 0;
  double onchip_mem_bytes = 0.0;
  double channel_bw = 0.0;  ///< bytes/s per memory port
  int num_ports = 1;
  double freq_hz = 0.0;
  double dsp_util_cap = 0.9;
  double mem_util_cap = 0.85;

  void validate() const;
  double aggregate_bandwidth() const { return channel_bw * num_ports; }

  /// Alveo U280 with one DDR4 channel (19.2 GB/s), 8490 DSPs, 34.5 MB URAM.
  static ResourceProfile u280_ddr4();
  /// Alveo U280 using `channels` HBM pseudo-channels of 460/32 GB/s each.
  static ResourceProfile u280_hbm(int channels);

  bool operator==(const ResourceProfile&) const = default;
};

/// Spatial block. N == 0 denotes 2D strip tiling (block spans every row).
struct TileShape {
  std::int64_t M = 0;
  std::int64_t N = 0;

  auto operator<=>(const TileShape&) const = default;
};

struct DesignPoint {
  int V = 1;
  int p = 1;
  std::optional<TileShape> tile;
  int batch = 1;
  double freq_hz = 300e6;

  /// Checks the context-free invariants (V, p, B >= 1, positive frequency).
  void validate() const;

  bool operator==(const DesignPoint&) const = default;
};

enum class BoundaryMode {
  kFreeze,  ///< stencil result at boundary cells is the unchanged source value
  kZero,    ///< stencil result at boundary cells is zero
};

/// target = base + sum(weight * slot), accumulated left to right.
struct SlotUpdate {
  int target = 0;
  int base = 0;
  std::vector<std::pair<int, float>> terms;

  bool operator==(const SlotUpdate&) const = default;
};

/**
 * One fused loop of a pipeline. Every streamed point carries `slot_count`
 * state slots (each `arity` wide) plus the pointwise fields. A stage applies
 * its kernel to `source_slot`, stores result * result_scale in `result_slot`
 * and then applies `updates` in order.
 */
struct Stage {
  std::string name;
  StencilKernel kernel;
  int source_slot = 0;
  int result_slot = 0;
  float result_scale = 1.0f;
  BoundaryMode boundary = BoundaryMode::kFreeze;
  std::vector<SlotUpdate> updates;

  bool operator==(const Stage&) const = default;
};

/// Ordered chain of fused stages executed once per iteration. Slot 0 is the
/// primary field and the only slot read from and written to external memory.
class PipelineSpec {
 public:
  /// `dsp_cost` of zero means the sum of the stage kernels' costs.
  PipelineSpec(std::string name, std::vector<Stage> stages, int slot_count = 1,
               std::int64_t dsp_cost = 0);

  static PipelineSpec single(StencilKernel kernel, std::string name = "stencil");

  const std::string& name() const { return name_; }
  const std::vector<Stage>& stages() const { return stages_; }
  int slot_count() const { return slot_count_; }
  int ndim() const { return stages_.front().kernel.ndim(); }
  int arity() const { return stages_.front().kernel.arity(); }
  const std::vector<std::string>& pointwise_fields() const { return pointwise_fields_; }
  int pointwise_count() const { return static_cast<int>(pointwise_fields_.size()); }

  /// Sum of stage orders: the rows (2D) or planes (3D) one iteration delays
  /// the stream by, times two.
  int order_per_iteration() const;
  /// Rows or planes each stage's window buffer holds (its order D).
  std::vector<int> window_depths() const;
  std::int64_t dsp_cost() const { return dsp_cost_; }
  /// Floats carried per streamed point: slots * arity + pointwise fields.
  int record_floats() const { return slot_count_ * arity() + pointwise_count(); }

  /// Planes smaller than this in x or y are rejected (0 = no limit).
  std::int64_t min_plane_extent() const { return min_plane_extent_; }
  /// Plane area above which a warning is issued (0 = none).
  std::int64_t advisory_plane_area() const { return advisory_plane_area_; }
  PipelineSpec with_plane_limits(std::int64_t min_extent, std::int64_t advisory_area) const;

  /// Throws GeometryError when `g` cannot be processed by this pipeline.
  void check_geometry(const MeshGeometry& g) const;
  std::vector<std::string> geometry_warnings(const MeshGeometry& g) const;
  /// Throws GeometryError unless the inputs match `check_geometry` and the
  /// pointwise field list.
  void check_inputs(const FieldSet& inputs) const;

  bool operator==(const PipelineSpec&) const = default;

 private:
  std::string name_;
  std::vector<Stage> stages_;
  int slot_count_;
  std::vector<std::string> pointwise_fields_;
  std::int64_t dsp_cost_ = 0;
  std::int64_t min_plane_extent_ = 0;
  std::int64_t advisory_plane_area_ = 0;
};

}  // namespace meshpipe
