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
 * @file model.hpp
 * @brief Analytic resource and performance model of a streaming stencil
 * accelerator with window buffers, V-wide vectorization, p-deep unrolling
 * of the iterative loop, spatial blocking and batching.
 *
 * Symbols: m, n, l are mesh extents (m streams fastest); V is the vector
 * factor; p the unroll depth; D the stencil order; M, N block extents; B the
 * batch size; k the bytes per mesh point. Cycle counts pad m up to a multiple
 * of V and round the iteration count up to a multiple of p.
 */

#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "meshpipe/core.hpp"
#include "meshpipe/validate.hpp"

namespace meshpipe::model {

/// Returned by the unroll limits when a resource does not bound p at all.
inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

struct VectorLimit {
  std::int64_t raw = 0;      ///< largest V with 2 V f k <= bandwidth
  std::int64_t rounded = 0;  ///< raw rounded down to a power of two (0 if raw is 0)
};

VectorLimit vector_factor_limit(double bandwidth, double freq_hz, double elem_bytes);
std::int64_t max_vector_factor(double bandwidth, double freq_hz, double elem_bytes);

/// n_iter rounded up to a whole number of p-deep passes.
std::int64_t effective_iterations(std::int64_t n_iter, std::int64_t p);

std::int64_t cycles_2d(std::int64_t m, std::int64_t n, std::int64_t V, std::int64_t p, int D,
                       std::int64_t n_iter);
std::int64_t cycles_3d(std::int64_t m, std::int64_t n, std::int64_t l, std::int64_t V,
                       std::int64_t p, int D, std::int64_t n_iter);

/// Average cycles per cell per iteration: 1/V + pD/(2nV).
double cycles_per_cell_2d(double n, double V, double p, double D);

std::int64_t unroll_limit_dsp(std::int64_t dsp_total, double util, std::int64_t V,
                              std::int64_t dsp_per_point);
/// `buffered_extent` is m for 2D and m*n for 3D meshes; `elem_bytes` is k.
std::int64_t unroll_limit_mem(double mem_bytes, double util, std::int64_t elem_bytes, int D,
                              std::int64_t buffered_extent);

/// Valid cells of an M x N x l block after p iterations. Throws when M or N
/// is not larger than pD.
std::int64_t tile_valid_points(std::int64_t M, std::int64_t N, std::int64_t l, std::int64_t p,
                               int D);
/// Strip tiling of a 2D mesh: (M - pD) * n.
std::int64_t tile_valid_points_2d(std::int64_t M, std::int64_t n, std::int64_t p, int D);
/// Fraction of computed cells that are valid. N == 0 selects strip tiling.
double tile_valid_ratio(std::int64_t M, std::int64_t N, std::int64_t p, int D);

/// Average cycles per block per iteration: (M/V) * N * (l + pD/2) / p.
double tile_cycles_3d(double M, double N, double l, double V, double p, double D);
double tile_cycles_2d(double M, double n, double V, double p, double D);

/// Valid cells per cycle of a tiled design. `l` (or `n`) may be infinite.
double tile_throughput(double M, double N, double l, double V, double p, double D);
double tile_throughput_2d(double M, double n, double V, double p, double D);

/// sqrt(mem / (k p D)): block width maximizing throughput for a given p
/// when the block uses all of `mem`. The matching N equals M.
double optimal_tile_width_exact(double mem_bytes, double elem_bytes, double p, double D);
std::int64_t optimal_tile_width(double mem_bytes, double elem_bytes, std::int64_t p, int D);

/// M / (3D) rounded to the nearest integer, at least 1.
std::int64_t optimal_unroll_tiled(std::int64_t M, int D);

/// Throughput when p V saturates the DSP budget (util * dsp_total / G).
double tiled_throughput_bound_3d(double p, double D, double M, double dsp_total, double util,
                                 double dsp_per_point, double l);
double tiled_throughput_bound_2d(double p, double D, double M, double dsp_total, double util,
                                 double dsp_per_point, double n);

/// Cycles for one mesh of a B-mesh batch during one p-deep pass:
/// ceil(m/V) * (n + pD/(2B)).
double cycles_batched_2d(std::int64_t m, std::int64_t n, std::int64_t V, std::int64_t p, int D,
                         std::int64_t B);
/// Cycles for the whole batch during one pass: ceil(m/V) * (B n + pD/2).
std::int64_t batch_pass_cycles_2d(std::int64_t m, std::int64_t n, std::int64_t V,
                                  std::int64_t p, int D, std::int64_t B);
std::int64_t batch_pass_cycles_3d(std::int64_t m, std::int64_t n, std::int64_t l,
                                  std::int64_t V, std::int64_t p, int D, std::int64_t B);

struct ModelLimits {
  std::int64_t V_max_raw = 0;
  std::int64_t V_max = 0;
  std::int64_t p_dsp = 0;
  std::int64_t p_mem = 0;
  std::int64_t p_max = 0;  ///< only for tiled designs
  std::int64_t M_opt = 0;  ///< memory-optimal square block width, rounded down to a multiple of V

  bool operator==(const ModelLimits&) const = default;
};

struct ModelReport {
  std::string mode;                    ///< "baseline", "batched" or "tiled"
  std::int64_t cycles = 0;             ///< whole run, all meshes of the batch
  double cycles_per_mesh = 0.0;
  double runtime_s = 0.0;
  double throughput_cells_per_cycle = 0.0;
  double bandwidth_bytes_per_s = 0.0;
  double valid_ratio = 1.0;
  std::int64_t iterations = 0;
  std::int64_t effective_iterations = 0;
  std::int64_t passes = 0;
  std::int64_t tiles = 1;
  std::int64_t bytes_read = 0;
  std::int64_t bytes_written = 0;
  ModelLimits limits;
  bool feasible = true;
  std::vector<Violation> violations;
};

/**
 * Full prediction for a design. Picks the cycle formula from the mesh
 * dimensionality, tiling and batching; bandwidth counts one read and one
 * write of the primary field plus one read per pointwise field per pass.
 * Infeasible designs are flagged in the report, not thrown.
 */
ModelReport predict(const DesignPoint& d, const PipelineSpec& pipe, const MeshGeometry& g,
                    std::int64_t n_iter, const ResourceProfile& r);
ModelReport predict(const DesignPoint& d, const StencilKernel& kernel, const MeshGeometry& g,
                    std::int64_t n_iter, const ResourceProfile& r);

}  // namespace meshpipe::model
