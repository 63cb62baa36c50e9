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

#include "meshpipe/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "meshpipe/error.hpp"
#include "meshpipe/tiling.hpp"

namespace meshpipe::model {

namespace {

// Guards floor() against ratios like 7641.000000001 / 112 landing a hair low.
std::int64_t floor_ratio(double num, double den) {
  return static_cast<std::int64_t>(std::floor(num / den + 1e-9));
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t half_fill(std::int64_t p, int D) {
  if (D < 0 || D % 2 != 0) throw InvalidArgument("stencil order must be even and >= 0");
  return p * (D / 2);
}

void require_positive(std::int64_t v, const char* what) {
  if (v < 1) throw InvalidArgument(std::string(what) + " must be >= 1");
}

double fill_factor(double extent, double p, double D) {
  if (std::isinf(extent)) return 1.0;
  return extent / (extent + p * D / 2.0);
}

}  // namespace

VectorLimit vector_factor_limit(double bandwidth, double freq_hz, double elem_bytes) {
  if (!(bandwidth > 0 && freq_hz > 0 && elem_bytes > 0)) {
    throw InvalidArgument("bandwidth, frequency and element size must be > 0");
  }
  VectorLimit v;
  v.raw = floor_ratio(bandwidth, 2.0 * freq_hz * elem_bytes);
  v.rounded = v.raw > 0 ? static_cast<std::int64_t>(std::bit_floor(static_cast<std::uint64_t>(v.raw)))
                        : 0;
  return v;
}

std::int64_t max_vector_factor(double bandwidth, double freq_hz, double elem_bytes) {
  return vector_factor_limit(bandwidth, freq_hz, elem_bytes).rounded;
}

std::int64_t effective_iterations(std::int64_t n_iter, std::int64_t p) {
  require_positive(p, "p");
  if (n_iter < 0) throw InvalidArgument("iteration count must be >= 0");
  return ceil_div(n_iter, p) * p;
}

std::int64_t cycles_2d(std::int64_t m, std::int64_t n, std::int64_t V, std::int64_t p, int D,
                       std::int64_t n_iter) {
  require_positive(m, "m");
  require_positive(n, "n");
  require_positive(V, "V");
  const std::int64_t passes = effective_iterations(n_iter, p) / p;
  return passes * ceil_div(m, V) * (n + half_fill(p, D));
}

std::int64_t cycles_3d(std::int64_t m, std::int64_t n, std::int64_t l, std::int64_t V,
                       std::int64_t p, int D, std::int64_t n_iter) {
  require_positive(m, "m");
  require_positive(n, "n");
  require_positive(l, "l");
  require_positive(V, "V");
  const std::int64_t passes = effective_iterations(n_iter, p) / p;
  return passes * ceil_div(m, V) * n * (l + half_fill(p, D));
}

double cycles_per_cell_2d(double n, double V, double p, double D) {
  return 1.0 / V + p * D / (2.0 * n * V);
}

std::int64_t unroll_limit_dsp(std::int64_t dsp_total, double util, std::int64_t V,
                              std::int64_t dsp_per_point) {
  require_positive(V, "V");
  require_positive(dsp_per_point, "DSP cost per point");
  return floor_ratio(util * static_cast<double>(dsp_total),
                     static_cast<double>(V) * static_cast<double>(dsp_per_point));
}

std::int64_t unroll_limit_mem(double mem_bytes, double util, std::int64_t elem_bytes, int D,
                              std::int64_t buffered_extent) {
  require_positive(elem_bytes, "element size");
  require_positive(buffered_extent, "buffered extent");
  if (D == 0) return kUnbounded;
  return floor_ratio(util * mem_bytes, static_cast<double>(elem_bytes) * D *
                                           static_cast<double>(buffered_extent));
}

std::int64_t tile_valid_points(std::int64_t M, std::int64_t N, std::int64_t l, std::int64_t p,
                               int D) {
  const std::int64_t overlap = p * D;
  if (M <= overlap || N <= overlap) {
    throw ConfigurationError("block " + std::to_string(M) + "x" + std::to_string(N) +
                             " leaves no valid cells for pD = " + std::to_string(overlap));
  }
  return (M - overlap) * (N - overlap) * l;
}

std::int64_t tile_valid_points_2d(std::int64_t M, std::int64_t n, std::int64_t p, int D) {
  const std::int64_t overlap = p * D;
  if (M <= overlap) {
    throw ConfigurationError("strip width " + std::to_string(M) +
                             " leaves no valid cells for pD = " + std::to_string(overlap));
  }
  return (M - overlap) * n;
}

double tile_valid_ratio(std::int64_t M, std::int64_t N, std::int64_t p, int D) {
  if (N == 0) {
    return static_cast<double>(tile_valid_points_2d(M, 1, p, D)) / static_cast<double>(M);
  }
  return static_cast<double>(tile_valid_points(M, N, 1, p, D)) / static_cast<double>(M * N);
}

double tile_cycles_3d(double M, double N, double l, double V, double p, double D) {
  return (M / V) * N * (l + p * D / 2.0) / p;
}

double tile_cycles_2d(double M, double n, double V, double p, double D) {
  return (M / V) * (n + p * D / 2.0) / p;
}

double tile_throughput(double M, double N, double l, double V, double p, double D) {
  return (1.0 - p * D / M) * (1.0 - p * D / N) * p * V * fill_factor(l, p, D);
}

double tile_throughput_2d(double M, double n, double V, double p, double D) {
  return (1.0 - p * D / M) * p * V * fill_factor(n, p, D);
}

double optimal_tile_width_exact(double mem_bytes, double elem_bytes, double p, double D) {
  return std::sqrt(mem_bytes / (elem_bytes * p * D));
}

std::int64_t optimal_tile_width(double mem_bytes, double elem_bytes, std::int64_t p, int D) {
  require_positive(p, "p");
  if (D <= 0) return kUnbounded;
  const double exact =
      optimal_tile_width_exact(mem_bytes, elem_bytes, static_cast<double>(p), D);
  auto w = static_cast<std::int64_t>(std::floor(exact));
  // sqrt of a perfect square can come back a hair below the integer.
  if (static_cast<double>(w + 1) * static_cast<double>(w + 1) * elem_bytes *
          static_cast<double>(p) * D <=
      mem_bytes) {
    ++w;
  }
  return w;
}

std::int64_t optimal_unroll_tiled(std::int64_t M, int D) {
  require_positive(M, "M");
  if (D <= 0) throw InvalidArgument("stencil order must be > 0");
  return std::max<std::int64_t>(1, std::llround(static_cast<double>(M) / (3.0 * D)));
}

double tiled_throughput_bound_3d(double p, double D, double M, double dsp_total, double util,
                                 double dsp_per_point, double l) {
  const double valid = 1.0 - p * D / M;
  return valid * valid * (util * dsp_total / dsp_per_point) * fill_factor(l, p, D);
}

double tiled_throughput_bound_2d(double p, double D, double M, double dsp_total, double util,
                                 double dsp_per_point, double n) {
  return (1.0 - p * D / M) * (util * dsp_total / dsp_per_point) * fill_factor(n, p, D);
}

double cycles_batched_2d(std::int64_t m, std::int64_t n, std::int64_t V, std::int64_t p, int D,
                         std::int64_t B) {
  require_positive(B, "B");
  require_positive(V, "V");
  return static_cast<double>(ceil_div(m, V)) *
         (static_cast<double>(n) + static_cast<double>(p) * D / (2.0 * static_cast<double>(B)));
}

std::int64_t batch_pass_cycles_2d(std::int64_t m, std::int64_t n, std::int64_t V,
                                  std::int64_t p, int D, std::int64_t B) {
  require_positive(B, "B");
  require_positive(V, "V");
  return ceil_div(m, V) * (B * n + half_fill(p, D));
}

std::int64_t batch_pass_cycles_3d(std::int64_t m, std::int64_t n, std::int64_t l,
                                  std::int64_t V, std::int64_t p, int D, std::int64_t B) {
  require_positive(B, "B");
  require_positive(V, "V");
  return ceil_div(m, V) * n * (B * l + half_fill(p, D));
}

namespace {

struct PassShape {
  std::int64_t cycles = 0;
  std::int64_t read_cells = 0;
  std::int64_t tiles = 1;
};

// Mirrors the simulator's block sequencing so both count the same cycles.
PassShape tiled_pass(const DesignPoint& d, const MeshGeometry& g, int D) {
  const std::int64_t V = d.V;
  const std::int64_t overlap = static_cast<std::int64_t>(d.p) * D;
  const std::int64_t fill = half_fill(d.p, D);
  PassShape s;
  const auto xs = tile_spans(g.m(), d.tile->M, overlap);
  std::int64_t x_chunks = 0;
  std::int64_t x_in_mesh = 0;
  for (const TileSpan& t : xs) {
    x_chunks += ceil_div(t.extent, V);
    x_in_mesh += t.in_mesh(g.m());
  }
  if (g.ndim() == 2) {
    s.cycles = x_chunks * (g.n() + fill);
    s.read_cells = x_in_mesh * g.n();
    s.tiles = static_cast<std::int64_t>(xs.size());
    return s;
  }
  const auto ys = tile_spans(g.n(), d.tile->N, overlap);
  std::int64_t y_rows = 0;
  std::int64_t y_in_mesh = 0;
  for (const TileSpan& t : ys) {
    y_rows += t.extent;
    y_in_mesh += t.in_mesh(g.n());
  }
  s.cycles = x_chunks * y_rows * (g.l() + fill);
  s.read_cells = x_in_mesh * y_in_mesh * g.l();
  s.tiles = static_cast<std::int64_t>(xs.size() * ys.size());
  return s;
}

bool tile_shape_violated(const FeasibilityReport& f) {
  for (const Violation& v : f.violations) {
    if (v.constraint.rfind("tile", 0) == 0) return true;
  }
  return false;
}

}  // namespace

ModelReport predict(const DesignPoint& d, const PipelineSpec& pipe, const MeshGeometry& g,
                    std::int64_t n_iter, const ResourceProfile& r) {
  d.validate();
  r.validate();
  pipe.check_geometry(g);
  if (n_iter < 0) throw InvalidArgument("iteration count must be >= 0");

  const int D = pipe.order_per_iteration();
  const std::int64_t point_bytes = g.point_bytes();
  const std::int64_t read_bytes_per_cell =
      point_bytes + static_cast<std::int64_t>(pipe.pointwise_count()) * g.element_bytes();

  ModelReport rep;
  const FeasibilityReport feas = validate_design(d, r, pipe, g);
  rep.feasible = feas.pass();
  rep.violations = feas.violations;
  rep.iterations = n_iter;
  rep.effective_iterations = effective_iterations(n_iter, d.p);
  rep.passes = rep.effective_iterations / d.p;

  const VectorLimit vl = vector_factor_limit(r.aggregate_bandwidth(), d.freq_hz,
                                             static_cast<double>(point_bytes));
  rep.limits.V_max_raw = vl.raw;
  rep.limits.V_max = vl.rounded;
  rep.limits.p_dsp = unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, d.V, pipe.dsp_cost());
  rep.limits.p_mem =
      unroll_limit_mem(r.onchip_mem_bytes, r.mem_util_cap, point_bytes, D, buffered_extent(d, g));
  rep.limits.M_opt = optimal_tile_width(r.mem_util_cap * r.onchip_mem_bytes,
                                        static_cast<double>(point_bytes), d.p, D);
  if (rep.limits.M_opt != kUnbounded) rep.limits.M_opt = rep.limits.M_opt / d.V * d.V;
  if (d.tile && D > 0) rep.limits.p_max = optimal_unroll_tiled(d.tile->M, D);

  const std::int64_t B = d.batch;
  PassShape pass;
  if (d.tile) {
    rep.mode = "tiled";
    if (tile_shape_violated(feas)) return rep;
    pass = tiled_pass(d, g, D);
    rep.valid_ratio = 1.0;
    if (d.tile->M < g.m()) rep.valid_ratio *= tile_valid_ratio(d.tile->M, 0, d.p, D);
    if (g.ndim() == 3 && d.tile->N < g.n()) {
      rep.valid_ratio *= tile_valid_ratio(d.tile->N, 0, d.p, D);
    }
  } else {
    rep.mode = B > 1 ? "batched" : "baseline";
    pass.cycles = g.ndim() == 2 ? batch_pass_cycles_2d(g.m(), g.n(), d.V, d.p, D, B)
                                : batch_pass_cycles_3d(g.m(), g.n(), g.l(), d.V, d.p, D, B);
    pass.read_cells = B * g.cells();
  }
  rep.tiles = pass.tiles;
  rep.cycles = rep.passes * pass.cycles;
  rep.cycles_per_mesh = static_cast<double>(rep.cycles) / static_cast<double>(B);
  rep.bytes_read = rep.passes * pass.read_cells * read_bytes_per_cell;
  rep.bytes_written = rep.passes * B * g.cells() * point_bytes;
  rep.runtime_s = static_cast<double>(rep.cycles) / d.freq_hz;
  if (rep.cycles > 0) {
    rep.throughput_cells_per_cycle = static_cast<double>(B * g.cells()) *
                                     static_cast<double>(n_iter) /
                                     static_cast<double>(rep.cycles);
    rep.bandwidth_bytes_per_s =
        static_cast<double>(rep.bytes_read + rep.bytes_written) / rep.runtime_s;
  }
  return rep;
}

ModelReport predict(const DesignPoint& d, const StencilKernel& kernel, const MeshGeometry& g,
                    std::int64_t n_iter, const ResourceProfile& r) {
  return predict(d, PipelineSpec::single(kernel), g, n_iter, r);
}

}  // namespace meshpipe::model
