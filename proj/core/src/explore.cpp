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


#include "meshpipe/explore.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <tuple>

#include "meshpipe/error.hpp"

namespace meshpipe::explore {

namespace {

std::int64_t round_up(std::int64_t a, std::int64_t b) { return (a + b - 1) / b * b; }

struct Sweep {
  const ResourceProfile& r;
  const PipelineSpec& pipe;
  const MeshGeometry& g;
  const Constraints& c;
  int D;
  std::int64_t k;

  std::int64_t p_mem(std::int64_t extent) const {
    return model::unroll_limit_mem(r.onchip_mem_bytes, r.mem_util_cap, k, D, extent);
  }

  std::int64_t p_cap(std::int64_t p_dsp) const {
    return c.max_p ? std::min(p_dsp, *c.max_p) : p_dsp;
  }

  std::vector<std::int64_t> p_values(std::int64_t hi) const {
    if (c.p) return {*c.p};
    std::vector<std::int64_t> out;
    for (std::int64_t p = 1; p <= hi; ++p) out.push_back(p);
    return out;
  }

  std::vector<TileShape> tiles(std::int64_t V, std::int64_t p) const {
    if (c.tile) return {*c.tile};
    std::vector<TileShape> out;
    const std::int64_t overlap = p * D;
    if (g.ndim() == 2) {
      for (std::int64_t M = V; M < g.m(); M *= 2) {
        if (M <= overlap) continue;
        if (p_mem(M) < p) break;
        out.push_back({M, 0});
      }
      return out;
    }
    const std::int64_t M_opt = model::optimal_tile_width(r.mem_util_cap * r.onchip_mem_bytes,
                                                         static_cast<double>(k), p, D);
    const std::int64_t hi = std::min(2 * M_opt, round_up(std::max(g.m(), g.n()), V));
    for (std::int64_t M = (overlap / V + 1) * V; M <= hi; M += V) {
      if (M >= g.m() && M >= g.n()) break;
      out.push_back({M, M});
    }
    return out;
  }

  std::vector<DesignPoint> generate(std::int64_t& evaluated) const {
    std::vector<DesignPoint> out;
    const bool untiled = c.tiling != Tiling::kOnly && !c.tile;
    const bool tiled = c.tiling != Tiling::kNever && D > 0;
    const std::vector<std::int64_t> batches =
        c.batch ? std::vector<std::int64_t>{*c.batch} : c.batch_sizes;
    const std::int64_t full_extent = g.ndim() == 2 ? g.m() : g.m() * g.n();

    for (double f : c.frequencies) {
      const std::int64_t vmax =
          model::max_vector_factor(r.aggregate_bandwidth(), f, static_cast<double>(k));
      std::vector<std::int64_t> Vs;
      if (c.V) {
        Vs.push_back(*c.V);
      } else {
        for (std::int64_t V = 1; V <= vmax; V *= 2) Vs.push_back(V);
      }
      for (std::int64_t V : Vs) {
        const std::int64_t p_dsp = model::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, V,
                                                           pipe.dsp_cost());
        if (untiled) {
          const std::int64_t hi = std::min(p_cap(p_dsp), p_mem(full_extent));
          for (std::int64_t p : p_values(hi)) {
            for (std::int64_t B : batches) {
              out.push_back(DesignPoint{static_cast<int>(V), static_cast<int>(p), std::nullopt,
                                        static_cast<int>(B), f});
            }
          }
        }
        if (tiled) {
          for (std::int64_t p : p_values(p_cap(p_dsp))) {
            for (const TileShape& t : tiles(V, p)) {
              const std::int64_t extent =
                  g.ndim() == 2 ? std::min(t.M, g.m())
                                : std::min(t.M, g.m()) * std::min(t.N, g.n());
              if (p_mem(extent) < p) {
                ++evaluated;
                continue;
              }
              out.push_back(DesignPoint{static_cast<int>(V), static_cast<int>(p), t, 1, f});
            }
          }
        }
      }
    }
    evaluated += static_cast<std::int64_t>(out.size());
    return out;
  }

  std::string binding() const {
    double f_min = c.frequencies.front();
    for (double f : c.frequencies) f_min = std::min(f_min, f);
    if (model::max_vector_factor(r.aggregate_bandwidth(), f_min, static_cast<double>(k)) < 1) {
      return "V_max<1";
    }
    if (model::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, 1, pipe.dsp_cost()) < 1) {
      return "p_dsp<1";
    }
    if (p_mem(g.ndim() == 2 ? g.m() : g.m() * g.n()) < 1) return "p_mem<1";
    return "constraints";
  }
};

auto rank_key(const Candidate& c) {
  const TileShape tile = c.design.tile.value_or(TileShape{0, 0});
  return std::make_tuple(-c.report.throughput_cells_per_cycle, c.report.runtime_s, c.design.p,
                         c.design.V, c.design.tile.has_value(), tile, c.design.batch,
                         -c.design.freq_hz);
}

}  // namespace

bool ranks_before(const Candidate& a, const Candidate& b) { return rank_key(a) < rank_key(b); }

Exploration enumerate_designs(const ResourceProfile& r, const PipelineSpec& pipe,
                              const MeshGeometry& g, const Constraints& c) {
  r.validate();
  pipe.check_geometry(g);
  if (c.frequencies.empty()) throw InvalidArgument("explore needs at least one frequency");
  if (c.iterations < 1) throw InvalidArgument("explore needs a positive iteration count");
  if (c.jobs < 1) throw InvalidArgument("jobs must be >= 1");
  if (!c.batch && c.batch_sizes.empty()) throw InvalidArgument("explore needs a batch size");
  if ((c.V && *c.V < 1) || (c.p && *c.p < 1) || (c.batch && *c.batch < 1)) {
    throw InvalidArgument("pinned V, p and batch must be >= 1");
  }
  for (std::int64_t B : c.batch_sizes) {
    if (B < 1) throw InvalidArgument("batch sizes must be >= 1");
  }

  const Sweep sweep{r, pipe, g, c, pipe.order_per_iteration(), g.point_bytes()};
  Exploration ex;
  const std::vector<DesignPoint> points = sweep.generate(ex.evaluated);

  std::vector<std::optional<Candidate>> slots(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const DesignPoint& d = points[i];
      model::ModelReport rep = model::predict(d, pipe, g, c.iterations, r);
      if (rep.feasible) slots[i] = Candidate{d, std::move(rep)};
    }
  };
  const auto workers = static_cast<std::size_t>(
      std::min<std::int64_t>(c.jobs, static_cast<std::int64_t>(points.size())));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (auto& s : slots) {
    if (s) ex.designs.push_back(std::move(*s));
  }
  std::sort(ex.designs.begin(), ex.designs.end(), ranks_before);
  if (ex.designs.empty()) ex.binding_constraint = sweep.binding();
  return ex;
}

std::optional<Candidate> best_design(const ResourceProfile& r, const PipelineSpec& pipe,
                                     const MeshGeometry& g, const Constraints& c) {
  Exploration ex = enumerate_designs(r, pipe, g, c);
  if (ex.designs.empty()) return std::nullopt;
  return std::move(ex.designs.front());
}

}  // namespace meshpipe::explore
