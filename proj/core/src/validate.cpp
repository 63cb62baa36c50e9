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

#include "meshpipe/validate.hpp"

#include <algorithm>
#include <sstream>

#include "meshpipe/model.hpp"

namespace meshpipe {

namespace {

void add(FeasibilityReport& rep, std::string key, double value, double limit,
         const std::string& detail) {
  std::ostringstream os;
  os << key << ": " << detail << " (value " << value << ", limit " << limit << ")";
  rep.violations.push_back(Violation{std::move(key), value, limit, os.str()});
}

}  // namespace

bool FeasibilityReport::violates(const std::string& constraint) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.constraint == constraint; });
}

std::string FeasibilityReport::summary() const {
  if (pass()) return "pass";
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

std::int64_t buffered_extent(const DesignPoint& d, const MeshGeometry& g) {
  std::int64_t x = g.m();
  std::int64_t y = g.n();
  if (d.tile) {
    x = std::min(x, d.tile->M);
    if (d.tile->N > 0) y = std::min(y, d.tile->N);
  }
  return g.ndim() == 2 ? x : x * y;
}

FeasibilityReport validate_design(const DesignPoint& d, const ResourceProfile& r,
                                  const PipelineSpec& pipe, const MeshGeometry& g) {
  d.validate();
  r.validate();
  pipe.check_geometry(g);

  FeasibilityReport rep;
  const int D = pipe.order_per_iteration();
  const std::int64_t k = g.point_bytes();

  const auto vmax = model::max_vector_factor(r.aggregate_bandwidth(), d.freq_hz,
                                             static_cast<double>(k));
  if (d.V > vmax) {
    add(rep, "V>V_max", d.V, static_cast<double>(vmax),
        "vector factor exceeds the memory channel bandwidth bound");
  }

  const auto p_dsp = model::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, d.V, pipe.dsp_cost());
  if (d.p > p_dsp) {
    add(rep, "p>p_dsp", d.p, static_cast<double>(p_dsp), "unroll depth exceeds the DSP budget");
  }

  if (d.tile) {
    const std::int64_t overlap = static_cast<std::int64_t>(d.p) * D;
    if (d.batch > 1) {
      add(rep, "tile+batch", d.batch, 1, "batching is not combined with spatial blocking");
    }
    const bool strip = g.ndim() == 2;
    if (strip != (d.tile->N == 0)) {
      add(rep, "tile.shape", static_cast<double>(d.tile->N), 0,
          strip ? "2D meshes use strip tiles (M only)" : "3D meshes need both M and N");
    }
    if (d.tile->M <= overlap) {
      add(rep, "tile.M<=pD", static_cast<double>(d.tile->M), static_cast<double>(overlap),
          "block width must exceed p*D");
    }
    if (!strip && d.tile->N > 0 && d.tile->N <= overlap) {
      add(rep, "tile.N<=pD", static_cast<double>(d.tile->N), static_cast<double>(overlap),
          "block height must exceed p*D");
    }
    if (d.tile->M % d.V != 0) {
      add(rep, "tile.M%V", static_cast<double>(d.tile->M % d.V), 0,
          "block width must be a multiple of V");
    }
  }

  const auto p_mem =
      model::unroll_limit_mem(r.onchip_mem_bytes, r.mem_util_cap, k, D, buffered_extent(d, g));
  if (d.p > p_mem) {
    add(rep, "p>p_mem", d.p, static_cast<double>(p_mem),
        "window buffers exceed the on-chip memory budget");
  }
  return rep;
}

FeasibilityReport validate_design(const DesignPoint& d, const ResourceProfile& r,
                                  const StencilKernel& kernel, const MeshGeometry& g) {
  return validate_design(d, r, PipelineSpec::single(kernel), g);
}

}  // namespace meshpipe
