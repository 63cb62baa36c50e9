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

#include "meshpipe/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "meshpipe/error.hpp"

namespace meshpipe {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace

DspEstimate estimate_dsp_cost(std::span<const Tap> taps, std::span<const FieldTerm> scale,
                              int arity) {
  DspEstimate e;
  for (const Tap& t : taps) e.multiplies += t.field >= 0 ? 2 : 1;
  if (!taps.empty()) e.adds += static_cast<std::int64_t>(taps.size()) - 1;
  if (!scale.empty()) {
    e.multiplies += static_cast<std::int64_t>(scale.size()) + 1;
    e.adds += static_cast<std::int64_t>(scale.size()) - 1;
  }
  e.multiplies *= arity;
  e.adds *= arity;
  e.dsp_blocks = e.multiplies * kDspPerMultiply + e.adds * kDspPerAdd;
  return e;
}

StencilKernel::StencilKernel(int ndim, std::vector<Tap> taps, int arity,
                             std::vector<std::string> pointwise_fields,
                             std::vector<FieldTerm> scale, std::int64_t dsp_cost)
    : ndim_(ndim),
      taps_(std::move(taps)),
      arity_(arity),
      pointwise_fields_(std::move(pointwise_fields)),
      scale_(std::move(scale)) {
  require(ndim_ == 2 || ndim_ == 3, "kernel must be 2D or 3D");
  require(arity_ >= 1, "kernel arity must be >= 1");
  require(dsp_cost >= 0, "dsp cost must be non-negative");
  const int fields = static_cast<int>(pointwise_fields_.size());
  int max_offset = 0;
  for (const Tap& t : taps_) {
    require(std::isfinite(t.coefficient), "tap coefficient must be finite");
    require(t.field >= -1 && t.field < fields, "tap references an unknown pointwise field");
    if (ndim_ == 2) require(t.offset[2] == 0, "2D kernel tap has a z offset");
    for (int o : t.offset) max_offset = std::max(max_offset, std::abs(o));
  }
  for (const FieldTerm& s : scale_) {
    require(s.field >= 0 && s.field < fields, "scale term references an unknown pointwise field");
    require(std::isfinite(s.weight), "scale weight must be finite");
  }
  order_ = 2 * max_offset;
  if (dsp_cost > 0) {
    dsp_cost_ = dsp_cost;
  } else if (!taps_.empty()) {
    dsp_cost_ = estimate_dsp_cost(taps_, scale_, arity_).dsp_blocks;
    dsp_cost_estimated_ = true;
  }
}

MeshGeometry::MeshGeometry(std::vector<std::int64_t> dims, int arity, int element_bytes)
    : dims_(std::move(dims)), arity_(arity), element_bytes_(element_bytes) {
  require(dims_.size() == 2 || dims_.size() == 3, "mesh must have 2 or 3 dims");
  for (std::int64_t d : dims_) require(d >= 1, "mesh dims must be >= 1");
  require(arity_ >= 1, "mesh arity must be >= 1");
  require(element_bytes_ >= 1, "element size must be >= 1 byte");
}

std::int64_t MeshGeometry::cells() const {
  std::int64_t c = 1;
  for (std::int64_t d : dims_) c *= d;
  return c;
}

MeshGeometry MeshGeometry::with_arity(int arity) const {
  return MeshGeometry(dims_, arity, element_bytes_);
}

FieldData::FieldData(MeshGeometry geometry, std::vector<float> values)
    : geometry_(std::move(geometry)), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != geometry_.value_count()) {
    std::ostringstream os;
    os << "field has " << values_.size() << " values, geometry needs "
       << geometry_.value_count();
    throw GeometryError(os.str());
  }
  for (float v : values_) require(std::isfinite(v), "field values must be finite");
}

FieldData FieldData::filled(const MeshGeometry& geometry, float value) {
  return FieldData(geometry,
                   std::vector<float>(static_cast<std::size_t>(geometry.value_count()), value));
}

std::int64_t FieldData::index(std::int64_t x, std::int64_t y, std::int64_t z,
                              int component) const {
  return ((z * geometry_.n() + y) * geometry_.m() + x) * geometry_.arity() + component;
}

bool FieldData::operator==(const FieldData& other) const { return bitwise_equal(*this, other); }

bool bitwise_equal(const FieldData& a, const FieldData& b) {
  if (!(a.geometry() == b.geometry())) return false;
  return std::memcmp(a.values().data(), b.values().data(), a.values().size_bytes()) == 0;
}

void ResourceProfile::validate() const {
  require(dsp_total > 0, "dsp_total must be > 0");
  require(onchip_mem_bytes > 0, "onchip_mem_bytes must be > 0");
  require(channel_bw > 0, "channel_bw must be > 0");
  require(num_ports >= 1, "num_ports must be >= 1");
  require(freq_hz > 0, "freq_hz must be > 0");
  require(dsp_util_cap > 0 && dsp_util_cap <= 1, "dsp_util_cap must be in (0, 1]");
  require(mem_util_cap > 0 && mem_util_cap <= 1, "mem_util_cap must be in (0, 1]");
}

ResourceProfile ResourceProfile::u280_ddr4() {
  ResourceProfile r;
  r.dsp_total = 8490;
  r.onchip_mem_bytes = 34.5e6;
  r.channel_bw = 19.2e9;
  r.num_ports = 1;
  r.freq_hz = 300e6;
  return r;
}

ResourceProfile ResourceProfile::u280_hbm(int channels) {
  ResourceProfile r = u280_ddr4();
  r.channel_bw = 460e9 / 32;
  r.num_ports = channels;
  return r;
}

void DesignPoint::validate() const {
  require(V >= 1, "V must be >= 1");
  require(p >= 1, "p must be >= 1");
  require(batch >= 1, "batch size must be >= 1");
  require(freq_hz > 0, "design frequency must be > 0");
  if (tile) {
    require(tile->M >= 1, "tile M must be >= 1");
    require(tile->N >= 0, "tile N must be >= 0");
  }
}

PipelineSpec::PipelineSpec(std::string name, std::vector<Stage> stages, int slot_count,
                           std::int64_t dsp_cost)
    : name_(std::move(name)), stages_(std::move(stages)), slot_count_(slot_count) {
  require(!stages_.empty(), "pipeline needs at least one stage");
  require(slot_count_ >= 1, "pipeline needs at least one slot");
  const int ndim = stages_.front().kernel.ndim();
  const int arity = stages_.front().kernel.arity();
  auto slot_ok = [&](int s) { return s >= 0 && s < slot_count_; };
  std::int64_t dsp_sum = 0;
  for (const Stage& st : stages_) {
    if (st.kernel.ndim() != ndim || st.kernel.arity() != arity) {
      throw GeometryError("stage '" + st.name + "' disagrees with the pipeline on dims or arity");
    }
    require(slot_ok(st.source_slot) && slot_ok(st.result_slot),
            "stage '" + st.name + "' references an unknown slot");
    require(std::isfinite(st.result_scale), "result scale must be finite");
    for (const SlotUpdate& u : st.updates) {
      require(slot_ok(u.target) && slot_ok(u.base), "slot update references an unknown slot");
      for (const auto& [slot, w] : u.terms) {
        require(slot_ok(slot) && std::isfinite(w), "slot update term is invalid");
      }
    }
    const auto& pf = st.kernel.pointwise_fields();
    if (!pf.empty()) {
      if (pointwise_fields_.empty()) {
        pointwise_fields_ = pf;
      } else if (pf != pointwise_fields_) {
        throw GeometryError("stages disagree on pointwise fields");
      }
    }
    dsp_sum += st.kernel.dsp_cost();
  }
  require(dsp_cost >= 0, "dsp cost must be non-negative");
  dsp_cost_ = dsp_cost > 0 ? dsp_cost : dsp_sum;
}

PipelineSpec PipelineSpec::single(StencilKernel kernel, std::string name) {
  Stage st{name, std::move(kernel), 0, 0, 1.0f, BoundaryMode::kFreeze, {}};
  return PipelineSpec(std::move(name), {std::move(st)});
}

int PipelineSpec::order_per_iteration() const {
  int d = 0;
  for (const Stage& st : stages_) d += st.kernel.order();
  return d;
}

std::vector<int> PipelineSpec::window_depths() const {
  std::vector<int> out;
  out.reserve(stages_.size());
  for (const Stage& st : stages_) out.push_back(st.kernel.order());
  return out;
}

PipelineSpec PipelineSpec::with_plane_limits(std::int64_t min_extent,
                                             std::int64_t advisory_area) const {
  PipelineSpec copy = *this;
  copy.min_plane_extent_ = min_extent;
  copy.advisory_plane_area_ = advisory_area;
  return copy;
}

void PipelineSpec::check_geometry(const MeshGeometry& g) const {
  if (g.ndim() != ndim()) {
    throw GeometryError("pipeline '" + name_ + "' is " + std::to_string(ndim()) +
                        "D but the mesh is " + std::to_string(g.ndim()) + "D");
  }
  if (g.arity() != arity()) {
    throw GeometryError("pipeline arity " + std::to_string(arity()) +
                        " does not match mesh arity " + std::to_string(g.arity()));
  }
  if (min_plane_extent_ > 0 && (g.m() < min_plane_extent_ || g.n() < min_plane_extent_)) {
    throw GeometryError("mesh plane " + std::to_string(g.m()) + "x" + std::to_string(g.n()) +
                        " is smaller than the stencil order " +
                        std::to_string(min_plane_extent_));
  }
}

std::vector<std::string> PipelineSpec::geometry_warnings(const MeshGeometry& g) const {
  std::vector<std::string> out;
  if (advisory_plane_area_ > 0 && g.m() * g.n() > advisory_plane_area_) {
    out.push_back("mesh plane " + std::to_string(g.m()) + "x" + std::to_string(g.n()) +
                  " exceeds the advisory plane area of " + std::to_string(advisory_plane_area_) +
                  " cells for '" + name_ + "'");
  }
  return out;
}

void PipelineSpec::check_inputs(const FieldSet& inputs) const {
  check_geometry(inputs.primary.geometry());
  if (static_cast<int>(inputs.pointwise.size()) != pointwise_count()) {
    throw GeometryError("pipeline '" + name_ + "' needs " + std::to_string(pointwise_count()) +
                        " pointwise fields, got " + std::to_string(inputs.pointwise.size()));
  }
  const MeshGeometry scalar = inputs.primary.geometry().with_arity(1);
  for (const FieldData& f : inputs.pointwise) {
    if (!(f.geometry() == scalar)) throw GeometryError("pointwise field geometry mismatch");
  }
}

}  // namespace meshpipe
