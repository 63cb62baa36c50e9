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

#include "meshpipe/reference.hpp"

#include <algorithm>

#include "meshpipe/error.hpp"

namespace meshpipe::reference {

namespace {

using Slots = std::vector<std::vector<float>>;

struct Mesh {
  std::int64_t m, n, l;
  int arity;

  std::int64_t cell(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return (z * n + y) * m + x;
  }
  bool interior(std::int64_t x, std::int64_t y, std::int64_t z, int h, int ndim) const {
    if (x < h || x >= m - h || y < h || y >= n - h) return false;
    return ndim == 2 || (z >= h && z < l - h);
  }
};

void apply_stage(const Stage& st, int ndim, const Mesh& mesh,
                 const std::vector<std::vector<float>>& pointwise, const Slots& in, Slots& out) {
  out = in;
  const StencilKernel& k = st.kernel;
  const int h = k.halo();
  const int a = mesh.arity;
  const std::vector<float>& src = in[static_cast<std::size_t>(st.source_slot)];
  std::vector<float>& result = out[static_cast<std::size_t>(st.result_slot)];

  for (std::int64_t z = 0; z < mesh.l; ++z) {
    for (std::int64_t y = 0; y < mesh.n; ++y) {
      for (std::int64_t x = 0; x < mesh.m; ++x) {
        const std::int64_t cell = mesh.cell(x, y, z);
        const bool inside = mesh.interior(x, y, z, h, ndim);
        for (int c = 0; c < a; ++c) {
          const auto self = static_cast<std::size_t>(cell * a + c);
          float value;
          if (inside) {
            float acc = 0.0f;
            for (const Tap& t : k.taps()) {
              float term = t.coefficient;
              if (t.field >= 0) term = term * pointwise[static_cast<std::size_t>(t.field)][cell];
              const std::int64_t nb = mesh.cell(x + t.offset[0], y + t.offset[1], z + t.offset[2]);
              acc = acc + term * src[static_cast<std::size_t>(nb * a + c)];
            }
            if (!k.scale().empty()) {
              float factor = 0.0f;
              for (const FieldTerm& s : k.scale()) {
                factor = factor + s.weight * pointwise[static_cast<std::size_t>(s.field)][cell];
              }
              acc = acc * factor;
            }
            value = acc * st.result_scale;
          } else {
            value = st.boundary == BoundaryMode::kFreeze ? src[self] : 0.0f;
          }
          result[self] = value;
          for (const SlotUpdate& u : st.updates) {
            float v = out[static_cast<std::size_t>(u.base)][self];
            for (const auto& [slot, w] : u.terms) {
              v = v + out[static_cast<std::size_t>(slot)][self] * w;
            }
            out[static_cast<std::size_t>(u.target)][self] = v;
          }
        }
      }
    }
  }
}

}  // namespace

FieldData run_reference(const PipelineSpec& pipe, const FieldSet& inputs, std::int64_t n_iter) {
  pipe.check_inputs(inputs);
  if (n_iter < 0) throw InvalidArgument("iteration count must be >= 0");
  const MeshGeometry& g = inputs.primary.geometry();
  const Mesh mesh{g.m(), g.n(), g.l(), g.arity()};

  std::vector<std::vector<float>> pointwise;
  for (const FieldData& f : inputs.pointwise) {
    pointwise.emplace_back(f.values().begin(), f.values().end());
  }

  const auto slot_size = static_cast<std::size_t>(g.value_count());
  Slots state(static_cast<std::size_t>(pipe.slot_count()), std::vector<float>(slot_size, 0.0f));
  state[0].assign(inputs.primary.values().begin(), inputs.primary.values().end());
  Slots next;
  for (std::int64_t it = 0; it < n_iter; ++it) {
    // Slots other than the primary field are per-iteration temporaries.
    for (std::size_t slot = 1; slot < state.size(); ++slot) {
      std::fill(state[slot].begin(), state[slot].end(), 0.0f);
    }
    for (const Stage& st : pipe.stages()) {
      apply_stage(st, pipe.ndim(), mesh, pointwise, state, next);
      std::swap(state, next);
    }
  }
  return FieldData(g, std::move(state[0]));
}

std::vector<FieldData> run_reference_batch(const PipelineSpec& pipe,
                                           std::span<const FieldSet> batch, std::int64_t n_iter) {
  std::vector<FieldData> out;
  out.reserve(batch.size());
  for (const FieldSet& set : batch) {
    if (!(set.primary.geometry() == batch.front().primary.geometry())) {
      throw GeometryError("batched meshes must share one geometry");
    }
  }
  for (const FieldSet& set : batch) out.push_back(run_reference(pipe, set, n_iter));
  return out;
}

}  // namespace meshpipe::reference
