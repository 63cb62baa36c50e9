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

#include "meshpipe/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include "meshpipe/error.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/tiling.hpp"

namespace meshpipe::sim {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// In stream order a tap moves `slow` rows (2D) or planes (3D), `row` rows
// within a plane (3D only) and `dx` cells along x.
int slow_offset(const Offset& o, int ndim) { return ndim == 2 ? o[1] : o[2]; }
int row_offset(const Offset& o, int ndim) { return ndim == 2 ? 0 : o[1]; }

void check_causal(const PipelineSpec& pipe) {
  const int ndim = pipe.ndim();
  for (const Stage& st : pipe.stages()) {
    const int h = st.kernel.halo();
    for (const Tap& t : st.kernel.taps()) {
      if (slow_offset(t.offset, ndim) != h) continue;
      const int row = row_offset(t.offset, ndim);
      if (row > 0 || (row == 0 && t.offset[0] > 0)) {
        throw ConfigurationError("stage '" + st.name +
                                 "' reads ahead of its window buffer along the stream");
      }
    }
  }
}

WindowBuffer buffer_for(const Stage& st, int ndim, int V, std::int64_t row_vectors,
                        std::int64_t rows) {
  const std::int64_t slab = row_vectors * rows;
  const int h = st.kernel.halo();
  std::int64_t back = 0;
  for (const Tap& t : st.kernel.taps()) {
    std::int64_t b = -(slow_offset(t.offset, ndim) * slab + row_offset(t.offset, ndim) * row_vectors);
    if (t.offset[0] < 0) b += ceil_div(-t.offset[0], V);
    back = std::max(back, b);
  }
  WindowBuffer w;
  w.depth = st.kernel.order();
  w.lag_vectors = h * slab;
  w.capacity_vectors = w.lag_vectors + back + 1;
  w.window_cells = static_cast<std::int64_t>(w.depth) * slab * V;
  w.shift_register_cells = w.capacity_vectors * V - w.window_cells;
  return w;
}

void check_tile(const SimPipeline& sp, const TileShape& tile) {
  const MeshGeometry& g = sp.geometry();
  const DesignPoint& d = sp.design();
  const std::int64_t overlap =
      static_cast<std::int64_t>(d.p) * sp.spec().order_per_iteration();
  if (g.ndim() == 2 && tile.N != 0) {
    throw ConfigurationError("2D meshes are tiled in strips; tile N must be 0");
  }
  if (g.ndim() == 3 && tile.N <= 0) throw ConfigurationError("3D tiles need both M and N");
  if (tile.M % d.V != 0) {
    throw ConfigurationError("tile M = " + std::to_string(tile.M) +
                             " is not a multiple of V = " + std::to_string(d.V));
  }
  if (tile.M <= overlap || (g.ndim() == 3 && tile.N <= overlap)) {
    throw ConfigurationError("tile is not larger than its halo overlap p*D = " +
                             std::to_string(overlap));
  }
}

void check_capacity(const SimPipeline& sp, std::int64_t extent) {
  if (!sp.profile()) return;
  const ResourceProfile& r = *sp.profile();
  const int D = sp.spec().order_per_iteration();
  const std::int64_t k = sp.geometry().point_bytes();
  const std::int64_t p_mem = model::unroll_limit_mem(r.onchip_mem_bytes, r.mem_util_cap, k, D, extent);
  if (sp.design().p > p_mem) {
    throw CapacityError("window buffers for p = " + std::to_string(sp.design().p) +
                        " exceed on-chip memory: p_mem = floor(util * mem / (k * D * extent)) = " +
                        std::to_string(p_mem) + " with k = " + std::to_string(k) +
                        ", D = " + std::to_string(D) + ", extent = " + std::to_string(extent));
  }
}

void check_inputs(const SimPipeline& sp, std::span<const FieldSet> inputs) {
  if (inputs.empty()) throw ConfigurationError("no input meshes");
  for (const FieldSet& set : inputs) {
    sp.spec().check_inputs(set);
    if (!(set.primary.geometry() == sp.geometry())) {
      throw GeometryError("input mesh geometry differs from the pipeline's mesh geometry");
    }
  }
}

// One block (or the whole mesh, or a stacked batch) streamed through every
// stage instance of one pass.
struct Box {
  std::int64_t ex = 0;  // streamed extent along x
  std::int64_t ey = 1;  // rows per plane (3D); 1 for 2D
  std::int64_t ox = 0;  // mesh coordinate of box x = 0
  std::int64_t oy = 0;
  std::int64_t valid_x0 = 0, valid_x1 = 0;
  std::int64_t valid_y0 = 0, valid_y1 = 0;
};

struct StreamStats {
  std::int64_t cycles = 0;
  std::int64_t bytes_read = 0;
  std::int64_t bytes_written = 0;
  std::int64_t box_cells = 0;
};

class Stream {
 public:
  Stream(const SimPipeline& sp, std::span<const FieldSet> inputs,
         const std::vector<std::vector<float>>& source, std::vector<std::vector<float>>& dest)
      : sp_(sp), inputs_(inputs), source_(source), dest_(dest) {
    const MeshGeometry& g = sp.geometry();
    ndim_ = g.ndim();
    m_ = g.m();
    n_ = g.n();
    l_ = g.l();
    arity_ = g.arity();
    slots_ = sp.spec().slot_count();
    pointwise_ = sp.spec().pointwise_count();
    record_ = sp.spec().record_floats();
    V_ = sp.design().V;
    slow_per_mesh_ = ndim_ == 2 ? n_ : l_;
    point_bytes_ = g.point_bytes();
    read_bytes_ = point_bytes_ + static_cast<std::int64_t>(pointwise_) * g.element_bytes();
  }

  StreamStats run(const Box& box) {
    box_ = box;
    row_vectors_ = ceil_div(box.ex, V_);
    slab_ = row_vectors_ * box.ey;
    const std::int64_t meshes = static_cast<std::int64_t>(inputs_.size());
    const std::int64_t total = slab_ * meshes * slow_per_mesh_;

    const auto& instances = sp_.stages();
    const std::size_t count = instances.size();
    units_.resize(count);
    std::int64_t cum = 0;
    for (std::size_t s = 0; s < count; ++s) {
      Unit& u = units_[s];
      u.stage = &sp_.spec().stages()[static_cast<std::size_t>(instances[s].stage)];
      u.first_of_iteration = instances[s].stage == 0;
      u.halo = u.stage->kernel.halo();
      const WindowBuffer w = buffer_for(*u.stage, ndim_, V_, row_vectors_, box.ey);
      u.lag = w.lag_vectors;
      u.capacity = w.capacity_vectors;
      u.ring.assign(static_cast<std::size_t>(u.capacity * V_ * record_), 0.0f);
      u.received = 0;
      cum += u.lag;
      u.emit_delay = cum;
    }

    StreamStats stats;
    stats.box_cells = box.ex * box.ey * meshes * slow_per_mesh_;
    const auto vec_floats = static_cast<std::size_t>(V_ * record_);
    std::vector<float> carry(vec_floats);
    std::vector<float> next(vec_floats);

    for (std::int64_t t = 0;; ++t) {
      bool have = t < total;
      std::int64_t pos = t;
      if (have) read_vector(pos, carry, stats);
      for (Unit& u : units_) {
        if (have) push(u, pos, carry);
        const std::int64_t q = t - u.emit_delay;
        if (q >= 0 && q < total) {
          compute(u, q, next);
          std::swap(carry, next);
          pos = q;
          have = true;
        } else {
          have = false;
        }
      }
      ++stats.cycles;
      if (have) {
        write_vector(pos, carry, stats);
        if (pos == total - 1) break;
      }
    }
    return stats;
  }

 private:
  struct Unit {
    const Stage* stage = nullptr;
    bool first_of_iteration = false;
    int halo = 0;
    std::int64_t lag = 0;
    std::int64_t capacity = 0;
    std::int64_t emit_delay = 0;
    std::int64_t received = 0;
    std::vector<float> ring;
  };

  struct Cell {
    std::int64_t bx, by;        // box coordinates
    std::int64_t x, y, z;       // mesh coordinates
    std::int64_t mesh;          // batch index
    bool in_box, in_mesh;
  };

  Cell decode(std::int64_t pos, int lane) const {
    Cell c{};
    const std::int64_t slab = pos / slab_;
    const std::int64_t rem = pos % slab_;
    c.by = rem / row_vectors_;
    c.bx = (rem % row_vectors_) * V_ + lane;
    c.mesh = slab / slow_per_mesh_;
    const std::int64_t slow = slab % slow_per_mesh_;
    c.x = box_.ox + c.bx;
    if (ndim_ == 2) {
      c.y = slow;
      c.z = 0;
    } else {
      c.y = box_.oy + c.by;
      c.z = slow;
    }
    c.in_box = c.bx < box_.ex;
    c.in_mesh = c.in_box && c.x >= 0 && c.x < m_ && c.y >= 0 && c.y < n_;
    return c;
  }

  std::int64_t mesh_cell(const Cell& c) const { return (c.z * n_ + c.y) * m_ + c.x; }

  float* slot_at(Unit& u, std::int64_t pos, std::int64_t lane) {
    if (pos >= u.received || pos < u.received - u.capacity) {
      throw std::logic_error("window buffer access outside the buffered stream range");
    }
    const std::int64_t idx = ((pos % u.capacity) * V_ + lane) * record_;
    return u.ring.data() + idx;
  }

  void push(Unit& u, std::int64_t pos, const std::vector<float>& vec) {
    const auto base = static_cast<std::size_t>((pos % u.capacity) * V_ * record_);
    std::copy(vec.begin(), vec.end(), u.ring.begin() + static_cast<std::ptrdiff_t>(base));
    if (u.first_of_iteration) {
      // Slots other than the primary field are per-iteration temporaries.
      for (std::int64_t lane = 0; lane < V_; ++lane) {
        float* rec = u.ring.data() + base + static_cast<std::size_t>(lane * record_);
        std::fill(rec + arity_, rec + slots_ * arity_, 0.0f);
      }
    }
    u.received = pos + 1;
  }

  bool computed(const Cell& c, int h) const {
    if (!c.in_mesh) return false;
    if (c.x < h || c.x >= m_ - h || c.y < h || c.y >= n_ - h) return false;
    if (c.bx < h || c.bx >= box_.ex - h) return false;
    if (ndim_ == 3) {
      if (c.z < h || c.z >= l_ - h) return false;
      if (c.by < h || c.by >= box_.ey - h) return false;
    }
    return true;
  }

  void compute(Unit& u, std::int64_t q, std::vector<float>& out) {
    const Stage& st = *u.stage;
    const StencilKernel& k = st.kernel;
    const int pf_base = slots_ * arity_;
    for (int lane = 0; lane < V_; ++lane) {
      const Cell c = decode(q, lane);
      const float* self = slot_at(u, q, lane);
      float* rec = out.data() + static_cast<std::size_t>(lane * record_);
      std::copy(self, self + record_, rec);
      const bool inside = computed(c, u.halo);
      for (int comp = 0; comp < arity_; ++comp) {
        float value;
        if (inside) {
          float acc = 0.0f;
          for (const Tap& t : k.taps()) {
            float term = t.coefficient;
            if (t.field >= 0) term = term * self[pf_base + t.field];
            const std::int64_t nx = c.bx + t.offset[0];
            const std::int64_t npos = q +
                                      slow_offset(t.offset, ndim_) * slab_ +
                                      row_offset(t.offset, ndim_) * row_vectors_ +
                                      (nx / V_ - c.bx / V_);
            const float* nb = slot_at(u, npos, nx % V_);
            acc = acc + term * nb[st.source_slot * arity_ + comp];
          }
          if (!k.scale().empty()) {
            float factor = 0.0f;
            for (const FieldTerm& s : k.scale()) factor = factor + s.weight * self[pf_base + s.field];
            acc = acc * factor;
          }
          value = acc * st.result_scale;
        } else {
          value = st.boundary == BoundaryMode::kFreeze ? self[st.source_slot * arity_ + comp] : 0.0f;
        }
        rec[st.result_slot * arity_ + comp] = value;
        for (const SlotUpdate& up : st.updates) {
          float v = rec[up.base * arity_ + comp];
          for (const auto& [slot, w] : up.terms) v = v + rec[slot * arity_ + comp] * w;
          rec[up.target * arity_ + comp] = v;
        }
      }
    }
  }

  void read_vector(std::int64_t pos, std::vector<float>& vec, StreamStats& stats) {
    std::fill(vec.begin(), vec.end(), 0.0f);
    for (int lane = 0; lane < V_; ++lane) {
      const Cell c = decode(pos, lane);
      if (!c.in_mesh) continue;
      float* rec = vec.data() + static_cast<std::size_t>(lane * record_);
      const std::int64_t cell = mesh_cell(c);
      const auto& primary = source_[static_cast<std::size_t>(c.mesh)];
      for (int comp = 0; comp < arity_; ++comp) {
        rec[comp] = primary[static_cast<std::size_t>(cell * arity_ + comp)];
      }
      const FieldSet& set = inputs_[static_cast<std::size_t>(c.mesh)];
      for (int f = 0; f < pointwise_; ++f) {
        rec[slots_ * arity_ + f] =
            set.pointwise[static_cast<std::size_t>(f)].values()[static_cast<std::size_t>(cell)];
      }
      stats.bytes_read += read_bytes_;
    }
  }

  void write_vector(std::int64_t pos, const std::vector<float>& vec, StreamStats& stats) {
    for (int lane = 0; lane < V_; ++lane) {
      const Cell c = decode(pos, lane);
      if (!c.in_mesh) continue;
      if (c.x < box_.valid_x0 || c.x >= box_.valid_x1) continue;
      if (ndim_ == 3 && (c.y < box_.valid_y0 || c.y >= box_.valid_y1)) continue;
      const float* rec = vec.data() + static_cast<std::size_t>(lane * record_);
      auto& primary = dest_[static_cast<std::size_t>(c.mesh)];
      const std::int64_t cell = mesh_cell(c);
      for (int comp = 0; comp < arity_; ++comp) {
        primary[static_cast<std::size_t>(cell * arity_ + comp)] = rec[comp];
      }
      stats.bytes_written += point_bytes_;
    }
  }

  const SimPipeline& sp_;
  std::span<const FieldSet> inputs_;
  const std::vector<std::vector<float>>& source_;
  std::vector<std::vector<float>>& dest_;

  int ndim_ = 2;
  std::int64_t m_ = 1, n_ = 1, l_ = 1;
  int arity_ = 1;
  int slots_ = 1;
  int pointwise_ = 0;
  int record_ = 1;
  std::int64_t V_ = 1;
  std::int64_t slow_per_mesh_ = 1;
  std::int64_t point_bytes_ = 4;
  std::int64_t read_bytes_ = 4;

  Box box_;
  std::int64_t row_vectors_ = 1;
  std::int64_t slab_ = 1;
  std::vector<Unit> units_;
};

Box whole_mesh_box(const MeshGeometry& g) {
  Box b;
  b.ex = g.m();
  b.ey = g.ndim() == 3 ? g.n() : 1;
  b.valid_x1 = g.m();
  b.valid_y1 = g.n();
  return b;
}

SimResult start_result(const SimPipeline& sp, std::int64_t n_iter) {
  SimResult r;
  r.iterations = n_iter;
  r.effective_iterations = model::effective_iterations(n_iter, sp.design().p);
  r.passes = r.effective_iterations / sp.design().p;
  r.alu_latency_estimate = sp.alu_latency_estimate();
  return r;
}

void accumulate(SimResult& r, const StreamStats& s) {
  r.cycles += s.cycles;
  r.bytes_read += s.bytes_read;
  r.bytes_written += s.bytes_written;
  r.computed_cells += s.box_cells;
}

// Runs whole-mesh passes over one or more stacked meshes.
SimResult stream_whole(const SimPipeline& sp, std::span<const FieldSet> inputs,
                       std::int64_t n_iter) {
  const MeshGeometry& g = sp.geometry();
  SimResult r = start_result(sp, n_iter);
  std::vector<std::vector<float>> state;
  for (const FieldSet& set : inputs) state.emplace_back(set.primary.values().begin(), set.primary.values().end());
  std::vector<std::vector<float>> next = state;
  const Box box = whole_mesh_box(g);
  for (std::int64_t pass = 0; pass < r.passes; ++pass) {
    Stream stream(sp, inputs, state, next);
    accumulate(r, stream.run(box));
    std::swap(state, next);
  }
  for (auto& values : state) r.outputs.emplace_back(g, std::move(values));
  return r;
}

}  // namespace

std::vector<WindowBuffer> window_buffers(const PipelineSpec& pipe, int V, std::int64_t row_cells,
                                         std::int64_t rows_per_plane) {
  std::vector<WindowBuffer> out;
  for (const Stage& st : pipe.stages()) {
    out.push_back(buffer_for(st, pipe.ndim(), V, ceil_div(row_cells, V), rows_per_plane));
  }
  return out;
}

SimPipeline build_pipeline(const PipelineSpec& pipe, const DesignPoint& d, const MeshGeometry& g,
                           std::optional<ResourceProfile> profile) {
  d.validate();
  pipe.check_geometry(g);
  check_causal(pipe);
  if (profile) profile->validate();
  if (d.tile && d.batch > 1) {
    throw ConfigurationError("batching is not combined with spatial blocking");
  }

  SimPipeline sp(pipe, d, g, std::move(profile));
  if (d.tile) check_tile(sp, *d.tile);

  for (int it = 0; it < d.p; ++it) {
    for (int s = 0; s < static_cast<int>(pipe.stages().size()); ++s) {
      sp.stages_.push_back(StageInstance{it, s});
    }
  }
  std::int64_t row_cells = g.m();
  std::int64_t rows = g.ndim() == 3 ? g.n() : 1;
  if (d.tile) {
    row_cells = std::min(row_cells, d.tile->M);
    if (g.ndim() == 3) rows = std::min(rows, d.tile->N);
  }
  const auto per_iteration = window_buffers(pipe, d.V, row_cells, rows);
  for (int it = 0; it < d.p; ++it) {
    sp.buffers_.insert(sp.buffers_.end(), per_iteration.begin(), per_iteration.end());
  }
  sp.warnings_ = pipe.geometry_warnings(g);
  return sp;
}

SimResult simulate(const SimPipeline& sp, const FieldSet& inputs, std::int64_t n_iter) {
  check_inputs(sp, std::span<const FieldSet>(&inputs, 1));
  const MeshGeometry& g = sp.geometry();
  check_capacity(sp, g.ndim() == 2 ? g.m() : g.m() * g.n());
  return stream_whole(sp, std::span<const FieldSet>(&inputs, 1), n_iter);
}

SimResult simulate_batched(const SimPipeline& sp, std::span<const FieldSet> batch,
                           std::int64_t n_iter) {
  check_inputs(sp, batch);
  const MeshGeometry& g = sp.geometry();
  check_capacity(sp, g.ndim() == 2 ? g.m() : g.m() * g.n());
  return stream_whole(sp, batch, n_iter);
}

SimResult simulate_tiled(const SimPipeline& sp, const FieldSet& inputs, std::int64_t n_iter,
                         TileShape tile) {
  const auto one = std::span<const FieldSet>(&inputs, 1);
  check_inputs(sp, one);
  check_tile(sp, tile);
  const MeshGeometry& g = sp.geometry();
  const int D = sp.spec().order_per_iteration();
  const std::int64_t overlap = static_cast<std::int64_t>(sp.design().p) * D;

  const auto xs = tile_spans(g.m(), tile.M, overlap);
  const auto ys = g.ndim() == 3 ? tile_spans(g.n(), tile.N, overlap)
                                : std::vector<TileSpan>{TileSpan{0, 1, 0, g.n()}};
  const std::int64_t block_x = std::min(tile.M, g.m());
  const std::int64_t block_y = g.ndim() == 3 ? std::min(tile.N, g.n()) : 1;
  check_capacity(sp, g.ndim() == 2 ? block_x : block_x * block_y);

  auto valid = [&](const TileSpan& s, std::int64_t extent, std::int64_t block) {
    return block >= extent ? s.extent : s.extent - overlap;
  };
  std::int64_t valid_per_pass = 0;
  for (const TileSpan& sy : ys) {
    for (const TileSpan& sx : xs) {
      std::int64_t cells = valid(sx, g.m(), tile.M);
      cells *= g.ndim() == 3 ? valid(sy, g.n(), tile.N) * g.l() : g.n();
      valid_per_pass += cells;
    }
  }

  SimResult r = start_result(sp, n_iter);
  r.tiles = static_cast<std::int64_t>(xs.size() * ys.size());
  std::vector<std::vector<float>> state{
      std::vector<float>(inputs.primary.values().begin(), inputs.primary.values().end())};
  std::vector<std::vector<float>> next = state;
  for (std::int64_t pass = 0; pass < r.passes; ++pass) {
    Stream stream(sp, one, state, next);
    for (const TileSpan& sy : ys) {
      for (const TileSpan& sx : xs) {
        Box box;
        box.ex = sx.extent;
        box.ox = sx.origin;
        box.valid_x0 = sx.valid_begin;
        box.valid_x1 = sx.valid_end;
        if (g.ndim() == 3) {
          box.ey = sy.extent;
          box.oy = sy.origin;
          box.valid_y0 = sy.valid_begin;
          box.valid_y1 = sy.valid_end;
        } else {
          box.valid_y1 = g.n();
        }
        const StreamStats s = stream.run(box);
        if (pass == 0) r.tile_pass_cycles.push_back(s.cycles);
        accumulate(r, s);
      }
    }
    std::swap(state, next);
  }
  r.redundant_cells = r.computed_cells - r.passes * valid_per_pass;
  r.outputs.emplace_back(g, std::move(state.front()));
  return r;
}

SimResult run(const SimPipeline& sp, std::span<const FieldSet> inputs, std::int64_t n_iter) {
  const DesignPoint& d = sp.design();
  if (static_cast<int>(inputs.size()) != d.batch) {
    throw ConfigurationError("design batch size " + std::to_string(d.batch) + " but " +
                             std::to_string(inputs.size()) + " input meshes");
  }
  if (d.tile) return simulate_tiled(sp, inputs.front(), n_iter, *d.tile);
  if (d.batch > 1) return simulate_batched(sp, inputs, n_iter);
  return simulate(sp, inputs.front(), n_iter);
}

}  // namespace meshpipe::sim
