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

#include "meshpipe/tiling.hpp"

#include <algorithm>

#include "meshpipe/error.hpp"

namespace meshpipe {

std::int64_t TileSpan::in_mesh(std::int64_t mesh_extent) const {
  const std::int64_t lo = std::max<std::int64_t>(origin, 0);
  const std::int64_t hi = std::min(origin + extent, mesh_extent);
  return std::max<std::int64_t>(hi - lo, 0);
}

std::vector<TileSpan> tile_spans(std::int64_t mesh_extent, std::int64_t block,
                                 std::int64_t overlap) {
  if (mesh_extent < 1) throw InvalidArgument("mesh extent must be >= 1");
  if (block >= mesh_extent) return {TileSpan{0, mesh_extent, 0, mesh_extent}};
  if (overlap < 0 || overlap % 2 != 0) throw InvalidArgument("tile overlap must be even");
  if (block <= overlap) throw ConfigurationError("tile is not wider than its halo overlap");

  const std::int64_t stride = block - overlap;
  const std::int64_t count = (mesh_extent + stride - 1) / stride;
  std::vector<TileSpan> spans;
  spans.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    TileSpan s;
    s.origin = k * stride - overlap / 2;
    s.extent = block;
    s.valid_begin = k * stride;
    s.valid_end = std::min((k + 1) * stride, mesh_extent);
    spans.push_back(s);
  }
  return spans;
}

}  // namespace meshpipe
