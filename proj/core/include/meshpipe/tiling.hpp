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

#pragma once

#include <cstdint>
#include <vector>

namespace meshpipe {

/// Placement of one block along one mesh dimension. The block covers
/// [origin, origin + extent) and may extend past either mesh edge; cells
/// outside the mesh are virtual. Its results are kept on [valid_begin, valid_end).
struct TileSpan {
  std::int64_t origin = 0;
  std::int64_t extent = 0;
  std::int64_t valid_begin = 0;
  std::int64_t valid_end = 0;

  /// Cells of the block that lie inside [0, mesh_extent).
  std::int64_t in_mesh(std::int64_t mesh_extent) const;
};

/**
 * Overlapping blocks of width `block` along a dimension of `mesh_extent`
 * cells. Consecutive blocks overlap by `overlap` (= p * D) cells and each
 * keeps the `block - overlap` cells in its middle. The first block starts at
 * -overlap / 2 so that every block is full width. When the block is at least
 * as wide as the mesh a single exact span with no overlap is returned.
 */
std::vector<TileSpan> tile_spans(std::int64_t mesh_extent, std::int64_t block,
                                 std::int64_t overlap);

}  // namespace meshpipe
