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
 * @file field_io.hpp
 * @brief Mesh data files.
 *
 * Binary layout (all little-endian):
 *
 *   offset  size  field
 *        0     4  magic "STNF"
 *        4     4  version (1)
 *        8     4  ndim (2 or 3)
 *       12     4  m
 *       16     4  n
 *       20     4  l (1 for 2D)
 *       24     4  arity
 *       28     4  count (meshes stored back to back)
 *       32     .  count * m * n * l * arity float32 values, m fastest
 *
 * The text form is for small hand-written cases:
 *
 *   # comments run to end of line
 *   dims 5 5
 *   arity 1
 *   count 1
 *   values
 *   0 0 0 ...
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "meshpipe/core.hpp"

namespace meshpipe::cli {

inline constexpr std::uint32_t kStnfVersion = 1;

void write_stnf(std::ostream& out, const std::vector<FieldData>& fields);
std::vector<FieldData> read_stnf(std::istream& in, int element_bytes = 4);

std::vector<FieldData> read_field_text(std::istream& in, int element_bytes = 4);

/// Writes STNF. Throws Error on I/O failure or mixed geometries.
void save_fields(const std::filesystem::path& path, const std::vector<FieldData>& fields);
/// Reads STNF, or the text form when the file ends in ".txt".
std::vector<FieldData> load_fields(const std::filesystem::path& path, int element_bytes = 4);

}  // namespace meshpipe::cli
