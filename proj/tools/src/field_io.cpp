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


#include "meshpipe_cli/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "meshpipe/error.hpp"

namespace meshpipe::cli {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw Error("truncated STNF header");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

MeshGeometry geometry_from(std::uint32_t ndim, std::uint32_t m, std::uint32_t n, std::uint32_t l,
                           std::uint32_t arity, int element_bytes) {
  if (ndim != 2 && ndim != 3) throw GeometryError("STNF ndim must be 2 or 3");
  if (ndim == 2 && l != 1) throw GeometryError("2D STNF data must have l = 1");
  std::vector<std::int64_t> dims{m, n};
  if (ndim == 3) dims.push_back(l);
  return MeshGeometry(std::move(dims), static_cast<int>(arity), element_bytes);
}

}  // namespace

void write_stnf(std::ostream& out, const std::vector<FieldData>& fields) {
  if (fields.empty()) throw InvalidArgument("no fields to write");
  const MeshGeometry& g = fields.front().geometry();
  for (const FieldData& f : fields) {
    if (!(f.geometry() == g)) throw GeometryError("fields in one file must share a geometry");
  }
  out.write("STNF", 4);
  put_u32(out, kStnfVersion);
  put_u32(out, static_cast<std::uint32_t>(g.ndim()));
  put_u32(out, static_cast<std::uint32_t>(g.m()));
  put_u32(out, static_cast<std::uint32_t>(g.n()));
  put_u32(out, static_cast<std::uint32_t>(g.l()));
  put_u32(out, static_cast<std::uint32_t>(g.arity()));
  put_u32(out, static_cast<std::uint32_t>(fields.size()));
  for (const FieldData& f : fields) {
    for (float v : f.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw Error("failed writing STNF data");
}

std::vector<FieldData> read_stnf(std::istream& in, int element_bytes) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "STNF", 4) != 0) throw Error("not an STNF file");
  const std::uint32_t version = get_u32(in);
  if (version != kStnfVersion) throw Error("unsupported STNF version " + std::to_string(version));
  const std::uint32_t ndim = get_u32(in);
  const std::uint32_t m = get_u32(in);
  const std::uint32_t n = get_u32(in);
  const std::uint32_t l = get_u32(in);
  const std::uint32_t arity = get_u32(in);
  const std::uint32_t count = get_u32(in);
  const MeshGeometry g = geometry_from(ndim, m, n, l, arity, element_bytes);
  std::vector<FieldData> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::vector<float> v(static_cast<std::size_t>(g.value_count()));
    for (float& x : v) {
      x = std::bit_cast<float>(get_u32(in));
    }
    out.emplace_back(g, std::move(v));
  }
  return out;
}

std::vector<FieldData> read_field_text(std::istream& in, int element_bytes) {
  std::vector<std::int64_t> dims;
  std::int64_t arity = 1;
  std::int64_t count = 1;
  std::vector<float> values;
  bool in_values = false;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (in_values) {
      double v = 0;
      while (ls >> v) values.push_back(static_cast<float>(v));
      if (!ls.eof()) throw Error("bad value in text field: " + line);
      continue;
    }
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "dims") {
      std::int64_t d = 0;
      while (ls >> d) dims.push_back(d);
    } else if (key == "arity") {
      ls >> arity;
    } else if (key == "count") {
      ls >> count;
    } else if (key == "values") {
      in_values = true;
    } else {
      throw Error("unknown key in text field: " + key);
    }
  }
  if (dims.empty()) throw Error("text field is missing 'dims'");
  if (count < 1) throw Error("text field count must be >= 1");
  const MeshGeometry g(dims, static_cast<int>(arity), element_bytes);
  if (static_cast<std::int64_t>(values.size()) != count * g.value_count()) {
    throw GeometryError("text field has " + std::to_string(values.size()) + " values, expected " +
                        std::to_string(count * g.value_count()));
  }
  std::vector<FieldData> out;
  for (std::int64_t i = 0; i < count; ++i) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(i * g.value_count());
    out.emplace_back(g, std::vector<float>(first, first + static_cast<std::ptrdiff_t>(g.value_count())));
  }
  return out;
}

void save_fields(const std::filesystem::path& path, const std::vector<FieldData>& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_stnf(out, fields);
}

std::vector<FieldData> load_fields(const std::filesystem::path& path, int element_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  if (path.extension() == ".txt") return read_field_text(in, element_bytes);
  return read_stnf(in, element_bytes);
}

}  // namespace meshpipe::cli
