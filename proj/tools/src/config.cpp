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


#include "meshpipe_cli/config.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>

#include "meshpipe/apps.hpp"
#include "meshpipe/error.hpp"

namespace meshpipe::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigurationError("'" + where + "' must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigurationError("unknown key '" + where + "." + k + "'");
  }
}

template <typename T>
T get(const json& obj, const std::string& where, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigurationError("'" + where + "." + key + "' is missing or has the wrong type");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, where, key);
}

template <std::size_t N>
std::array<float, N> float_array(const json& obj, const std::string& where, const char* key) {
  const auto v = get<std::vector<float>>(obj, where, key);
  if (v.size() != N) {
    throw ConfigurationError("'" + where + "." + key + "' needs " + std::to_string(N) + " values");
  }
  std::array<float, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

PipelineSpec parse_app(const json& app) {
  const std::string name = get<std::string>(app, "app", "name");
  if (name == "poisson") {
    allow_keys(app, "app", {"name"});
    return apps::poisson_2d();
  }
  if (name == "jacobi") {
    allow_keys(app, "app", {"name", "coefficients"});
    return apps::jacobi_3d(float_array<7>(app, "app", "coefficients"));
  }
  if (name == "rtm") {
    allow_keys(app, "app", {"name", "star", "dt", "rho_weight", "mu_weight"});
    return apps::rtm_forward(float_array<25>(app, "app", "star"), get<float>(app, "app", "dt"),
                             get_or<float>(app, "app", "rho_weight", 1.0f),
                             get_or<float>(app, "app", "mu_weight", 1.0f));
  }
  throw ConfigurationError("unknown app '" + name + "' (poisson, jacobi, rtm)");
}

PipelineSpec parse_kernel(const json& k) {
  allow_keys(k, "kernel", {"name", "ndim", "taps", "arity", "pointwise_fields", "scale", "dsp_cost"});
  const int ndim = get<int>(k, "kernel", "ndim");
  const auto fields = get_or<std::vector<std::string>>(k, "kernel", "pointwise_fields", {});
  auto field_index = [&](const std::string& f) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i] == f) return static_cast<int>(i);
    }
    throw ConfigurationError("kernel references unknown pointwise field '" + f + "'");
  };
  std::vector<Tap> taps;
  const json jt = get<json>(k, "kernel", "taps");
  if (!jt.is_array()) throw ConfigurationError("'kernel.taps' must be an array");
  for (const json& t : jt) {
    allow_keys(t, "kernel.taps[]", {"offset", "coefficient", "field"});
    const auto off = get<std::vector<int>>(t, "kernel.taps[]", "offset");
    if (off.size() != static_cast<std::size_t>(ndim)) {
      throw ConfigurationError("tap offset needs " + std::to_string(ndim) + " entries");
    }
    Tap tap;
    for (std::size_t i = 0; i < off.size(); ++i) tap.offset[i] = off[i];
    tap.coefficient = get<float>(t, "kernel.taps[]", "coefficient");
    if (t.contains("field")) tap.field = field_index(get<std::string>(t, "kernel.taps[]", "field"));
    taps.push_back(tap);
  }
  std::vector<FieldTerm> scale;
  if (k.contains("scale")) {
    for (const json& s : k.at("scale")) {
      allow_keys(s, "kernel.scale[]", {"field", "weight"});
      scale.push_back({field_index(get<std::string>(s, "kernel.scale[]", "field")),
                       get<float>(s, "kernel.scale[]", "weight")});
    }
  }
  StencilKernel kernel(ndim, std::move(taps), get_or<int>(k, "kernel", "arity", 1), fields,
                       std::move(scale), get_or<std::int64_t>(k, "kernel", "dsp_cost", 0));
  return PipelineSpec::single(std::move(kernel),
                              get_or<std::string>(k, "kernel", "name", "kernel"));
}

DesignPoint parse_design(const json& d) {
  allow_keys(d, "design", {"V", "p", "tile", "batch", "freq_hz"});
  DesignPoint out;
  out.V = get_or<int>(d, "design", "V", 1);
  out.p = get_or<int>(d, "design", "p", 1);
  out.batch = get_or<int>(d, "design", "batch", 1);
  out.freq_hz = get_or<double>(d, "design", "freq_hz", 300e6);
  if (d.contains("tile")) {
    const auto t = get<std::vector<std::int64_t>>(d, "design", "tile");
    if (t.empty() || t.size() > 2) throw ConfigurationError("'design.tile' needs [M] or [M, N]");
    out.tile = TileShape{t[0], t.size() == 2 ? t[1] : 0};
  }
  out.validate();
  return out;
}

explore::Constraints parse_explore(const json& e) {
  allow_keys(e, "run.explore",
             {"V", "p", "tile", "batch", "max_p", "tiling", "frequencies", "batch_sizes"});
  explore::Constraints c;
  const std::string w = "run.explore";
  if (e.contains("V")) c.V = get<std::int64_t>(e, w, "V");
  if (e.contains("p")) c.p = get<std::int64_t>(e, w, "p");
  if (e.contains("batch")) c.batch = get<std::int64_t>(e, w, "batch");
  if (e.contains("max_p")) c.max_p = get<std::int64_t>(e, w, "max_p");
  if (e.contains("tile")) {
    const auto t = get<std::vector<std::int64_t>>(e, w, "tile");
    if (t.empty() || t.size() > 2) throw ConfigurationError("'run.explore.tile' needs [M] or [M, N]");
    c.tile = TileShape{t[0], t.size() == 2 ? t[1] : 0};
  }
  if (e.contains("tiling")) {
    const auto mode = get<std::string>(e, w, "tiling");
    if (mode == "auto") {
      c.tiling = explore::Tiling::kAuto;
    } else if (mode == "never") {
      c.tiling = explore::Tiling::kNever;
    } else if (mode == "only") {
      c.tiling = explore::Tiling::kOnly;
    } else {
      throw ConfigurationError("'run.explore.tiling' must be auto, never or only");
    }
  }
  if (e.contains("frequencies")) c.frequencies = get<std::vector<double>>(e, w, "frequencies");
  if (e.contains("batch_sizes")) c.batch_sizes = get<std::vector<std::int64_t>>(e, w, "batch_sizes");
  return c;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

}  // namespace

ResourceProfile parse_device(const json& dev) {
  allow_keys(dev, "device", {"preset", "channels", "dsp_total", "onchip_mem_bytes", "channel_bw",
                             "num_ports", "freq_hz", "dsp_util_cap", "mem_util_cap"});
  ResourceProfile r = ResourceProfile::u280_ddr4();
  const auto preset = get_or<std::string>(dev, "device", "preset", "u280-ddr4");
  if (preset == "u280-hbm") {
    r = ResourceProfile::u280_hbm(get_or<int>(dev, "device", "channels", 32));
  } else if (preset != "u280-ddr4") {
    throw ConfigurationError("unknown device preset '" + preset + "' (u280-ddr4, u280-hbm)");
  } else if (dev.contains("channels")) {
    throw ConfigurationError("'device.channels' applies to the u280-hbm preset only");
  }
  r.dsp_total = get_or(dev, "device", "dsp_total", r.dsp_total);
  r.onchip_mem_bytes = get_or(dev, "device", "onchip_mem_bytes", r.onchip_mem_bytes);
  r.channel_bw = get_or(dev, "device", "channel_bw", r.channel_bw);
  r.num_ports = get_or(dev, "device", "num_ports", r.num_ports);
  r.freq_hz = get_or(dev, "device", "freq_hz", r.freq_hz);
  r.dsp_util_cap = get_or(dev, "device", "dsp_util_cap", r.dsp_util_cap);
  r.mem_util_cap = get_or(dev, "device", "mem_util_cap", r.mem_util_cap);
  r.validate();
  return r;
}

Config parse_config(const json& doc, const std::filesystem::path& base_dir) {
  allow_keys(doc, "config", {"mesh", "app", "kernel", "device", "design", "run"});
  if (doc.contains("app") == doc.contains("kernel")) {
    throw ConfigurationError("config needs exactly one of 'app' or 'kernel'");
  }
  if (!doc.contains("mesh")) throw ConfigurationError("config is missing 'mesh'");
  PipelineSpec pipe = doc.contains("app") ? parse_app(doc.at("app")) : parse_kernel(doc.at("kernel"));

  const json& mesh = doc.at("mesh");
  allow_keys(mesh, "mesh", {"dims", "element_bytes"});
  const MeshGeometry geometry(get<std::vector<std::int64_t>>(mesh, "mesh", "dims"), pipe.arity(),
                              get_or<int>(mesh, "mesh", "element_bytes", 4));
  pipe.check_geometry(geometry);

  const ResourceProfile device =
      doc.contains("device") ? parse_device(doc.at("device")) : ResourceProfile::u280_ddr4();
  const DesignPoint design = doc.contains("design") ? parse_design(doc.at("design")) : DesignPoint{};

  Config cfg{std::move(pipe), geometry, device, design, 1, 1, 1, std::nullopt, {}, {}};
  if (doc.contains("run")) {
    const json& run = doc.at("run");
    allow_keys(run, "run", {"iterations", "seed", "jobs", "input", "pointwise_inputs", "explore"});
    cfg.iterations = get_or<std::int64_t>(run, "run", "iterations", 1);
    cfg.seed = get_or<std::uint64_t>(run, "run", "seed", 1);
    cfg.jobs = get_or<int>(run, "run", "jobs", 1);
    if (run.contains("input")) cfg.input = base_dir / get<std::string>(run, "run", "input");
    if (run.contains("pointwise_inputs")) {
      for (const auto& [k, v] : run.at("pointwise_inputs").items()) {
        if (!v.is_string()) throw ConfigurationError("'run.pointwise_inputs." + k + "' must be a path");
        cfg.pointwise_inputs[k] = base_dir / v.get<std::string>();
      }
    }
    if (run.contains("explore")) cfg.explore = parse_explore(run.at("explore"));
  }
  if (cfg.iterations < 0) throw ConfigurationError("'run.iterations' must be >= 0");
  if (cfg.jobs < 1) throw ConfigurationError("'run.jobs' must be >= 1");
  for (const auto& [name, path] : cfg.pointwise_inputs) {
    const auto& f = cfg.pipeline.pointwise_fields();
    if (std::find(f.begin(), f.end(), name) == f.end()) {
      throw ConfigurationError("'run.pointwise_inputs." + name + "' is not a field of the pipeline");
    }
  }
  if (doc.contains("run") && doc.at("run").contains("iterations")) {
    cfg.explore.iterations = std::max<std::int64_t>(cfg.iterations, 1);
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path,
                   const std::optional<std::filesystem::path>& device_override) {
  json doc = read_json(path);
  if (device_override) {
    if (!doc.is_object()) throw ConfigurationError("config must be a JSON object");
    doc["device"] = read_json(*device_override);
  }
  return parse_config(doc, path.parent_path());
}

std::optional<std::filesystem::path> device_override_from_env() {
  const char* v = std::getenv(kDeviceProfileEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

}  // namespace meshpipe::cli
