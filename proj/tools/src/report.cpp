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


#include "meshpipe_cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace meshpipe::cli {

using nlohmann::json;

double round9(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_real(v));
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json to_json(const DesignPoint& d) {
  json j{{"V", d.V}, {"p", d.p}, {"batch", d.batch}, {"freq_hz", round9(d.freq_hz)}};
  if (d.tile) {
    j["tile"] = d.tile->N > 0 ? json::array({d.tile->M, d.tile->N}) : json::array({d.tile->M});
  }
  return j;
}

json to_json(const ResourceProfile& r) {
  return json{{"dsp_total", r.dsp_total},
              {"onchip_mem_bytes", round9(r.onchip_mem_bytes)},
              {"channel_bw", round9(r.channel_bw)},
              {"num_ports", r.num_ports},
              {"freq_hz", round9(r.freq_hz)},
              {"dsp_util_cap", round9(r.dsp_util_cap)},
              {"mem_util_cap", round9(r.mem_util_cap)}};
}

json to_json(const MeshGeometry& g) {
  return json{{"dims", g.dims()}, {"arity", g.arity()}, {"element_bytes", g.element_bytes()}};
}

json to_json(const model::ModelReport& rep) {
  json violations = json::array();
  for (const Violation& v : rep.violations) {
    violations.push_back({{"constraint", v.constraint},
                          {"value", round9(v.value)},
                          {"limit", round9(v.limit)},
                          {"message", v.message}});
  }
  const auto& L = rep.limits;
  return json{{"mode", rep.mode},
              {"feasible", rep.feasible},
              {"cycles", rep.cycles},
              {"cycles_per_mesh", round9(rep.cycles_per_mesh)},
              {"runtime_s", round9(rep.runtime_s)},
              {"throughput_cells_per_cycle", round9(rep.throughput_cells_per_cycle)},
              {"bandwidth_bytes_per_s", round9(rep.bandwidth_bytes_per_s)},
              {"valid_ratio", round9(rep.valid_ratio)},
              {"iterations", rep.iterations},
              {"effective_iterations", rep.effective_iterations},
              {"passes", rep.passes},
              {"tiles", rep.tiles},
              {"bytes_read", rep.bytes_read},
              {"bytes_written", rep.bytes_written},
              {"limits",
               {{"V_max_raw", L.V_max_raw},
                {"V_max", L.V_max},
                {"p_dsp", L.p_dsp},
                {"p_mem", L.p_mem},
                {"p_max", L.p_max},
                {"M_opt", L.M_opt}}},
              {"violations", violations}};
}

json to_json(const sim::SimResult& res) {
  return json{{"cycles", res.cycles},
              {"bytes_read", res.bytes_read},
              {"bytes_written", res.bytes_written},
              {"computed_cells", res.computed_cells},
              {"redundant_cells", res.redundant_cells},
              {"iterations", res.iterations},
              {"effective_iterations", res.effective_iterations},
              {"passes", res.passes},
              {"tiles", res.tiles},
              {"tile_pass_cycles", res.tile_pass_cycles},
              {"alu_latency_estimate", res.alu_latency_estimate},
              {"meshes", res.outputs.size()}};
}

model::ModelReport model_report_from_json(const json& j) {
  model::ModelReport rep;
  rep.mode = j.at("mode").get<std::string>();
  rep.feasible = j.at("feasible").get<bool>();
  rep.cycles = j.at("cycles").get<std::int64_t>();
  rep.cycles_per_mesh = j.at("cycles_per_mesh").get<double>();
  rep.runtime_s = j.at("runtime_s").get<double>();
  rep.throughput_cells_per_cycle = j.at("throughput_cells_per_cycle").get<double>();
  rep.bandwidth_bytes_per_s = j.at("bandwidth_bytes_per_s").get<double>();
  rep.valid_ratio = j.at("valid_ratio").get<double>();
  rep.iterations = j.at("iterations").get<std::int64_t>();
  rep.effective_iterations = j.at("effective_iterations").get<std::int64_t>();
  rep.passes = j.at("passes").get<std::int64_t>();
  rep.tiles = j.at("tiles").get<std::int64_t>();
  rep.bytes_read = j.at("bytes_read").get<std::int64_t>();
  rep.bytes_written = j.at("bytes_written").get<std::int64_t>();
  const json& L = j.at("limits");
  rep.limits.V_max_raw = L.at("V_max_raw").get<std::int64_t>();
  rep.limits.V_max = L.at("V_max").get<std::int64_t>();
  rep.limits.p_dsp = L.at("p_dsp").get<std::int64_t>();
  rep.limits.p_mem = L.at("p_mem").get<std::int64_t>();
  rep.limits.p_max = L.at("p_max").get<std::int64_t>();
  rep.limits.M_opt = L.at("M_opt").get<std::int64_t>();
  for (const json& v : j.at("violations")) {
    rep.violations.push_back(Violation{v.at("constraint").get<std::string>(),
                                       v.at("value").get<double>(), v.at("limit").get<double>(),
                                       v.at("message").get<std::string>()});
  }
  return rep;
}

DesignPoint design_from_json(const json& j) {
  DesignPoint d;
  d.V = j.at("V").get<int>();
  d.p = j.at("p").get<int>();
  d.batch = j.at("batch").get<int>();
  d.freq_hz = j.at("freq_hz").get<double>();
  if (j.contains("tile")) {
    const auto t = j.at("tile").get<std::vector<std::int64_t>>();
    d.tile = TileShape{t.at(0), t.size() > 1 ? t[1] : 0};
  }
  return d;
}

void write_model_text(std::ostream& out, const model::ModelReport& rep) {
  const auto& L = rep.limits;
  out << "mode:        " << rep.mode << (rep.feasible ? "" : " (infeasible)") << "\n"
      << "iterations:  " << rep.iterations << " (" << rep.effective_iterations << " run in "
      << rep.passes << " passes)\n"
      << "cycles:      " << rep.cycles << "\n"
      << "runtime:     " << format_real(rep.runtime_s) << " s\n"
      << "throughput:  " << format_real(rep.throughput_cells_per_cycle) << " cells/cycle\n"
      << "bandwidth:   " << format_real(rep.bandwidth_bytes_per_s) << " B/s\n"
      << "valid ratio: " << format_real(rep.valid_ratio) << "\n"
      << "limits:      V_max " << L.V_max << " (raw " << L.V_max_raw << "), p_dsp " << L.p_dsp
      << ", p_mem " << (L.p_mem == model::kUnbounded ? std::string("unbounded") : std::to_string(L.p_mem))
      << ", M_opt " << L.M_opt;
  if (L.p_max > 0) out << ", p_max " << L.p_max;
  out << "\n";
  for (const Violation& v : rep.violations) out << "violation:   " << v.message << "\n";
}

void write_sim_text(std::ostream& out, const sim::SimResult& res, const model::ModelReport& rep) {
  out << "meshes:         " << res.outputs.size() << "\n"
      << "iterations:     " << res.iterations << " (" << res.effective_iterations << " run)\n"
      << "cycles:         " << res.cycles << " (model " << rep.cycles << ", delta "
      << res.cycles - rep.cycles << ")\n"
      << "bytes read:     " << res.bytes_read << " (model " << rep.bytes_read << ")\n"
      << "bytes written:  " << res.bytes_written << " (model " << rep.bytes_written << ")\n"
      << "tiles:          " << res.tiles << "\n"
      << "redundant:      " << res.redundant_cells << " of " << res.computed_cells
      << " computed cells\n"
      << "alu latency:    ~" << res.alu_latency_estimate << " cycles (not in cycle count)\n";
}

const std::vector<std::string>& explore_columns() {
  static const std::vector<std::string> cols{
      "rank",       "V",          "p",
      "tile_M",     "tile_N",     "batch",
      "freq_hz",    "cycles",     "throughput_cells_per_cycle",
      "runtime_s",  "bandwidth_bytes_per_s", "valid_ratio",
      "V_max",      "p_dsp",      "p_mem",
      "p_max",      "M_opt"};
  return cols;
}

void write_explore_csv(std::ostream& out, const explore::Exploration& ex) {
  const auto& cols = explore_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  std::int64_t rank = 1;
  for (const auto& c : ex.designs) {
    const auto& d = c.design;
    const auto& r = c.report;
    const auto& L = r.limits;
    out << rank++ << "," << d.V << "," << d.p << "," << (d.tile ? d.tile->M : 0) << ","
        << (d.tile ? d.tile->N : 0) << "," << d.batch << "," << format_real(d.freq_hz) << ","
        << r.cycles << "," << format_real(r.throughput_cells_per_cycle) << ","
        << format_real(r.runtime_s) << "," << format_real(r.bandwidth_bytes_per_s) << ","
        << format_real(r.valid_ratio) << "," << L.V_max << "," << L.p_dsp << ","
        << (L.p_mem == model::kUnbounded ? -1 : L.p_mem) << "," << L.p_max << ","
        << (L.M_opt == model::kUnbounded ? -1 : L.M_opt) << "\n";
  }
}

}  // namespace meshpipe::cli
