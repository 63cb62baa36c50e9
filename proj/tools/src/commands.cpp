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


#include "meshpipe_cli/commands.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <random>

#include "meshpipe/error.hpp"
#include "meshpipe/explore.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/reference.hpp"
#include "meshpipe/simulator.hpp"
#include "meshpipe_cli/field_io.hpp"
#include "meshpipe_cli/report.hpp"

namespace meshpipe::cli {

using nlohmann::json;

namespace {

FieldData generate(const MeshGeometry& g, std::uint64_t seed, float lo, float hi) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(static_cast<std::size_t>(g.value_count()));
  for (float& x : v) x = dist(gen);
  return FieldData(g, std::move(v));
}

FieldData load_single(const std::filesystem::path& path, const MeshGeometry& g) {
  auto fields = load_fields(path, g.element_bytes());
  if (fields.size() != 1 || !(fields.front().geometry() == g)) {
    throw ConfigurationError(path.string() + " must hold one mesh of the configured shape");
  }
  return std::move(fields.front());
}

void write_text(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  body(f);
  if (!f) throw Error("write failed: " + path.string());
}

std::filesystem::path output_dir(const Options& opt) {
  const std::filesystem::path dir = opt.output.value_or("meshpipe-out");
  std::filesystem::create_directories(dir);
  return dir;
}

json context_json(const Config& cfg) {
  return json{{"pipeline", cfg.pipeline.name()},
              {"mesh", to_json(cfg.geometry)},
              {"device", to_json(cfg.device)},
              {"design", to_json(cfg.design)},
              {"iterations", cfg.iterations}};
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

Config resolve_config(const Options& opt) {
  std::optional<std::filesystem::path> device = opt.device;
  if (!device) device = device_override_from_env();
  Config cfg = load_config(opt.config, device);
  if (opt.input) cfg.input = *opt.input;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.jobs) {
    if (*opt.jobs < 1) throw InvalidArgument("--jobs must be >= 1");
    cfg.jobs = *opt.jobs;
  }
  cfg.explore.jobs = cfg.jobs;
  return cfg;
}

std::vector<FieldSet> prepare_inputs(const Config& cfg) {
  const MeshGeometry& g = cfg.geometry;
  const auto batch = static_cast<std::size_t>(cfg.design.batch);
  std::vector<FieldData> primaries;
  if (cfg.input) {
    primaries = load_fields(*cfg.input, g.element_bytes());
    if (primaries.size() != batch) {
      throw ConfigurationError(cfg.input->string() + " holds " + std::to_string(primaries.size()) +
                               " meshes, the design batch is " + std::to_string(batch));
    }
    for (const FieldData& f : primaries) {
      if (!(f.geometry() == g)) {
        throw ConfigurationError(cfg.input->string() + " does not match the configured mesh");
      }
    }
  } else {
    for (std::size_t b = 0; b < batch; ++b) {
      primaries.push_back(generate(g, cfg.seed + b * 0x9e3779b97f4a7c15ULL, -1.0f, 1.0f));
    }
  }

  const auto& names = cfg.pipeline.pointwise_fields();
  std::vector<FieldData> pointwise;
  for (std::size_t f = 0; f < names.size(); ++f) {
    const MeshGeometry scalar = g.with_arity(1);
    const auto it = cfg.pointwise_inputs.find(names[f]);
    if (it != cfg.pointwise_inputs.end()) {
      pointwise.push_back(load_single(it->second, scalar));
    } else {
      pointwise.push_back(generate(scalar, cfg.seed ^ (0xa5a5a5a5ULL + f), 0.5f, 1.5f));
    }
  }

  std::vector<FieldSet> sets;
  for (FieldData& p : primaries) sets.push_back(FieldSet{std::move(p), pointwise});
  return sets;
}

int cmd_model(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = resolve_config(opt);
    const auto rep = model::predict(cfg.design, cfg.pipeline, cfg.geometry, cfg.iterations, cfg.device);
    write_model_text(out, rep);
    if (opt.output) {
      const auto dir = output_dir(opt);
      json doc = context_json(cfg);
      doc["model"] = to_json(rep);
      write_text(dir / "report.json", [&](std::ostream& f) { f << doc.dump(2) << "\n"; });
      write_text(dir / "report.txt", [&](std::ostream& f) { write_model_text(f, rep); });
    }
    return kExitOk;
  });
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = resolve_config(opt);
    const auto inputs = prepare_inputs(cfg);
    const auto sp = sim::build_pipeline(cfg.pipeline, cfg.design, cfg.geometry, cfg.device);
    for (const std::string& w : sp.warnings()) err << "warning: " << w << "\n";
    const auto res = sim::run(sp, inputs, cfg.iterations);
    const auto rep = model::predict(cfg.design, cfg.pipeline, cfg.geometry, cfg.iterations, cfg.device);

    const auto dir = output_dir(opt);
    save_fields(dir / "output.stnf", res.outputs);
    json doc = context_json(cfg);
    doc["model"] = to_json(rep);
    doc["simulation"] = to_json(res);
    doc["delta"] = {{"cycles", res.cycles - rep.cycles},
                    {"bytes_read", res.bytes_read - rep.bytes_read},
                    {"bytes_written", res.bytes_written - rep.bytes_written}};
    write_text(dir / "report.json", [&](std::ostream& f) { f << doc.dump(2) << "\n"; });
    write_text(dir / "report.txt", [&](std::ostream& f) { write_sim_text(f, res, rep); });
    write_sim_text(out, res, rep);
    out << "wrote " << (dir / "output.stnf").string() << "\n";
    return kExitOk;
  });
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = resolve_config(opt);
    const auto inputs = prepare_inputs(cfg);
    const auto sp = sim::build_pipeline(cfg.pipeline, cfg.design, cfg.geometry, cfg.device);
    const auto res = sim::run(sp, inputs, cfg.iterations);
    const auto rep = model::predict(cfg.design, cfg.pipeline, cfg.geometry, cfg.iterations, cfg.device);

    bool ok = res.outputs.size() == inputs.size();
    for (std::size_t i = 0; i < inputs.size() && i < res.outputs.size(); ++i) {
      const FieldData ref = reference::run_reference(cfg.pipeline, inputs[i], res.effective_iterations);
      const bool same = bitwise_equal(ref, res.outputs[i]);
      ok = ok && same;
      out << (same ? "PASS" : "FAIL") << "  mesh " << i << " bitwise equal to reference\n";
    }
    const bool cycles_match = res.cycles == rep.cycles;
    ok = ok && cycles_match;
    out << (cycles_match ? "PASS" : "FAIL") << "  cycles " << res.cycles << " vs model "
        << rep.cycles << "\n";
    out << (ok ? "verify: all checks passed" : "verify: FAILED") << "\n";
    return ok ? kExitOk : kExitFailure;
  });
}

int cmd_explore(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = resolve_config(opt);
    const auto ex = explore::enumerate_designs(cfg.device, cfg.pipeline, cfg.geometry, cfg.explore);
    if (ex.designs.empty()) {
      err << "no feasible design (binding: " << ex.binding_constraint << ", " << ex.evaluated
          << " evaluated)\n";
    }
    if (opt.output) {
      write_text(*opt.output, [&](std::ostream& f) { write_explore_csv(f, ex); });
      out << ex.designs.size() << " feasible of " << ex.evaluated << " evaluated, wrote "
          << opt.output->string() << "\n";
    } else {
      write_explore_csv(out, ex);
    }
    return kExitOk;
  });
}

}  // namespace meshpipe::cli
