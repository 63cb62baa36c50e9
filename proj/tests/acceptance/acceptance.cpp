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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "meshpipe/apps.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/reference.hpp"
#include "meshpipe/simulator.hpp"
#include "oracle.hpp"

namespace mp = meshpipe;
namespace md = meshpipe::model;
namespace sim = meshpipe::sim;
using mp::DesignPoint;
using mp::FieldSet;
using mp::MeshGeometry;
using mp::TileShape;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << what;
      pass = false;
    }
  }
};

double floor_percent(double ratio) { return std::floor(ratio * 1000.0) / 10.0; }

// 1: DSP-bound unroll depth of each application on the reference device.
void table_unroll(Outcome& o) {
  const auto r = mp::ResourceProfile::u280_ddr4();
  const auto jacobi = mp::apps::jacobi_3d(mp::testing::kDyadicJacobi);
  const auto rtm = mp::apps::rtm_forward(mp::testing::random_star(1), 0.1f);
  o.expect(r.dsp_total == 8490 && r.dsp_util_cap == 0.9, "device profile");
  o.expect(mp::apps::poisson_2d().dsp_cost() == 14 && jacobi.dsp_cost() == 33 &&
               rtm.dsp_cost() == 2444,
           "application DSP costs");
  const auto poisson_p = md::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, 8, 14);
  const auto jacobi_p = md::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, 8, 33);
  const auto rtm_p = md::unroll_limit_dsp(r.dsp_total, r.dsp_util_cap, 1, 2444);
  o.detail << "p_dsp " << poisson_p << "/" << jacobi_p << "/" << rtm_p << " ";
  o.expect(poisson_p == 68, "poisson p_dsp");
  o.expect(jacobi_p == 28, "jacobi p_dsp");
  o.expect(rtm_p == 3, "rtm p_dsp");
  const auto rep = md::predict(DesignPoint{8, 68, std::nullopt, 1, 250e6}, mp::apps::poisson_2d(),
                               MeshGeometry({4096, 4096}), 60000, r);
  o.expect(rep.limits.p_dsp == 68, "predict carries p_dsp");
}

// 2: tiled throughput and valid ratio for large n / l, floored.
void table_tiling(Outcome& o) {
  const double t_poisson = md::tile_throughput_2d(8192, kInf, 8, 60, 2);
  const double v_poisson = md::tile_valid_ratio(8192, 0, 60, 2);
  const double t_jacobi = md::tile_throughput(768, 768, kInf, 64, 3, 2);
  const double v_jacobi = md::tile_valid_ratio(768, 768, 3, 2);
  o.detail << "T " << std::floor(t_poisson) << "/" << std::floor(t_jacobi) << ", valid "
           << floor_percent(v_poisson) << "%/" << floor_percent(v_jacobi) << "% ";
  o.expect(std::floor(t_poisson) == 472, "poisson T");
  o.expect(floor_percent(v_poisson) == 98.5, "poisson valid ratio");
  o.expect(std::floor(t_jacobi) == 189, "jacobi T");
  o.expect(floor_percent(v_jacobi) == 98.4, "jacobi valid ratio");
  // The cell-by-cell oracle approaches the same value as the stream grows.
  const double counted = mp::testing::strip_throughput(8192, 1 << 20, 8, 60, 2);
  o.expect(std::floor(counted) == 472, "poisson T by counting");
}

// 3
void unroll_for_block(Outcome& o) {
  const auto p = md::optimal_unroll_tiled(96, 8);
  o.detail << "p " << p << " ";
  o.expect(p == 4, "optimal_unroll_tiled(96, 8)");
}

// 4: simulator cycles equal the closed forms on random configurations.
void cycle_agreement(Outcome& o) {
  std::mt19937_64 gen(2026);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };
  const int Vs[] = {1, 2, 4, 8};
  const int Ds[] = {2, 4, 8};
  int runs = 0, mismatches = 0;
  for (int i = 0; i < 240; ++i) {
    const int kind = i % 3;  // 2D, 3D, batched
    const int ndim = kind == 1 || (kind == 2 && i % 2 == 0) ? 3 : 2;
    const int V = Vs[pick(0, 3)];
    const int D = Ds[pick(0, 2)];
    const auto p = pick(1, 8);
    const auto B = kind == 2 ? pick(2, 5) : 1;
    const std::int64_t lo = D + 1;
    std::vector<std::int64_t> dims;
    if (ndim == 2) {
      dims = {pick(lo, 128), pick(lo, 128)};
    } else {
      dims = {pick(lo, 32), pick(lo, 24), pick(lo, 16)};
    }
    const MeshGeometry g(dims);
    const auto pipe = mp::testing::random_star_pipeline(ndim, D, static_cast<std::uint64_t>(i));
    const DesignPoint d{V, static_cast<int>(p), std::nullopt, static_cast<int>(B), 300e6};
    const auto n_iter = pick(0, 2 * p);
    const auto sp = sim::build_pipeline(pipe, d, g);

    std::vector<FieldSet> inputs;
    for (std::int64_t b = 0; b < B; ++b) {
      inputs.push_back(mp::testing::random_inputs(pipe, g, static_cast<std::uint64_t>(i * 16 + b)));
    }
    const auto res = sim::run(sp, inputs, n_iter);

    const auto passes = md::effective_iterations(n_iter, p) / p;
    const std::int64_t rows = ndim == 3 ? dims[1] : 1;
    const std::int64_t slow = B * (ndim == 3 ? dims[2] : dims[1]);
    const auto counted = passes * mp::testing::stream_cycles(dims[0], rows, slow, V, p * D / 2);
    std::int64_t formula;
    if (B > 1) {
      formula = passes * (ndim == 3 ? md::batch_pass_cycles_3d(dims[0], dims[1], dims[2], V, p, D, B)
                                    : md::batch_pass_cycles_2d(dims[0], dims[1], V, p, D, B));
    } else {
      formula = ndim == 3 ? md::cycles_3d(dims[0], dims[1], dims[2], V, p, D, n_iter)
                          : md::cycles_2d(dims[0], dims[1], V, p, D, n_iter);
    }
    ++runs;
    if (res.cycles != formula || res.cycles != counted) {
      if (mismatches == 0) {
        o.detail << "first mismatch: sim " << res.cycles << " formula " << formula << " counted "
                 << counted << "; ";
      }
      ++mismatches;
    }
  }
  o.detail << runs << " configurations, " << mismatches << " mismatches ";
  o.expect(runs >= 200 && mismatches == 0, "");
}

// 5: untiled, tiled and batched simulator outputs equal the reference bitwise.
void oracle_equivalence(Outcome& o) {
  struct App {
    std::string name;
    mp::PipelineSpec pipe;
    MeshGeometry g;
    int V;
    int p;
    std::int64_t iterations;
    std::vector<TileShape> tiles;
  };
  const std::vector<App> apps{
      {"poisson", mp::apps::poisson_2d(), MeshGeometry({64, 64}), 8, 3, 5,
       {{16, 0}, {24, 0}, {40, 0}}},
      {"jacobi", mp::apps::jacobi_3d(mp::testing::random_jacobi(3)), MeshGeometry({40, 36, 24}), 4,
       2, 4, {{12, 12}, {16, 20}, {28, 16}}},
      {"rtm", mp::apps::rtm_forward(mp::testing::random_star(4), 0.05f),
       MeshGeometry({48, 44, 12}, mp::apps::kRtmArity), 2, 1, 2, {{36, 36}, {40, 44}, {44, 40}}},
  };
  int checks = 0;
  for (const App& a : apps) {
    const FieldSet in = mp::testing::random_inputs(a.pipe, a.g, 77);
    const DesignPoint base{a.V, a.p, std::nullopt, 1, 300e6};
    const auto plain = sim::simulate(sim::build_pipeline(a.pipe, base, a.g), in, a.iterations);
    const auto ref = mp::reference::run_reference(a.pipe, in, plain.effective_iterations);
    o.expect(plain.effective_iterations >= 2, a.name + " iterations");
    o.expect(mp::bitwise_equal(plain.outputs.front(), ref), a.name + " untiled; ");
    ++checks;
    for (const TileShape& t : a.tiles) {
      DesignPoint d = base;
      d.tile = t;
      const auto sp = sim::build_pipeline(a.pipe, d, a.g);
      const auto tiled = sim::simulate_tiled(sp, in, a.iterations, t);
      o.expect(tiled.tiles > 1, a.name + " tile count");
      o.expect(mp::bitwise_equal(tiled.outputs.front(), ref),
               a.name + " tile " + std::to_string(t.M) + "x" + std::to_string(t.N) + "; ");
      ++checks;
    }
    for (int B : {1, 3, 10}) {
      DesignPoint d = base;
      d.batch = B;
      std::vector<FieldSet> batch;
      for (int b = 0; b < B; ++b) {
        batch.push_back(mp::testing::random_inputs(a.pipe, a.g, static_cast<std::uint64_t>(100 + b)));
      }
      const auto res = sim::simulate_batched(sim::build_pipeline(a.pipe, d, a.g), batch, a.iterations);
      const auto refs = mp::reference::run_reference_batch(a.pipe, batch, res.effective_iterations);
      bool same = res.outputs.size() == refs.size();
      for (std::size_t b = 0; same && b < refs.size(); ++b) same = mp::bitwise_equal(res.outputs[b], refs[b]);
      o.expect(same, a.name + " batch " + std::to_string(B) + "; ");
      ++checks;
    }
  }
  o.detail << checks << " comparisons ";
}

// 6: the closed-form block width and unroll depth are brute-force optima.
void optimality(Outcome& o) {
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> log_mem(std::log(2e5), std::log(5e7));
  const int ks[] = {2, 4, 8, 24};
  const int Ds[] = {2, 4, 8};
  int settings = 0, width_misses = 0, unroll_misses = 0;
  for (int i = 0; i < 40; ++i) {
    const double mem = std::floor(std::exp(log_mem(gen)));
    const int k = ks[gen() % 4];
    const int D = Ds[gen() % 3];
    const int p = 1 + static_cast<int>(gen() % 4);

    // Block width: widest square block whose buffers fit maximizes throughput.
    std::int64_t best_M = 0;
    double best_T = -1.0;
    for (std::int64_t M = p * D + 1;; ++M) {
      if (static_cast<double>(k) * p * D * M * M > mem) break;
      const double T = mp::testing::block_throughput(M, M, 1 << 16, 1, p, D);
      if (T > best_T) {
        best_T = T;
        best_M = M;
      }
    }
    if (best_M == 0) continue;
    const auto M_opt = md::optimal_tile_width(mem, k, p, D);
    if (std::llabs(M_opt - best_M) > 1) ++width_misses;

    // Unroll depth for that block width, l large.
    std::int64_t best_p = 0;
    best_T = -1.0;
    for (std::int64_t q = 1; q * D < best_M; ++q) {
      const double T = md::tile_throughput(static_cast<double>(best_M), static_cast<double>(best_M),
                                           kInf, 1, static_cast<double>(q), D);
      if (T > best_T) {
        best_T = T;
        best_p = q;
      }
    }
    const auto p_max = md::optimal_unroll_tiled(best_M, D);
    if (std::llabs(p_max - best_p) > 1) ++unroll_misses;
    ++settings;
  }
  o.detail << settings << " settings, " << width_misses << " width and " << unroll_misses
           << " unroll misses ";
  o.expect(settings >= 20 && width_misses == 0 && unroll_misses == 0, "");
}

// 7
void runtime_spot_check(Outcome& o) {
  const auto rep = md::predict(DesignPoint{8, 60, std::nullopt, 1, 250e6}, mp::apps::poisson_2d(),
                               MeshGeometry({200, 100}), 60000, mp::ResourceProfile::u280_ddr4());
  o.detail << "runtime " << rep.runtime_s << " s, " << rep.cycles << " cycles ";
  o.expect(rep.cycles == 4000000, "cycles");
  o.expect(rep.runtime_s == 0.016, "runtime");
}

// 8: constant and zero-derivative fields do not move.
void fixed_points(Outcome& o) {
  auto check = [&](const std::string& name, const mp::PipelineSpec& pipe, const FieldSet& in,
                   int V, int p, std::int64_t iters) {
    const auto res = sim::simulate(sim::build_pipeline(pipe, DesignPoint{V, p, std::nullopt, 1, 300e6},
                                                       in.primary.geometry()),
                                   in, iters);
    const auto ref = mp::reference::run_reference(pipe, in, iters);
    o.expect(mp::bitwise_equal(res.outputs.front(), in.primary), name + " simulator; ");
    o.expect(mp::bitwise_equal(ref, in.primary), name + " reference; ");
  };
  for (float c : {1.5f, -2.0f, 0.0f, 3.25f}) {
    const MeshGeometry g2({40, 30});
    check("poisson", mp::apps::poisson_2d(), FieldSet{mp::FieldData::filled(g2, c), {}}, 4, 5, 10);
    const MeshGeometry g3({20, 16, 12});
    check("jacobi", mp::apps::jacobi_3d(mp::testing::kDyadicJacobi),
          FieldSet{mp::FieldData::filled(g3, c), {}}, 2, 3, 6);
  }
  const auto rtm = mp::apps::rtm_forward(mp::apps::StarCoefficients{}, 0.05f);
  const MeshGeometry g({20, 18, 12}, mp::apps::kRtmArity);
  FieldSet in = mp::testing::random_inputs(rtm, g, 8);
  std::vector<float> v(in.primary.values().begin(), in.primary.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % mp::apps::kRtmArity != 0) v[i] = 0.0f;  // temporaries start empty
  }
  in.primary = mp::FieldData(g, std::move(v));
  check("rtm", rtm, in, 1, 2, 4);
  o.detail << "poisson, jacobi, rtm ";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"1 DSP-bound unroll depth (68/28/3)", table_unroll},
      {"2 tiled throughput and valid ratio (472, 98.5%; 189, 98.4%)", table_tiling},
      {"3 unroll depth for a 96-wide block, D=8", unroll_for_block},
      {"4 simulator cycles equal the closed forms", cycle_agreement},
      {"5 simulator outputs bitwise equal to the reference", oracle_equivalence},
      {"6 block width and unroll depth are brute-force optima", optimality},
      {"7 Poisson 200x100 runtime is 16 ms", runtime_spot_check},
      {"8 fixed points are exact", fixed_points},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what() << " ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %s  [%s(%.2f s)]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str(),
                secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
