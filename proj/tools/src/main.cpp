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


#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "meshpipe_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace meshpipe::cli;
  CLI::App app{"meshpipe: analytic model, cycle simulator and design explorer for streaming stencil pipelines"};
  app.require_subcommand(1);

  Options opt;
  std::string input, output, device;
  int jobs = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", opt.config, "JSON run configuration")->required();
    sub->add_option("--input,-i", input, "input mesh file (STNF, or text when *.txt)");
    sub->add_option("--output,-o", output, "output directory (CSV file for explore)");
    sub->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for generated inputs");
    sub->add_option("--device", device,
                    std::string("device JSON replacing the config section (also ") + kDeviceProfileEnv + ")");
  };

  auto* model = app.add_subcommand("model", "predict cycles, runtime and limits");
  auto* simulate = app.add_subcommand("simulate", "run the cycle simulator and write outputs");
  auto* verify = app.add_subcommand("verify", "check the simulator against the reference and the model");
  auto* explore = app.add_subcommand("explore", "rank feasible designs as CSV");
  for (auto* sub : {model, simulate, verify, explore}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  auto given = [](const CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  const CLI::App* sub = app.get_subcommands().front();
  if (given(sub, "--input")) opt.input = input;
  if (given(sub, "--output")) opt.output = output;
  if (given(sub, "--jobs")) opt.jobs = jobs;
  if (given(sub, "--seed")) opt.seed = seed;
  if (given(sub, "--device")) opt.device = device;

  if (sub == model) return cmd_model(opt, std::cout, std::cerr);
  if (sub == simulate) return cmd_simulate(opt, std::cout, std::cerr);
  if (sub == verify) return cmd_verify(opt, std::cout, std::cerr);
  return cmd_explore(opt, std::cout, std::cerr);
}
