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
 * @file commands.hpp
 * @brief The four subcommands. Each returns a process exit code: 0 on
 * success, 1 when the work ran but failed (verify mismatch, capacity), 2 for
 * configuration or usage errors.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "meshpipe/core.hpp"
#include "meshpipe_cli/config.hpp"

namespace meshpipe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::filesystem::path config;
  std::optional<std::filesystem::path> input;   ///< overrides run.input
  std::optional<std::filesystem::path> output;  ///< directory (model, simulate) or CSV file (explore)
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> device;  ///< device JSON replacing the config's section
};

/// Loads the config named by `opt`, applying command-line and environment
/// overrides (the explicit --device wins over the environment).
Config resolve_config(const Options& opt);

/// Input meshes for a run: one per batch entry, read from the configured
/// file or generated from the seed.
std::vector<FieldSet> prepare_inputs(const Config& cfg);

int cmd_model(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_explore(const Options& opt, std::ostream& out, std::ostream& err);

}  // namespace meshpipe::cli
