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
 * @file config.hpp
 * @brief JSON run configuration.
 *
 * Sections: "mesh", one of "app" or "kernel", "device", "design", "run".
 * Unknown keys anywhere are errors. See README.md for every key.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "meshpipe/core.hpp"
#include "meshpipe/explore.hpp"

namespace meshpipe::cli {

/// Environment variable naming a JSON device file that replaces the
/// config's "device" section.
inline constexpr const char* kDeviceProfileEnv = "MESHPIPE_DEVICE_PROFILE";

struct Config {
  PipelineSpec pipeline;
  MeshGeometry geometry;
  ResourceProfile device;
  DesignPoint design;
  std::int64_t iterations = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::optional<std::filesystem::path> input;
  std::map<std::string, std::filesystem::path> pointwise_inputs;
  explore::Constraints explore;
};

/// Throws ConfigurationError naming the offending key.
Config parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

ResourceProfile parse_device(const nlohmann::json& device);

/// Reads `path`; a set `device_override` path replaces the device section.
Config load_config(const std::filesystem::path& path,
                   const std::optional<std::filesystem::path>& device_override = std::nullopt);

/// The device override from the environment, if set and non-empty.
std::optional<std::filesystem::path> device_override_from_env();

}  // namespace meshpipe::cli
