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
 * @file report.hpp
 * @brief Report emission. Reals are written with 9 significant digits and
 * integers exactly, so a parsed report reproduces the written values.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "meshpipe/explore.hpp"
#include "meshpipe/model.hpp"
#include "meshpipe/simulator.hpp"

namespace meshpipe::cli {

/// `v` rounded to 9 significant digits.
double round9(double v);
std::string format_real(double v);

nlohmann::json to_json(const DesignPoint& d);
nlohmann::json to_json(const ResourceProfile& r);
nlohmann::json to_json(const MeshGeometry& g);
nlohmann::json to_json(const model::ModelReport& rep);
/// Counters of a simulation (output fields are written separately).
nlohmann::json to_json(const sim::SimResult& res);

model::ModelReport model_report_from_json(const nlohmann::json& j);
DesignPoint design_from_json(const nlohmann::json& j);

void write_model_text(std::ostream& out, const model::ModelReport& rep);
void write_sim_text(std::ostream& out, const sim::SimResult& res, const model::ModelReport& rep);

/// Explore table columns, in order.
const std::vector<std::string>& explore_columns();
void write_explore_csv(std::ostream& out, const explore::Exploration& ex);

}  // namespace meshpipe::cli
