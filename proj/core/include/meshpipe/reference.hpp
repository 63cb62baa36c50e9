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
 * @file reference.hpp
 * @brief Golden nested-loop executor used as the numerical oracle for the
 * streaming simulator.
 *
 * Every iteration applies each stage of the pipeline to the whole mesh,
 * double-buffered. A stage computes its stencil at interior cells (at least
 * D/2 cells from every mesh edge, D being the stage order); at boundary cells
 * the stage's BoundaryMode applies. Arithmetic is single precision with taps
 * accumulated in declaration order.
 */

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "meshpipe/core.hpp"

namespace meshpipe::reference {

/// Primary field after `n_iter` iterations. Throws GeometryError when the
/// inputs do not match the pipeline.
FieldData run_reference(const PipelineSpec& pipe, const FieldSet& inputs, std::int64_t n_iter);

/// run_reference over each input set; every set must share one geometry.
std::vector<FieldData> run_reference_batch(const PipelineSpec& pipe,
                                           std::span<const FieldSet> batch, std::int64_t n_iter);

}  // namespace meshpipe::reference
