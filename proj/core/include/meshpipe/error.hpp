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

#pragma once

#include <stdexcept>
#include <string>

namespace meshpipe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A value violates the invariants of a domain type.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Fields, meshes or stages disagree on shape.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A pipeline does not fit the on-chip memory of its device profile.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Tile or batch settings are inconsistent with the mesh.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace meshpipe
