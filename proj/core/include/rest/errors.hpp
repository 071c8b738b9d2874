// Copyright 2026 The ReST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace rest {

// Base type for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition.
struct ContractError : Error {
  using Error::Error;
};

// Tensor/parameter shapes do not line up; the message names both shapes.
struct DimensionError : Error {
  using Error::Error;
};

// An id fell outside its vocabulary; the message names the id.
struct IndexError : Error {
  using Error::Error;
};

// A file failed to parse; the message carries line (and column) info.
struct ParseError : Error {
  using Error::Error;
};

// Bad or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Filesystem-level failure (missing file, unwritable path).
struct IoError : Error {
  using Error::Error;
};

// Training produced a non-finite quantity.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace rest
