// Copyright 2026 The JPT Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace jpt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: CSV contents, assignment text, schema mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters or arguments outside an operation's domain.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evidence that has probability zero under the model, so no posterior exists.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

/// A persisted model that cannot be read back (version, structure, invariants).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace jpt
