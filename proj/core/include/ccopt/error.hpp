/*
 * Copyright 2026 The ccopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ccopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A layout or config file that parses but violates an invariant. The
/// offending field is kept separately so callers can report it.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error("schema error in '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not place a small cell.
class PlacementInfeasible : public Error {
 public:
  using Error::Error;
};

/// Cholesky failed even after the full jitter escalation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccopt
