/* Copyright 2026 The LET Metrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LET_METRICS_ERRORS_H_
#define LET_METRICS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace let_metrics {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A box violates its invariants (non-positive or non-finite dimensions).
class InvalidBoxError : public Error {
 public:
  using Error::Error;
};

// A ground-truth center coincides with the sensor origin, so no line of
// sight is defined.
class DegenerateGroundTruthError : public Error {
 public:
  using Error::Error;
};

// A prediction center coincides with the sensor origin.
class DegeneratePredictionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidCutoffScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed input text. Carries the 1-based line number and offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line, std::string field,
             const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": field '" + field +
              "': " + what),
        path_(std::move(path)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string path_;
  std::size_t line_;
  std::string field_;
};

// Well-formed input that breaks a record invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class MissingFileError : public Error {
 public:
  explicit MissingFileError(const std::string& path)
      : Error("no such file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class PlacementFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace let_metrics

#endif  // LET_METRICS_ERRORS_H_
