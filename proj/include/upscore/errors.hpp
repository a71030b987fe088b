// Copyright 2026 The upscore Authors
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
#include <vector>

namespace upscore {

// Base class of everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs whose dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite input values, or a computation that overflowed to non-finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A variance or precision entry that must be positive (or nonnegative) is not.
class SingularError : public Error {
 public:
  using Error::Error;
};

// An embedding with zero Euclidean norm where a direction is required.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or usage: bad parameter values, missing required
// inputs (e.g. a total covariance for a variant that needs one).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Not enough data to estimate the requested statistics.
class EstimationError : public Error {
 public:
  using Error::Error;
};

// Trial sampling that cannot be satisfied (too few utterances or speakers).
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Detection-metric preconditions violated: empty score lists, zero variance.
class MetricError : public Error {
 public:
  using Error::Error;
};

// File contents that violate a format invariant (bad magic, duplicate ids,
// malformed records). Distinct from IoError, which is about the filesystem.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure: missing file, unreadable or unwritable path.
class IoError : public Error {
 public:
  using Error::Error;
};

// One or more trial ids that resolve to no embedding. Carries the full list
// so callers can report every missing id at once.
class MissingIdError : public DataError {
 public:
  explicit MissingIdError(std::vector<std::string> ids)
      : DataError(Format(ids)), ids_(std::move(ids)) {}

  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string Format(const std::vector<std::string>& ids) {
    std::string msg = "missing embeddings for " + std::to_string(ids.size()) +
                      " id(s):";
    for (const auto& id : ids) msg += " " + id;
    return msg;
  }

  std::vector<std::string> ids_;
};

}  // namespace upscore
