// Copyright 2026 The qslopen Authors
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

namespace qsl {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Requested problem exceeds the configured dimension cap.
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what)
      : ValidationError("problem too large: " + what) {}
};

/// A computation produced a result violating a numerical invariant (exit 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A passage target is never reached (exit 4).
class NotReachedError : public Error {
 public:
  using Error::Error;
};

/// The initial state does not move under the generator; no finite bound.
class StationaryError : public NotReachedError {
 public:
  explicit StationaryError(const std::string& what)
      : NotReachedError("stationary state, no finite bound: " + what) {}
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kNotReached = 4;
}  // namespace exit_code

}  // namespace qsl
