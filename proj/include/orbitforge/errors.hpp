// Copyright 2026 The Orbitforge Authors
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

namespace orbitforge {

/// Base type for all orbitforge errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: broken invariants, bad dimensions, out-of-range values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input exceeds a hard capacity limit of the chosen algorithm.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Checked integer arithmetic would overflow.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// ODE integration produced a non-finite state.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Iterative solver failed to converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitforge
