// Copyright 2026 The povmsim Authors
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

namespace povmsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs with incompatible shapes (dimensions, outcome counts, list lengths).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range, or a structurally invalid object.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operator that was required to be positive semidefinite is not.
class NotPositive : public Error {
 public:
  NotPositive(int index, double min_eigenvalue)
      : Error("effect " + std::to_string(index) + " is not positive semidefinite (min eigenvalue " +
              std::to_string(min_eigenvalue) + ")"),
        index_(index),
        min_eigenvalue_(min_eigenvalue) {}

  int index() const { return index_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  int index_;
  double min_eigenvalue_;
};

/// Problem too large for the dense machinery (combinatorial or dimension guard).
class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// SDP description that references unknown variables or has no constraints.
class MalformedProblem : public Error {
 public:
  using Error::Error;
};

/// The numerical solver could not produce a usable answer.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace povmsim
