// Copyright 2026 The VDR Engine Authors.
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

namespace vdr {

// Base for every failure the engine reports on bad input data. The CLI maps
// these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bytes in an embedding file; message names the byte offset.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Two vectors or records disagree on h.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Values that violate a type invariant (zero-norm rows, bad boxes, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Metric computation that has no defined value (missing qrels, no relevant
// documents for a query).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Bad caller-supplied parameter (k < 1, tau <= 0, incompatible mode).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdr
