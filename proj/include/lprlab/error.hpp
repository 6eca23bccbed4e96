// Copyright 2026 The lprlab Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lprlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (CSV rows, identifiers, columns).
class DataError : public Error {
 public:
  using Error::Error;
};

// A fractional digit could not be certified at the maximum working precision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class IterationLimitExceeded : public Error {
 public:
  IterationLimitExceeded(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

class SingularBasis : public Error {
 public:
  using Error::Error;
};

// Every answer was suppressed, so there is nothing to build an LP from.
class NoUsableQueries : public Error {
 public:
  using Error::Error;
};

}  // namespace lprlab
