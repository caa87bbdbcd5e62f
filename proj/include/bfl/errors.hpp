// Copyright 2026 The bfl Authors.
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

namespace bfl {

// Validation errors map to CLI exit code 1, accuracy failures to 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Path points or pairs that violate the declared ordering.
struct OrderingError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct DomainError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct RangeError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct PreconditionError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct SimulationError : Error {
  using Error::Error;
};

struct StarvationError : Error {
  StarvationError(const std::string& what, double rate)
      : Error(what), acceptance_rate(rate) {}
  double acceptance_rate;
};

struct AccuracyError : Error {
  using Error::Error;
};

}  // namespace bfl
