// Copyright 2026 The channelcut Authors
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
#include <string_view>

namespace channelcut {

enum class ErrorKind {
  kInvalidInput,
  kDimensionMismatch,
  kOverflow,
  kNotHermitian,
  kNotAProjector,
  kNotUnitary,
  kRankDeficient,
  kResidualTooLarge,
  kNonPositiveSum,
  kSingular,
  kEmptyDecomposition,
  kEigenvalueNotEncodable,
  kConstantTooLarge,
  kInternal,
};

std::string_view to_string(ErrorKind kind);

// Validation failures are caller mistakes; the remaining kinds come from
// numerical routines and map to a different CLI exit code.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace channelcut
