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

#include <string>
#include <string_view>

#include "channelcut/hhl.hpp"
#include "channelcut/matcore.hpp"

namespace channelcut {

// Matrix files are JSON objects
//   {"rows": r, "cols": c, "entries": [[re, im], ...]}
// with entries in row-major order. Doubles are written in shortest
// round-trip form, so write-then-read is bit-identical.

std::string matrix_to_json(const ComplexMatrix& m);
/// Throws Error(kInvalidInput) on malformed text or a shape mismatch.
ComplexMatrix matrix_from_json(std::string_view text);

ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

/// HHL problem file: {"a": matrix, "b": matrix (2x1), "m": int, "t": real,
/// "c_rot": real}. Missing keys fall back to default_problem().
HhlProblem load_hhl_problem(const std::string& path);

}  // namespace channelcut
