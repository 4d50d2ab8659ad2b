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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "channelcut/channels.hpp"

namespace channelcut {

/// Real coefficients over tensor products of basis16 elements.
///
/// Each term's `basis` holds one 0-based basis16 index per qubit, qubit 0
/// first. `rescale` is the raw coefficient sum c' divided out by normalize();
/// reconstruct() multiplies every term operator by sqrt(rescale) so the
/// represented channel is unchanged.
struct QuasiDecomposition {
  struct Term {
    double coeff = 0.0;
    std::vector<int> basis;
  };

  int n_qubits = 0;
  std::vector<Term> terms;
  double gamma = 0.0;
  double residual = 0.0;
  double rescale = 1.0;

  double coefficient_sum() const;
  std::vector<double> coefficients() const;
};

enum class SolvePath {
  kFactored,  // per-qubit inverse of the 16x16 single-qubit system
  kDense,     // full least-squares over all 16^n columns, n <= 2
};

struct DecomposeOptions {
  SolvePath path = SolvePath::kFactored;
  int max_qubits = 3;
  double prune_threshold = 1e-10;
  double residual_tolerance = 1e-8;
  double imaginary_tolerance = 1e-8;
};

QuasiDecomposition decompose(const ChannelMix& target,
                             const DecomposeOptions& options = {});

/// Divides the coefficients by raw_sum and records it in `rescale`.
/// Throws Error(kNonPositiveSum) when raw_sum <= 1e-12.
QuasiDecomposition normalize(const QuasiDecomposition& d, double raw_sum);

/// normalize(d, d.coefficient_sum()).
QuasiDecomposition normalized(const QuasiDecomposition& d);

ChannelMix reconstruct(const QuasiDecomposition& d);

double gamma_of(std::span<const double> coeffs);

/// Per-qubit labels of a term, e.g. {"RZ", "RX"}.
std::vector<std::string_view> term_labels(const QuasiDecomposition::Term& t);

/// Builds a term from labels ("RZ", "piX", ...). Used to load printed
/// decompositions.
QuasiDecomposition::Term make_term(double coeff,
                                   std::span<const std::string_view> labels);

/// Assembles a decomposition from explicit terms (gamma filled in,
/// residual 0, rescale 1).
QuasiDecomposition from_terms(int n_qubits,
                              std::vector<QuasiDecomposition::Term> terms);

/// The 16x16 matrix whose column k is the row-major flattened one-qubit
/// Choi matrix of basis16()[k].
const ComplexMatrix& single_qubit_system();

}  // namespace channelcut
