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

#include <cstdint>
#include <string>
#include <vector>

#include "channelcut/qpd.hpp"
#include "channelcut/selection.hpp"
#include "channelcut/simkit.hpp"

namespace channelcut {

/// A 2x2 Hermitian system a x = b solved on m eigenvalue-register qubits.
/// Qubit order: rotation ancilla, register (most significant bit first),
/// working qubit.
struct HhlProblem {
  ComplexMatrix a;
  ComplexVector b;
  int m = 3;
  double t = 0.0;
  // Rotation constant in eigenvalue units; 0 selects the smallest
  // eigenvalue of a.
  double c_rot = 0.0;

  int n_qubits() const { return m + 2; }
};

/// a = [[1, -1/3], [-1/3, 1]], b = (1, 0), m = 3, t = 3 pi / 4.
HhlProblem default_problem();

struct HhlCircuit {
  ComplexMatrix u;  // exact block product
  Circuit circuit;  // one-qubit gates and CNOTs only
};

/// Throws Error(kEigenvalueNotEncodable) when an eigenvalue of a is not a
/// register value in 1..2^m - 1 after scaling by t 2^m / (2 pi), and
/// Error(kConstantTooLarge) when c_rot exceeds an encoded eigenvalue.
HhlCircuit build_hhl(const HhlProblem& problem);

/// Classical a^-1 b. Throws Error(kSingular).
ComplexVector solve_reference(const HhlProblem& problem);

/// Register value of each eigenvalue of a (ascending eigenvalue order).
std::vector<int> encoded_register_values(const HhlProblem& problem);

/// u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta) with
/// Rz(x) = diag(e^{-ix/2}, e^{ix/2}).
struct ZyzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};
ZyzAngles zyz_decompose(const ComplexMatrix& u);
ComplexMatrix rz(double theta);
ComplexMatrix ry(double theta);
ComplexMatrix phase(double theta);  // diag(1, e^{i theta})

/// Controlled-u as two CNOTs and one-qubit gates (exact, including phase).
void append_controlled(Circuit& c, int control, int target,
                       const ComplexMatrix& u);

/// Multiplexed RY on target: angle[k] is applied when the controls, read
/// most significant first, hold k. Uses 2^|controls| RY gates and
/// 2^(|controls|+1) - 2 CNOTs.
void append_uniformly_controlled_ry(Circuit& c, const std::vector<int>& controls,
                                    int target,
                                    const std::vector<double>& angles);

/// Inverse QFT on the listed qubits (most significant first), with swaps.
void append_inverse_qft(Circuit& c, const std::vector<int>& qubits);

struct HhlRow {
  NoiseModel noise;
  double fidelity_without = 0.0;
  double success_probability = 0.0;
  double fidelity_with_exact = 0.0;
  double fidelity_with_sampled = 0.0;
  double negativity = 0.0;  // of the sampled signed state
};

struct HhlReport {
  double gamma = 0.0;
  QuasiDecomposition decomposition;  // normalized
  std::vector<HhlRow> rows;
  int n_tilde = 0;
  int depth = 0;
  int cnot_count = 0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

HhlReport run_study(const HhlProblem& problem,
                    const std::vector<NoiseModel>& noise_settings,
                    std::int64_t n_samples, std::uint64_t seed,
                    int workers = 1);

}  // namespace channelcut
