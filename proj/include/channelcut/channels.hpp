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

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "channelcut/matcore.hpp"

namespace channelcut {

/// A single completely positive map [V] : rho -> V rho V^dagger.
struct ChannelTerm {
  ComplexMatrix op;
};

/// rho -> sum_i c_i V_i rho V_i^dagger with real (possibly negative) c_i.
struct ChannelMix {
  struct Entry {
    double coeff = 0.0;
    ChannelTerm term;
  };
  std::vector<Entry> terms;

  static ChannelMix single(ComplexMatrix op, double coeff = 1.0);

  /// Dimension of the term operators; 0 when empty.
  Eigen::Index dim() const;
};

/// Choi matrix sum_ij E_ij (x) A(E_ij), size N^2 x N^2.
struct ChoiMatrix {
  ComplexMatrix mat;
};

inline constexpr int kBasisSize = 16;

/// The sixteen one-qubit operations in their fixed order:
/// I, X, Y, Z, R_X, R_Y, R_Z, R_YZ, R_ZX, R_XY, pi_X, pi_Y, pi_Z, pi_YZ,
/// pi_ZX, pi_XY.
const std::array<ChannelTerm, kBasisSize>& basis16();

/// Stable labels ("I", "X", ..., "RX", ..., "piXY") in basis16 order.
const std::array<std::string_view, kBasisSize>& basis_labels();

/// Index into basis16 for a label; throws Error(kInvalidInput) if unknown.
int basis_index(std::string_view label);

namespace gates {
ComplexMatrix identity(int n_qubits);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
ComplexMatrix cnot();
ComplexMatrix toffoli();
ComplexMatrix qft(int n_qubits);
// |0><0| and |1><1| on one qubit.
ComplexMatrix proj0();
ComplexMatrix proj1();
}  // namespace gates

/// Choi matrix through the outer-product form sum_i c_i |V_i>><<V_i|.
ChoiMatrix choi(const ChannelMix& mix, int n_qubits);

/// Choi matrix straight from the definition, applying the mix to every E_ij.
/// Kept as an independent construction path.
ChoiMatrix choi_by_definition(const ChannelMix& mix, int n_qubits);

/// sum_i c_i V_i rho V_i^dagger.
ComplexMatrix apply(const ChannelMix& mix, const ComplexMatrix& rho);

/// Kronecker product of the parts; parts[0] is the most significant qubit.
ChannelTerm tensor_term(std::span<const ChannelTerm> parts);

}  // namespace channelcut
