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

#include <utility>

#include "channelcut/qpd.hpp"

namespace channelcut {

/// Pre-selection p_in and post-selection p_out with their diagonalizers:
///   o_in  * p_in  * o_in^dagger  = diag(I_{r_in}, 0)
///   o_out^dagger * p_out * o_out = diag(I_{r_out}, 0)
struct Selection {
  ComplexMatrix p_in;
  ComplexMatrix p_out;
  int r_in = 0;
  int r_out = 0;
  ComplexMatrix o_in;
  ComplexMatrix o_out;

  int n_qubits() const;
};

/// Selected channel [P_out U P_in] expressed as
/// [o_out (|0><0|^(n - n_tilde) (x) v_tilde) o_in].
struct EffectiveChannel {
  int n = 0;
  int n_tilde = 0;
  ComplexMatrix v_tilde;  // 2^n_tilde x 2^n_tilde
  ComplexMatrix o_in;
  ComplexMatrix o_out;

  /// The leading n - n_tilde qubits carry |0><0| factors.
  int zero_qubits() const { return n - n_tilde; }

  /// o_out (|0><0|^(n - n_tilde) (x) op) o_in for a 2^n_tilde operator.
  ComplexMatrix embed(const ComplexMatrix& op) const;

  /// embed(v_tilde).
  ComplexMatrix full_operator() const;

  /// Wrapper for a plain n-qubit decomposition: no selection, identity
  /// diagonalizers.
  static EffectiveChannel identity(int n);
};

Selection make_selection(const ComplexMatrix& p_in, const ComplexMatrix& p_out);

/// |0><0|^(m_in) (x) I and |0><0|^(m_out) (x) I.
Selection zeros_selection(int n, int m_in, int m_out);

/// |0><0|^(m+1) (x) I and |1><1| (x) |0><0|^m (x) I.
Selection ancilla_selection(int n, int m);

/// Effective operator for arbitrary projectors. Throws Error(kNotUnitary) for a
/// non-unitary u and Error(kInternal) if the operator identity
/// P_out u P_in = o_out (|0><0| (x) v_tilde) o_in does not hold to 1e-9.
EffectiveChannel effective_operator(const ComplexMatrix& u,
                                    const Selection& sel);

/// Leading m_in input and m_out output qubits selected on |0>;
/// o_in = o_out = I.
EffectiveChannel corollary1(const ComplexMatrix& u, int m_in, int m_out);

/// Input |0>^(m+1), output |1>|0>^m on the leading qubits;
/// o_in = I, o_out = X (x) I.
EffectiveChannel corollary2(const ComplexMatrix& u, int m);

/// Normalized decomposition of [v_tilde] plus the effective channel that
/// wraps each term back into the n-qubit selected channel.
std::pair<QuasiDecomposition, EffectiveChannel> decompose_selected(
    const ComplexMatrix& u, const Selection& sel,
    const DecomposeOptions& options = {});

/// Same, starting from an already computed effective channel.
QuasiDecomposition decompose_effective(const EffectiveChannel& eff,
                                       const DecomposeOptions& options = {});

/// n_tilde = ceil(log2(max(r_in, r_out))).
int effective_qubits(int r_in, int r_out);

}  // namespace channelcut
