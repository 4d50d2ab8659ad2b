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
#include <utility>
#include <variant>
#include <vector>

#include "channelcut/qpd.hpp"
#include "channelcut/selection.hpp"

namespace channelcut {

/// Density matrix over n qubits. Traces below one are allowed after
/// post-selection.
struct DensityMatrix {
  int n = 0;
  ComplexMatrix mat;

  static DensityMatrix basis_state(int n, Eigen::Index index);
  static DensityMatrix pure(const ComplexVector& psi);

  double trace() const { return mat.trace().real(); }
  DensityMatrix normalized() const;
};

struct OneQubitGate {
  int qubit = 0;
  ComplexMatrix u;
  std::string label;
};

struct CnotGate {
  int control = 0;
  int target = 0;
};

/// Non-unitary one-qubit operation rho -> K rho K^dagger (measure-and-prepare
/// style terms such as pi_X = |+><+|).
struct LocalOperation {
  int qubit = 0;
  ComplexMatrix op;
  std::string label;
};

using Gate = std::variant<OneQubitGate, CnotGate, LocalOperation>;

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Throws Error(kInvalidInput) for a bad index, Error(kNotUnitary) for a
  /// non-unitary matrix.
  Circuit& one_qubit(int qubit, ComplexMatrix u, std::string label = "U");
  Circuit& cnot(int control, int target);
  Circuit& local_operation(int qubit, ComplexMatrix op,
                           std::string label = "K");
  Circuit& append(const Circuit& other);

  int depth() const;
  int cnot_count() const;

 private:
  void check_qubit(int q) const;

  int n_;
  std::vector<Gate> gates_;
};

/// Depolarizing probabilities applied after one-qubit gates (on the gate's
/// qubit) and after CNOTs (independently on control and target).
struct NoiseModel {
  double p_local = 0.0;
  double p_cnot = 0.0;

  void validate() const;
  bool noiseless() const { return p_local == 0.0 && p_cnot == 0.0; }
};

void apply_one_qubit(ComplexMatrix& rho, int n, int qubit,
                     const ComplexMatrix& op);
void apply_cnot(ComplexMatrix& rho, int n, int control, int target);

/// (1 - p) rho + p (I/2) (x) Tr_qubit(rho) on the given qubit.
void depolarize(ComplexMatrix& rho, int n, int qubit, double p);

DensityMatrix run(const Circuit& circuit, const DensityMatrix& rho0,
                  const NoiseModel& noise = {});

/// Matrix of a noiseless circuit, qubit 0 most significant.
ComplexMatrix circuit_unitary(const Circuit& circuit);

/// (P rho P, Tr(rho P)); the caller decides how to treat zero probability.
std::pair<DensityMatrix, double> postselect(const DensityMatrix& rho,
                                            const ComplexMatrix& projector);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 of two unit-trace states.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

struct McOptions {
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 0;
  // Samples are split into contiguous per-worker chunks. Sample i uses draw
  // i of the seed's counter stream, so the worker count changes only the
  // summation order (differences within 1e-12).
  int workers = 1;
  NoiseModel noise;
};

/// Output of one decomposition term on rho0 under noise, including the
/// sqrt(rescale) operator factor. The selection wrapper o_in / o_out is
/// applied exactly; each one-qubit factor is followed by local noise.
ComplexMatrix term_output(const QuasiDecomposition& d,
                          const QuasiDecomposition::Term& term,
                          const EffectiveChannel& wrap,
                          const DensityMatrix& rho0, const NoiseModel& noise);

/// Signed Monte-Carlo estimate of Tr(obs * channel(rho0)): term i is drawn
/// with probability |c_i|/gamma and contributes gamma * sign(c_i) * Tr(obs *
/// term_i(rho0)).
McEstimate mc_expectation(const QuasiDecomposition& d,
                          const EffectiveChannel& wrap,
                          const DensityMatrix& rho0, const ComplexMatrix& obs,
                          const McOptions& options);

struct McState {
  ComplexMatrix mat;  // Hermitian, possibly not positive
  std::int64_t n_samples = 0;  // 0 for the exact weighted sum
  double gamma = 0.0;
  std::uint64_t seed = 0;
};

/// Signed average of sampled term outputs.
McState mc_state(const QuasiDecomposition& d, const EffectiveChannel& wrap,
                 const DensityMatrix& rho0, const McOptions& options);

/// Exact weighted sum over every term.
McState mc_state_exact(const QuasiDecomposition& d,
                       const EffectiveChannel& wrap, const DensityMatrix& rho0,
                       const NoiseModel& noise = {});

struct ProjectedState {
  DensityMatrix state;    // unit trace, positive semidefinite
  double negativity = 0.0;  // sum of |negative eigenvalues| / Tr before clip
};

/// Clips negative eigenvalues of a Hermitian matrix and renormalizes.
ProjectedState project_to_state(const ComplexMatrix& mat);

}  // namespace channelcut
