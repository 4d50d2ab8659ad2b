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

#include "channelcut/selection.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace channelcut {

namespace {

constexpr double kUnitaryTolerance = 1e-9;
constexpr double kIdentityTolerance = 1e-9;

int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("dimension {} is not a power of two", dim));
  }
  return n;
}

ComplexMatrix zero_block_embedding(const ComplexMatrix& op, int zero_qubits) {
  const Eigen::Index dim = op.rows() << zero_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  out.topLeftCorner(op.rows(), op.cols()) = op;
  return out;
}

void check_unitary(const ComplexMatrix& u) {
  if (!is_unitary(u, kUnitaryTolerance)) {
    throw Error(ErrorKind::kNotUnitary, "target operator is not unitary");
  }
}

void check_identity(const ComplexMatrix& u, const Selection& sel,
                    const EffectiveChannel& eff) {
  const ComplexMatrix lhs = sel.p_out * u * sel.p_in;
  const double err = (lhs - eff.full_operator()).norm();
  if (err >= kIdentityTolerance) {
    throw Error(ErrorKind::kInternal,
                fmt::format("selected-channel identity violated by {:.3e}",
                            err));
  }
}

ComplexMatrix leading_projector(int n, int m, const ComplexMatrix& first,
                                const ComplexMatrix& rest) {
  ComplexMatrix p = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    if (q == 0 && m > 0) {
      p = kron(p, first);
    } else if (q < m) {
      p = kron(p, rest);
    } else {
      p = kron(p, gates::identity(1));
    }
  }
  return p;
}

}  // namespace

int Selection::n_qubits() const { return qubit_count(p_in.rows()); }

ComplexMatrix EffectiveChannel::embed(const ComplexMatrix& op) const {
  return o_out * zero_block_embedding(op, zero_qubits()) * o_in;
}

ComplexMatrix EffectiveChannel::full_operator() const {
  return embed(v_tilde);
}

EffectiveChannel EffectiveChannel::identity(int n) {
  const ComplexMatrix id = gates::identity(n);
  return EffectiveChannel{n, n, id, id, id};
}

int effective_qubits(int r_in, int r_out) {
  const int r = std::max(r_in, r_out);
  int n = 0;
  while ((1 << n) < r) ++n;
  return n;
}

Selection make_selection(const ComplexMatrix& p_in,
                         const ComplexMatrix& p_out) {
  if (p_in.rows() != p_out.rows() || p_in.cols() != p_out.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("p_in is {}x{} but p_out is {}x{}", p_in.rows(),
                            p_in.cols(), p_out.rows(), p_out.cols()));
  }
  qubit_count(p_in.rows());
  auto in = eig_projector(p_in);
  auto out = eig_projector(p_out);
  if (in.rank == 0 || out.rank == 0) {
    throw Error(ErrorKind::kInvalidInput,
                "selection projectors must have nonzero rank");
  }
  Selection sel;
  sel.p_in = p_in;
  sel.p_out = p_out;
  sel.r_in = in.rank;
  sel.r_out = out.rank;
  sel.o_in = std::move(in.o);
  sel.o_out = out.o.adjoint();
  return sel;
}

Selection zeros_selection(int n, int m_in, int m_out) {
  if (m_in < 0 || m_in > n || m_out < 0 || m_out > n) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("selection counts ({}, {}) out of range for {} "
                            "qubit(s)",
                            m_in, m_out, n));
  }
  const ComplexMatrix p0 = gates::proj0();
  return make_selection(leading_projector(n, m_in, p0, p0),
                        leading_projector(n, m_out, p0, p0));
}

Selection ancilla_selection(int n, int m) {
  if (m < 0 || m > n - 1) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("ancilla register size {} out of range for {} "
                            "qubit(s)",
                            m, n));
  }
  const ComplexMatrix p0 = gates::proj0();
  return make_selection(leading_projector(n, m + 1, p0, p0),
                        leading_projector(n, m + 1, gates::proj1(), p0));
}

EffectiveChannel effective_operator(const ComplexMatrix& u,
                                    const Selection& sel) {
  if (u.rows() != sel.p_in.rows() || u.cols() != sel.p_in.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("operator is {}x{} but selection is {}x{}",
                            u.rows(), u.cols(), sel.p_in.rows(),
                            sel.p_in.cols()));
  }
  check_unitary(u);
  EffectiveChannel eff;
  eff.n = qubit_count(u.rows());
  eff.n_tilde = effective_qubits(sel.r_in, sel.r_out);
  eff.o_in = sel.o_in;
  eff.o_out = sel.o_out;

  // P_out u P_in = o_out V o_in with V = P_d,out o_out^dag u o_in^dag P_d,in.
  const ComplexMatrix rotated = sel.o_out.adjoint() * u * sel.o_in.adjoint();
  const Eigen::Index d = Eigen::Index{1} << eff.n_tilde;
  eff.v_tilde = ComplexMatrix::Zero(d, d);
  eff.v_tilde.topLeftCorner(sel.r_out, sel.r_in) =
      rotated.topLeftCorner(sel.r_out, sel.r_in);
  check_identity(u, sel, eff);
  return eff;
}

EffectiveChannel corollary1(const ComplexMatrix& u, int m_in, int m_out) {
  const int n = qubit_count(u.rows());
  if (m_in < 0 || m_in > n || m_out < 0 || m_out > n) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("selection counts ({}, {}) out of range for {} "
                            "qubit(s)",
                            m_in, m_out, n));
  }
  check_unitary(u);
  const Eigen::Index r_in = Eigen::Index{1} << (n - m_in);
  const Eigen::Index r_out = Eigen::Index{1} << (n - m_out);
  EffectiveChannel eff;
  eff.n = n;
  eff.n_tilde = n - std::min(m_in, m_out);
  const Eigen::Index d = Eigen::Index{1} << eff.n_tilde;
  // (v_i)_j = <<E_ji|U>> = U_ji for j < r_out, i < r_in.
  eff.v_tilde = ComplexMatrix::Zero(d, d);
  eff.v_tilde.topLeftCorner(r_out, r_in) = u.topLeftCorner(r_out, r_in);
  eff.o_in = gates::identity(n);
  eff.o_out = gates::identity(n);
  return eff;
}

EffectiveChannel corollary2(const ComplexMatrix& u, int m) {
  const int n = qubit_count(u.rows());
  if (m < 0 || m > n - 1) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("ancilla register size {} out of range for {} "
                            "qubit(s)",
                            m, n));
  }
  check_unitary(u);
  EffectiveChannel eff;
  eff.n = n;
  eff.n_tilde = n - m - 1;
  const Eigen::Index r = Eigen::Index{1} << eff.n_tilde;
  const Eigen::Index half = Eigen::Index{1} << (n - 1);
  // (v_i)_j = U_{k_j, i} with k_j = 2^(n-1) + j (0-based).
  eff.v_tilde = u.block(half, 0, r, r);
  eff.o_in = gates::identity(n);
  eff.o_out = kron(gates::pauli_x(), gates::identity(n - 1));
  return eff;
}

QuasiDecomposition decompose_effective(const EffectiveChannel& eff,
                                       const DecomposeOptions& options) {
  return normalized(decompose(ChannelMix::single(eff.v_tilde), options));
}

std::pair<QuasiDecomposition, EffectiveChannel> decompose_selected(
    const ComplexMatrix& u, const Selection& sel,
    const DecomposeOptions& options) {
  EffectiveChannel eff = effective_operator(u, sel);
  QuasiDecomposition d = decompose_effective(eff, options);
  return {std::move(d), std::move(eff)};
}

}  // namespace channelcut
