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

#include "channelcut/channels.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace channelcut {

namespace {

constexpr Complex kI{0.0, 1.0};

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void check_qubit_dim(Eigen::Index dim, int n_qubits, const char* what) {
  if (n_qubits < 0 || dim != (Eigen::Index{1} << n_qubits)) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("{}: operator dimension {} does not match {} "
                            "qubit(s)",
                            what, dim, n_qubits));
  }
}

}  // namespace

ChannelMix ChannelMix::single(ComplexMatrix op, double coeff) {
  ChannelMix mix;
  mix.terms.push_back({coeff, ChannelTerm{std::move(op)}});
  return mix;
}

Eigen::Index ChannelMix::dim() const {
  return terms.empty() ? 0 : terms.front().term.op.rows();
}

namespace gates {

ComplexMatrix identity(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return ComplexMatrix::Identity(dim, dim);
}
ComplexMatrix pauli_x() { return mat2(0, 1, 1, 0); }
ComplexMatrix pauli_y() { return mat2(0, -kI, kI, 0); }
ComplexMatrix pauli_z() { return mat2(1, 0, 0, -1); }
ComplexMatrix hadamard() {
  return mat2(1, 1, 1, -1) / std::numbers::sqrt2;
}
ComplexMatrix proj0() { return mat2(1, 0, 0, 0); }
ComplexMatrix proj1() { return mat2(0, 0, 0, 1); }

ComplexMatrix cnot() {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

ComplexMatrix toffoli() {
  ComplexMatrix u = ComplexMatrix::Identity(8, 8);
  u(6, 6) = u(7, 7) = 0.0;
  u(6, 7) = u(7, 6) = 1.0;
  return u;
}

ComplexMatrix qft(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix u(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      // Reduce the exponent first so omega^(jk) is exact for small dims.
      const auto e = static_cast<double>((j * k) % dim);
      u(j, k) = std::polar(norm, 2.0 * std::numbers::pi * e /
                                     static_cast<double>(dim));
    }
  }
  return u;
}

}  // namespace gates

const std::array<ChannelTerm, kBasisSize>& basis16() {
  static const std::array<ChannelTerm, kBasisSize> basis = [] {
    const ComplexMatrix id = gates::identity(1);
    const ComplexMatrix x = gates::pauli_x();
    const ComplexMatrix y = gates::pauli_y();
    const ComplexMatrix z = gates::pauli_z();
    const double r = 1.0 / std::numbers::sqrt2;
    return std::array<ChannelTerm, kBasisSize>{
        ChannelTerm{id},
        ChannelTerm{x},
        ChannelTerm{y},
        ChannelTerm{z},
        ChannelTerm{r * (id + kI * x)},
        ChannelTerm{r * (id + kI * y)},
        ChannelTerm{r * (id + kI * z)},
        ChannelTerm{r * (y + z)},
        ChannelTerm{r * (z + x)},
        ChannelTerm{r * (x + y)},
        ChannelTerm{0.5 * (id + x)},
        ChannelTerm{0.5 * (id + y)},
        ChannelTerm{0.5 * (id + z)},
        ChannelTerm{0.5 * (y + kI * z)},
        ChannelTerm{0.5 * (z + kI * x)},
        ChannelTerm{0.5 * (x + kI * y)},
    };
  }();
  return basis;
}

const std::array<std::string_view, kBasisSize>& basis_labels() {
  static constexpr std::array<std::string_view, kBasisSize> labels = {
      "I",  "X",  "Y",   "Z",   "RX",  "RY",   "RZ",   "RYZ",
      "RZX", "RXY", "piX", "piY", "piZ", "piYZ", "piZX", "piXY"};
  return labels;
}

int basis_index(std::string_view label) {
  const auto& labels = basis_labels();
  for (int k = 0; k < kBasisSize; ++k) {
    if (labels[k] == label) return k;
  }
  throw Error(ErrorKind::kInvalidInput,
              fmt::format("unknown basis label '{}'", label));
}

ChoiMatrix choi(const ChannelMix& mix, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ChoiMatrix out{ComplexMatrix::Zero(dim * dim, dim * dim)};
  for (const auto& [coeff, term] : mix.terms) {
    check_qubit_dim(term.op.rows(), n_qubits, "choi");
    if (term.op.cols() != term.op.rows()) {
      throw Error(ErrorKind::kDimensionMismatch, "choi: operator not square");
    }
    const ComplexVector v = vectorize(term.op);
    out.mat.noalias() += coeff * (v * v.adjoint());
  }
  return out;
}

ChoiMatrix choi_by_definition(const ChannelMix& mix, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  for (const auto& entry : mix.terms) {
    check_qubit_dim(entry.term.op.rows(), n_qubits, "choi_by_definition");
  }
  ChoiMatrix out{ComplexMatrix::Zero(dim * dim, dim * dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const ComplexMatrix e = unit_matrix(dim, i, j);
      out.mat += kron(e, apply(mix, e));
    }
  }
  return out;
}

ComplexMatrix apply(const ChannelMix& mix, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& [coeff, term] : mix.terms) {
    if (term.op.cols() != rho.rows() || rho.rows() != rho.cols()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  fmt::format("apply: operator {}x{} vs state {}x{}",
                              term.op.rows(), term.op.cols(), rho.rows(),
                              rho.cols()));
    }
    out.noalias() += coeff * (term.op * rho * term.op.adjoint());
  }
  return out;
}

ChannelTerm tensor_term(std::span<const ChannelTerm> parts) {
  if (parts.empty()) {
    throw Error(ErrorKind::kInvalidInput, "tensor_term needs at least one part");
  }
  ComplexMatrix op = parts.front().op;
  for (const auto& part : parts.subspan(1)) {
    if (part.op.rows() != part.op.cols()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "tensor_term: operators must be square");
    }
    op = kron(op, part.op);
  }
  return ChannelTerm{std::move(op)};
}

}  // namespace channelcut
