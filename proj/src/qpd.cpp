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

#include "channelcut/qpd.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace channelcut {

namespace {

int qubits_of(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("dimension {} is not a power of two", dim));
  }
  return n;
}

Eigen::Index pow16(int n) { return Eigen::Index{1} << (4 * n); }

// Reorders the Choi matrix into an n-mode tensor with one 16-valued index per
// qubit. Mode q's index is row_q * 4 + col_q of the one-qubit Choi matrix,
// where row_q = (i_q, a_q) and col_q = (j_q, b_q).
ComplexVector choi_to_modes(const ComplexMatrix& c, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::Index total = pow16(n);
  ComplexVector t(total);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index i = 0, a = 0, j = 0, b = 0;
    for (int q = 0; q < n; ++q) {
      const Eigen::Index f = (flat >> (4 * (n - 1 - q))) & 0xF;
      i = (i << 1) | ((f >> 3) & 1);
      a = (a << 1) | ((f >> 2) & 1);
      j = (j << 1) | ((f >> 1) & 1);
      b = (b << 1) | (f & 1);
    }
    t(flat) = c(i * dim + a, j * dim + b);
  }
  return t;
}

// Applies the 16x16 matrix m along every mode of an n-mode tensor.
template <typename Vec, typename Mat>
Vec apply_modes(const Mat& m, Vec t, int n) {
  const Eigen::Index total = t.size();
  for (int q = 0; q < n; ++q) {
    const Eigen::Index stride = pow16(n - 1 - q);
    Vec out(total);
    for (Eigen::Index outer = 0; outer < total; outer += 16 * stride) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (int r = 0; r < 16; ++r) {
          typename Vec::Scalar acc{};
          for (int k = 0; k < 16; ++k) {
            acc += m(r, k) * t(base + k * stride);
          }
          out(base + r * stride) = acc;
        }
      }
    }
    t = std::move(out);
  }
  return t;
}

const ComplexMatrix& single_qubit_inverse() {
  static const ComplexMatrix inv = [] {
    Eigen::FullPivLU<ComplexMatrix> lu(single_qubit_system());
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::kRankDeficient,
                  "one-qubit basis Choi matrices are linearly dependent");
    }
    return ComplexMatrix(lu.inverse());
  }();
  return inv;
}

std::vector<int> multi_index(Eigen::Index flat, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int q = n - 1; q >= 0; --q) {
    idx[static_cast<std::size_t>(q)] = static_cast<int>(flat & 0xF);
    flat >>= 4;
  }
  return idx;
}

ChannelTerm basis_product(const std::vector<int>& basis) {
  if (basis.empty()) return ChannelTerm{ComplexMatrix::Identity(1, 1)};
  std::vector<ChannelTerm> parts;
  parts.reserve(basis.size());
  for (int k : basis) parts.push_back(basis16()[static_cast<std::size_t>(k)]);
  return tensor_term(parts);
}

RealVector solve_factored(const ComplexMatrix& c, int n,
                          const DecomposeOptions& options, double& residual) {
  const ComplexVector target = choi_to_modes(c, n);
  const ComplexVector coeffs = apply_modes(single_qubit_inverse(), target, n);
  const double max_imag = coeffs.imag().cwiseAbs().maxCoeff();
  if (max_imag > options.imaginary_tolerance) {
    throw Error(ErrorKind::kResidualTooLarge,
                fmt::format("coefficients have imaginary part {:.3e}",
                            max_imag));
  }
  RealVector real = coeffs.real();
  const ComplexVector back =
      apply_modes(single_qubit_system(), ComplexVector(real.cast<Complex>()), n);
  residual = (back - target).norm();
  return real;
}

RealVector solve_dense(const ComplexMatrix& c, int n, double& residual) {
  if (n > 2) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("dense solve supports at most 2 qubits, got {}", n));
  }
  const Eigen::Index cols = pow16(n);
  const Eigen::Index rows = c.size();
  RealMatrix system(2 * rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const ChannelMix term{{{1.0, basis_product(multi_index(k, n))}}};
    const ComplexMatrix ck = choi(term, n).mat;
    const ComplexVector flat = vectorize(ck);
    system.col(k) << flat.real(), flat.imag();
  }
  const ComplexVector flat_target = vectorize(c);
  RealVector rhs(2 * rows);
  rhs << flat_target.real(), flat_target.imag();
  auto solution = lstsq_real(system, rhs);
  residual = solution.residual;
  return solution.x;
}

}  // namespace

const ComplexMatrix& single_qubit_system() {
  static const ComplexMatrix m = [] {
    ComplexMatrix sys(16, 16);
    for (int k = 0; k < kBasisSize; ++k) {
      const ComplexVector v = vectorize(basis16()[static_cast<std::size_t>(k)].op);
      const ComplexMatrix c1 = v * v.adjoint();
      for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) sys(r * 4 + col, k) = c1(r, col);
      }
    }
    return sys;
  }();
  return m;
}

double QuasiDecomposition::coefficient_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coeff;
  return s;
}

std::vector<double> QuasiDecomposition::coefficients() const {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(t.coeff);
  return out;
}

double gamma_of(std::span<const double> coeffs) {
  return std::accumulate(coeffs.begin(), coeffs.end(), 0.0,
                         [](double acc, double c) { return acc + std::abs(c); });
}

QuasiDecomposition decompose(const ChannelMix& target,
                             const DecomposeOptions& options) {
  if (target.terms.empty()) {
    throw Error(ErrorKind::kInvalidInput, "target channel has no terms");
  }
  const int n = qubits_of(target.dim());
  if (n > options.max_qubits) {
    throw Error(ErrorKind::kOverflow,
                fmt::format("{}-qubit target exceeds the {}-qubit limit", n,
                            options.max_qubits));
  }
  const ComplexMatrix c = choi(target, n).mat;

  double residual = 0.0;
  const RealVector coeffs = options.path == SolvePath::kDense
                                ? solve_dense(c, n, residual)
                                : solve_factored(c, n, options, residual);
  if (residual > options.residual_tolerance) {
    throw Error(ErrorKind::kResidualTooLarge,
                fmt::format("Choi residual {:.3e} exceeds {:.1e}", residual,
                            options.residual_tolerance));
  }

  QuasiDecomposition out;
  out.n_qubits = n;
  out.residual = residual;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    if (std::abs(coeffs(k)) < options.prune_threshold) continue;
    out.terms.push_back({coeffs(k), multi_index(k, n)});
  }
  out.gamma = gamma_of(out.coefficients());
  return out;
}

QuasiDecomposition normalize(const QuasiDecomposition& d, double raw_sum) {
  if (!(raw_sum > 1e-12)) {
    throw Error(ErrorKind::kNonPositiveSum,
                fmt::format("coefficient sum {:.6e} is not positive", raw_sum));
  }
  QuasiDecomposition out = d;
  for (auto& t : out.terms) t.coeff /= raw_sum;
  out.rescale = d.rescale * raw_sum;
  out.gamma = gamma_of(out.coefficients());
  return out;
}

QuasiDecomposition normalized(const QuasiDecomposition& d) {
  return normalize(d, d.coefficient_sum());
}

ChannelMix reconstruct(const QuasiDecomposition& d) {
  ChannelMix mix;
  const double scale = std::sqrt(d.rescale);
  for (const auto& t : d.terms) {
    ChannelTerm term = basis_product(t.basis);
    term.op *= scale;
    mix.terms.push_back({t.coeff, std::move(term)});
  }
  return mix;
}

std::vector<std::string_view> term_labels(const QuasiDecomposition::Term& t) {
  std::vector<std::string_view> out;
  out.reserve(t.basis.size());
  for (int k : t.basis) out.push_back(basis_labels()[static_cast<std::size_t>(k)]);
  return out;
}

QuasiDecomposition::Term make_term(double coeff,
                                   std::span<const std::string_view> labels) {
  QuasiDecomposition::Term t;
  t.coeff = coeff;
  for (auto label : labels) t.basis.push_back(basis_index(label));
  return t;
}

QuasiDecomposition from_terms(int n_qubits,
                              std::vector<QuasiDecomposition::Term> terms) {
  QuasiDecomposition d;
  d.n_qubits = n_qubits;
  for (const auto& t : terms) {
    if (static_cast<int>(t.basis.size()) != n_qubits) {
      throw Error(ErrorKind::kDimensionMismatch,
                  fmt::format("term has {} factors for {} qubit(s)",
                              t.basis.size(), n_qubits));
    }
  }
  d.terms = std::move(terms);
  d.gamma = gamma_of(d.coefficients());
  return d;
}

}  // namespace channelcut
