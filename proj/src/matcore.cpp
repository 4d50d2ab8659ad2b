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

#include "channelcut/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace channelcut {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNotAProjector: return "NotAProjector";
    case ErrorKind::kNotUnitary: return "NotUnitary";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kResidualTooLarge: return "ResidualTooLarge";
    case ErrorKind::kNonPositiveSum: return "NonPositiveSum";
    case ErrorKind::kSingular: return "Singular";
    case ErrorKind::kEmptyDecomposition: return "EmptyDecomposition";
    case ErrorKind::kEigenvalueNotEncodable: return "EigenvalueNotEncodable";
    case ErrorKind::kConstantTooLarge: return "ConstantTooLarge";
    case ErrorKind::kInternal: return "Internal";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRankDeficient:
    case ErrorKind::kResidualTooLarge:
    case ErrorKind::kNonPositiveSum:
    case ErrorKind::kInternal:
      return false;
    default:
      return true;
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw Error(ErrorKind::kOverflow,
                fmt::format("kron result {}x{} exceeds the {} limit", rows,
                            cols, kMaxDimension));
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vectorize(const ComplexMatrix& a) {
  // Eigen storage is column-major, so the raw buffer is already |A>>.
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index rows,
                          Eigen::Index cols) {
  if (rows * cols != v.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("cannot reshape length {} into {}x{}", v.size(),
                            rows, cols));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("hs_inner shapes {}x{} and {}x{} differ", a.rows(),
                            a.cols(), b.rows(), b.cols()));
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

ComplexMatrix unit_matrix(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() &&
         (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix id = ComplexMatrix::Identity(m.rows(), m.cols());
  return (m * m.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

namespace {

constexpr double kSignificantComponent = 1e-9;

Eigen::Index first_significant(const ComplexVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > kSignificantComponent) return k;
  }
  return v.size();
}

// Orthonormal basis of the column space of `span` with exactly `count`
// vectors, built by Gram-Schmidt that always takes the column with the
// largest remaining norm (lowest index on ties).
std::vector<ComplexVector> canonical_basis(const ComplexMatrix& span,
                                           int count) {
  std::vector<ComplexVector> basis;
  ComplexMatrix residual = span;
  for (int found = 0; found < count; ++found) {
    Eigen::Index best = 0;
    const double best_norm = residual.colwise().norm().maxCoeff(&best);
    if (best_norm < 1e-6) break;
    ComplexVector v = residual.col(best) / best_norm;
    // Second pass keeps the basis orthonormal to machine precision.
    for (const auto& b : basis) v -= b * b.dot(v);
    v.normalize();
    basis.push_back(v);
    for (int pass = 0; pass < 2; ++pass) {
      residual -= v * (v.adjoint() * residual);
    }
  }
  if (static_cast<int>(basis.size()) != count) {
    throw Error(ErrorKind::kInternal,
                fmt::format("projector basis construction found {} of {} "
                            "vectors",
                            basis.size(), count));
  }
  for (auto& v : basis) {
    const Eigen::Index k = first_significant(v);
    if (k < v.size()) v *= std::conj(v(k)) / std::abs(v(k));
  }
  std::stable_sort(basis.begin(), basis.end(),
                   [](const ComplexVector& x, const ComplexVector& y) {
                     return first_significant(x) < first_significant(y);
                   });
  return basis;
}

}  // namespace

ProjectorDiagonalization eig_projector(const ComplexMatrix& p, double tol) {
  if (p.rows() != p.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("projector must be square, got {}x{}", p.rows(),
                            p.cols()));
  }
  if (!is_hermitian(p, tol)) {
    throw Error(ErrorKind::kNotHermitian, "projector is not Hermitian");
  }
  const ComplexMatrix herm = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm,
                                                      Eigen::EigenvaluesOnly);
  int rank = 0;
  for (double ev : solver.eigenvalues()) {
    if (std::abs(ev - 1.0) <= tol) {
      ++rank;
    } else if (std::abs(ev) > tol) {
      throw Error(ErrorKind::kNotAProjector,
                  fmt::format("eigenvalue {} is neither 0 nor 1", ev));
    }
  }
  const Eigen::Index dim = p.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  auto range = canonical_basis(herm, rank);
  auto kernel = canonical_basis(id - herm, static_cast<int>(dim) - rank);

  ProjectorDiagonalization out;
  out.rank = rank;
  out.o.resize(dim, dim);
  Eigen::Index row = 0;
  for (const auto& v : range) out.o.row(row++) = v.adjoint();
  for (const auto& v : kernel) out.o.row(row++) = v.adjoint();
  return out;
}

LeastSquaresResult lstsq_real(const RealMatrix& m, const RealVector& y) {
  if (m.rows() != y.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("system has {} rows but rhs has {} entries",
                            m.rows(), y.size()));
  }
  if (m.rows() < m.cols()) {
    throw Error(ErrorKind::kRankDeficient,
                "underdetermined system: fewer rows than unknowns");
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
  qr.setThreshold(1e-10);
  if (qr.rank() < m.cols()) {
    throw Error(ErrorKind::kRankDeficient,
                fmt::format("columns are dependent: rank {} < {}", qr.rank(),
                            m.cols()));
  }
  LeastSquaresResult out;
  out.x = qr.solve(y);
  out.residual = (m * out.x - y).norm();
  return out;
}

ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng) {
  ComplexVector psi = random_complex(dim, 1, rng).col(0);
  psi.normalize();
  return psi * psi.adjoint();
}

ComplexMatrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

ComplexMatrix random_projector(Eigen::Index dim, int rank,
                               std::mt19937_64& rng) {
  const ComplexMatrix w = random_unitary(dim, rng);
  ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < rank; ++k) d(k, k) = 1.0;
  ComplexMatrix p = w * d * w.adjoint();
  return 0.5 * (p + p.adjoint());
}

}  // namespace channelcut
