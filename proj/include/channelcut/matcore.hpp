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

#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "channelcut/error.hpp"

namespace channelcut {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Largest row or column count any Kronecker construction may produce.
inline constexpr Eigen::Index kMaxDimension = Eigen::Index{1} << 14;

inline constexpr double kProjectorTolerance = 1e-9;

/// Kronecker product with a(i,j)*b in block (i,j).
/// Throws Error(kOverflow) when the result would exceed kMaxDimension.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization |A>>.
ComplexVector vectorize(const ComplexMatrix& a);

/// Inverse of vectorize for a rows x cols matrix.
ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index rows,
                          Eigen::Index cols);

/// Hilbert-Schmidt inner product <<A|B>> = Tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// E_ij = |i><j| of the given dimension.
ComplexMatrix unit_matrix(Eigen::Index dim, Eigen::Index i, Eigen::Index j);

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

struct ProjectorDiagonalization {
  ComplexMatrix o;  // o * p * o^dagger = diag(I_rank, 0)
  int rank = 0;
};

/// Diagonalizes a Hermitian projector.
///
/// Rows of `o` are the conjugated eigenvectors: the eigenvalue-1 space first,
/// then the eigenvalue-0 space. Inside each space the basis is obtained by
/// pivoted Gram-Schmidt on the columns of p (or I - p) and ordered by the
/// index of its first component with magnitude above 1e-9; that component
/// is made real positive. The result is therefore a deterministic function
/// of p.
ProjectorDiagonalization eig_projector(const ComplexMatrix& p,
                                       double tol = kProjectorTolerance);

struct LeastSquaresResult {
  RealVector x;
  double residual = 0.0;
};

/// Minimizes ||m x - y||_2. Throws Error(kRankDeficient) when the columns of
/// m are not linearly independent.
LeastSquaresResult lstsq_real(const RealMatrix& m, const RealVector& y);

// Test-support generators. Haar unitaries use QR of a complex Gaussian
// matrix with the R-diagonal phase fix.
ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);
ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols,
                             std::mt19937_64& rng);
// Pure state |psi><psi| for a Haar-random psi.
ComplexMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng);
// W diag(I_rank, 0) W^dagger for a Haar-random W.
// Full-rank mixed state G G^dagger / Tr for complex Gaussian G.
ComplexMatrix random_density(Eigen::Index dim, std::mt19937_64& rng);
ComplexMatrix random_projector(Eigen::Index dim, int rank,
                               std::mt19937_64& rng);

}  // namespace channelcut
