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

#include <random>

#include "doctest.h"

#include "channelcut/channels.hpp"
#include "channelcut/matcore.hpp"

using namespace channelcut;

namespace {

ComplexMatrix plus_projector() {
  ComplexMatrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return p;
}

}  // namespace

TEST_CASE("kron basics") {
  CHECK(kron(gates::identity(1), gates::identity(1))
            .isApprox(ComplexMatrix::Identity(4, 4)));
  ComplexMatrix anti = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) anti(i, 3 - i) = 1.0;
  CHECK((kron(gates::pauli_x(), gates::pauli_x()) - anti).norm() == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_complex(2, 2, rng);
    const ComplexMatrix b = random_complex(2, 3, rng);
    const ComplexMatrix c = random_complex(3, 2, rng);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() < 1e-12);
  }
}

TEST_CASE("kron rejects oversized products") {
  const ComplexMatrix big = ComplexMatrix::Identity(1 << 8, 1);
  try {
    kron(big, kron(big, ComplexMatrix::Identity(2, 1)));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOverflow);
  }
}

TEST_CASE("vectorize stacks columns") {
  const ComplexMatrix e = unit_matrix(2, 0, 0);
  ComplexVector expected = ComplexVector::Zero(4);
  expected(0) = 1.0;
  CHECK(vectorize(e) == expected);
  CHECK(vectorize(unit_matrix(2, 1, 0))(1) == Complex(1.0));
  CHECK(vectorize(unit_matrix(2, 0, 1))(2) == Complex(1.0));

  std::mt19937_64 rng(3);
  const ComplexMatrix m = random_complex(4, 4, rng);
  CHECK(devectorize(vectorize(m), 4, 4) == m);
}

TEST_CASE("vec(ABC) = (C^T kron A) vec(B)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index r = 1 + trial % 8, k = 1 + (trial / 8) % 8,
                       l = 1 + (trial * 3) % 8, c = 1 + (trial * 5) % 8;
    const ComplexMatrix a = random_complex(r, k, rng);
    const ComplexMatrix b = random_complex(k, l, rng);
    const ComplexMatrix cm = random_complex(l, c, rng);
    const ComplexVector lhs = vectorize(a * b * cm);
    const ComplexVector rhs = kron(cm.transpose(), a) * vectorize(b);
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("hs_inner") {
  const ComplexMatrix id = gates::identity(1);
  CHECK(std::abs(hs_inner(id, id) - Complex(2.0)) < 1e-15);
  CHECK(std::abs(hs_inner(gates::pauli_x(), gates::pauli_y())) < 1e-15);
  std::mt19937_64 rng(9);
  const ComplexMatrix m = random_complex(3, 3, rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(hs_inner(unit_matrix(3, i, j), m) - m(i, j)) < 1e-15);
    }
  }
  CHECK_THROWS_AS(hs_inner(id, gates::identity(2)), Error);
}

TEST_CASE("eig_projector on a diagonal projector") {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = p(1, 1) = 1.0;
  const auto d = eig_projector(p);
  CHECK(d.rank == 2);
  CHECK((d.o - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("eig_projector on |+><+|") {
  const auto d = eig_projector(plus_projector());
  CHECK(d.rank == 1);
  ComplexMatrix target = ComplexMatrix::Zero(2, 2);
  target(0, 0) = 1.0;
  CHECK((d.o * plus_projector() * d.o.adjoint() - target).norm() < 1e-12);
  ComplexVector plus(2);
  plus << M_SQRT1_2, M_SQRT1_2;
  CHECK(std::abs((d.o * plus)(0) - Complex(1.0)) < 1e-12);
}

TEST_CASE("eig_projector on an X-conjugated block projector") {
  ComplexMatrix block = ComplexMatrix::Zero(4, 4);
  block(0, 0) = block(1, 1) = 1.0;
  const ComplexMatrix x = kron(gates::pauli_x(), gates::identity(1));
  const ComplexMatrix p = x * block * x;
  const auto d = eig_projector(p);
  CHECK(d.rank == 2);
  CHECK((d.o * p * d.o.adjoint() - block).norm() < 1e-12);
}

TEST_CASE("eig_projector is deterministic and block-diagonalizes") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index dim = Eigen::Index{1} << (1 + trial % 3);
    const int rank = static_cast<int>(1 + trial % dim);
    const ComplexMatrix p = random_projector(dim, rank, rng);
    const auto d = eig_projector(p);
    REQUIRE(d.rank == rank);
    ComplexMatrix block = ComplexMatrix::Zero(dim, dim);
    block.topLeftCorner(rank, rank).setIdentity();
    CHECK((d.o * d.o.adjoint() - ComplexMatrix::Identity(dim, dim)).norm() <
          1e-10);
    CHECK((d.o * p * d.o.adjoint() - block).norm() < 1e-10);
    CHECK(eig_projector(p).o == d.o);
  }
}

TEST_CASE("eig_projector tie-break gives a real positive leading entry") {
  std::mt19937_64 rng(4);
  const ComplexMatrix p = random_projector(4, 2, rng);
  const auto d = eig_projector(p);
  for (Eigen::Index r = 0; r < 4; ++r) {
    // Rows of o are conjugated eigenvectors.
    Eigen::Index first = 0;
    while (std::abs(d.o(r, first)) <= 1e-9) ++first;
    CHECK(std::abs(d.o(r, first).imag()) < 1e-12);
    CHECK(d.o(r, first).real() > 0.0);
  }
}

TEST_CASE("eig_projector rejects bad inputs") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = 1.0;
  try {
    eig_projector(h);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotHermitian);
  }
  ComplexMatrix half = ComplexMatrix::Identity(2, 2) * 0.5;
  try {
    eig_projector(half);
    FAIL("expected NotAProjector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotAProjector);
  }
}

TEST_CASE("lstsq_real") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  RealVector y(4);
  for (auto& v : y) v = g(rng);
  const auto id = lstsq_real(RealMatrix::Identity(4, 4), y);
  CHECK((id.x - y).norm() < 1e-14);
  CHECK(id.residual < 1e-14);

  RealMatrix m(6, 3);
  for (auto& v : m.reshaped()) v = g(rng);
  RealVector x0(3);
  x0 << 1.0, -2.0, 0.5;
  const auto consistent = lstsq_real(m, m * x0);
  CHECK((consistent.x - x0).norm() < 1e-10);
  CHECK(consistent.residual < 1e-10);

  RealVector noisy(6);
  for (auto& v : noisy) v = g(rng);
  const auto fit = lstsq_real(m, noisy);
  const RealVector normal = (m.transpose() * m).ldlt().solve(m.transpose() * noisy);
  CHECK((fit.x - normal).norm() < 1e-10);
  CHECK(std::abs(fit.residual - (m * normal - noisy).norm()) < 1e-10);

  RealMatrix dup(3, 2);
  dup << 1, 2, 2, 4, 3, 6;
  try {
    lstsq_real(dup, RealVector::Ones(3));
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kRankDeficient);
  }
}

TEST_CASE("random unitaries are unitary") {
  std::mt19937_64 rng(1);
  for (int dim : {2, 4, 8}) {
    CHECK(is_unitary(random_unitary(dim, rng), 1e-12));
  }
}
