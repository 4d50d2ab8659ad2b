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

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "doctest.h"

#include "channelcut/qpd.hpp"
#include "published_terms.hpp"

using namespace channelcut;
using namespace channelcut::testing;

namespace {

std::map<std::vector<int>, double> by_basis(const QuasiDecomposition& d) {
  std::map<std::vector<int>, double> out;
  for (const auto& t : d.terms) out[t.basis] += t.coeff;
  return out;
}

double choi_distance(const QuasiDecomposition& d, const ComplexMatrix& u) {
  const int n = d.n_qubits;
  return (choi(reconstruct(d), n).mat - choi(ChannelMix::single(u), n).mat)
      .norm();
}

}  // namespace

TEST_CASE("identity channel decomposes to a single term") {
  const auto d = decompose(ChannelMix::single(gates::identity(1)));
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].basis == std::vector<int>{0});
  CHECK(d.terms[0].coeff == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(choi_distance(d, gates::identity(1)) < 1e-12);
}

TEST_CASE("CNOT matches the published expansion term for term") {
  const auto d = decompose(ChannelMix::single(gates::cnot()));
  CHECK(d.terms.size() == 12);
  CHECK(d.gamma == doctest::Approx(9.0).epsilon(1e-12));
  const auto expected = by_basis(printed(kCnotTerms));
  const auto got = by_basis(d);
  REQUIRE(got.size() == expected.size());
  for (const auto& [basis, coeff] : expected) {
    REQUIRE(got.count(basis) == 1);
    CHECK(std::abs(got.at(basis) - coeff) < 1e-10);
  }
  CHECK(choi_distance(d, gates::cnot()) < 1e-8);
  CHECK(gamma_of(d.coefficients()) == doctest::Approx(9.0));
}

TEST_CASE("published CNOT and Toffoli coefficients reconstruct the gates") {
  const auto cnot = printed(kCnotTerms);
  CHECK(choi_distance(cnot, gates::cnot()) < 1e-10);
  CHECK(cnot.gamma == doctest::Approx(9.0));

  const auto toffoli = printed(kToffoliTerms);
  CHECK(kToffoliTerms.size() == 59);
  CHECK(choi_distance(toffoli, gates::toffoli()) < 1e-9);
  CHECK(toffoli.gamma == doctest::Approx(37.0).epsilon(1e-12));
}

TEST_CASE("Toffoli decomposition") {
  const auto d = decompose(ChannelMix::single(gates::toffoli()));
  CHECK(d.gamma == doctest::Approx(37.0).epsilon(1e-10));
  CHECK(choi_distance(d, gates::toffoli()) < 1e-8);
  CHECK(d.residual < 1e-8);
}

TEST_CASE("QFT3 decomposition") {
  const auto d = decompose(ChannelMix::single(gates::qft(3)));
  CHECK(d.terms.size() == 1524);
  CHECK(std::abs(d.gamma - 261.43) < 0.01);
  CHECK(choi_distance(d, gates::qft(3)) < 1e-7);
}

TEST_CASE("factored and dense solves agree") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const ComplexMatrix u = random_unitary(Eigen::Index{1} << n, rng);
    DecomposeOptions dense;
    dense.path = SolvePath::kDense;
    const auto a = decompose(ChannelMix::single(u));
    const auto b = decompose(ChannelMix::single(u), dense);
    const auto ma = by_basis(a);
    const auto mb = by_basis(b);
    double worst = 0.0;
    for (const auto& [basis, c] : ma) {
      const double other = mb.count(basis) ? mb.at(basis) : 0.0;
      worst = std::max(worst, std::abs(c - other));
    }
    for (const auto& [basis, c] : mb) {
      if (!ma.count(basis)) worst = std::max(worst, std::abs(c));
    }
    CHECK(worst < 1e-8);
    CHECK(choi_distance(a, u) < 1e-8);
    CHECK(a.gamma == doctest::Approx(gamma_of(a.coefficients())).epsilon(1e-12));
  }
}

TEST_CASE("dense path refuses three qubits") {
  DecomposeOptions dense;
  dense.path = SolvePath::kDense;
  CHECK_THROWS_AS(decompose(ChannelMix::single(gates::toffoli()), dense), Error);
}

TEST_CASE("too many qubits is rejected") {
  CHECK_THROWS_AS(decompose(ChannelMix::single(gates::identity(4))), Error);
}

TEST_CASE("normalize") {
  const auto id = decompose(ChannelMix::single(gates::identity(1)));
  const auto same = normalize(id, 1.0);
  CHECK(same.terms.size() == 1);
  CHECK(same.terms[0].coeff == doctest::Approx(1.0));
  CHECK(same.rescale == doctest::Approx(1.0));

  const auto doubled = decompose(ChannelMix::single(gates::identity(1), 2.0));
  CHECK(doubled.coefficient_sum() == doctest::Approx(2.0));
  const auto n = normalized(doubled);
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].basis == std::vector<int>{0});
  CHECK(n.terms[0].coeff == doctest::Approx(1.0));
  CHECK(n.rescale == doctest::Approx(2.0));
  CHECK(choi(reconstruct(n), 1).mat.isApprox(
      choi(ChannelMix::single(gates::identity(1), 2.0), 1).mat, 1e-12));

  try {
    normalize(id, 0.0);
    FAIL("expected NonPositiveSum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonPositiveSum);
  }
}

TEST_CASE("scaled two-qubit target reconstructs exactly after normalization") {
  std::mt19937_64 rng(41);
  const ComplexMatrix u = 0.8 * random_unitary(4, rng);
  const auto n = normalized(decompose(ChannelMix::single(u)));
  CHECK(n.coefficient_sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n.gamma >= 1.0 - 1e-10);
  CHECK(choi_distance(n, u) < 1e-8);
}

TEST_CASE("gamma_of") {
  const std::vector<double> one{1.0};
  CHECK(gamma_of(one) == 1.0);
  const std::vector<double> three{-1.0 / 8, 3.0 / 8, 6.0 / 8};
  CHECK(gamma_of(three) == doctest::Approx(1.25));
}

TEST_CASE("labels round trip") {
  const std::array<std::string_view, 3> labels{"piYZ", "RXY", "Z"};
  const auto t = make_term(0.5, labels);
  const auto back = term_labels(t);
  CHECK(std::equal(back.begin(), back.end(), labels.begin()));
  const std::array<std::string_view, 1> bad{"Q"};
  CHECK_THROWS_AS(make_term(1.0, bad), Error);
}
