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

#include <cmath>
#include <random>

#include "doctest.h"

#include "channelcut/random.hpp"
#include "channelcut/simkit.hpp"

using namespace channelcut;

namespace {

DensityMatrix ket(int n, Eigen::Index index) {
  return DensityMatrix::basis_state(n, index);
}

DensityMatrix plus_state() {
  ComplexVector psi(2);
  psi << 1.0, 1.0;
  return DensityMatrix::pure(psi);
}

QuasiDecomposition cnot_decomposition() {
  return decompose(ChannelMix::single(gates::cnot()));
}

}  // namespace

TEST_CASE("Philox known answers") {
  using P = Philox4x32;
  CHECK(P::bijection({0, 0, 0, 0}, {0, 0}) ==
        P::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                     {0xa4093822u, 0x299f31d0u}) ==
        P::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  P a(5, 0), b(5, 0), c(5, 1);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  P seq(5, 2), jump(5, 2);
  std::uint64_t sixth = 0;
  for (int i = 0; i < 6; ++i) sixth = seq.next_u64();
  jump.seek(5);
  CHECK(jump.next_u64() == sixth);
  CHECK(jump.next_u64() == seq.next_u64());
  P u(9, 3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("circuit construction") {
  Circuit c(2);
  c.one_qubit(0, gates::hadamard(), "H").cnot(0, 1);
  CHECK(c.cnot_count() == 1);
  CHECK(c.depth() == 2);
  CHECK_THROWS_AS(c.one_qubit(2, gates::hadamard()), Error);
  CHECK_THROWS_AS(c.cnot(1, 1), Error);
  ComplexMatrix bad = gates::identity(1);
  bad(0, 0) = 2.0;
  try {
    c.one_qubit(0, bad);
    FAIL("expected NotUnitary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotUnitary);
  }
  Circuit wide(3);
  wide.one_qubit(0, gates::pauli_x()).one_qubit(1, gates::pauli_x())
      .one_qubit(2, gates::pauli_x());
  CHECK(wide.depth() == 1);
}

TEST_CASE("noiseless runs match the circuit unitary") {
  Circuit bell(2);
  bell.one_qubit(0, gates::hadamard(), "H").cnot(0, 1);
  const ComplexMatrix u = circuit_unitary(bell);
  const ComplexMatrix expected =
      gates::cnot() * kron(gates::hadamard(), gates::identity(1));
  CHECK((u - expected).norm() < 1e-12);

  const DensityMatrix out = run(bell, ket(2, 0));
  ComplexMatrix bell_state = ComplexMatrix::Zero(4, 4);
  bell_state(0, 0) = bell_state(0, 3) = bell_state(3, 0) = bell_state(3, 3) = 0.5;
  CHECK((out.mat - bell_state).norm() < 1e-12);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c(3);
    std::uniform_int_distribution<int> q(0, 2);
    for (int g = 0; g < 12; ++g) {
      const int a = q(rng), b = q(rng);
      if (g % 3 == 2 && a != b) {
        c.cnot(a, b);
      } else {
        c.one_qubit(a, random_unitary(2, rng));
      }
    }
    const ComplexMatrix rho = random_density(8, rng);
    const DensityMatrix got = run(c, DensityMatrix{3, rho}, NoiseModel{});
    const ComplexMatrix w = circuit_unitary(c);
    CHECK((got.mat - w * rho * w.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("depolarization") {
  Circuit x(1);
  x.one_qubit(0, gates::pauli_x());
  const DensityMatrix full = run(x, ket(1, 0), NoiseModel{1.0, 0.0});
  CHECK((full.mat - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  const DensityMatrix part = run(x, ket(1, 0), NoiseModel{0.1, 0.0});
  CHECK(part.mat(1, 1).real() == doctest::Approx(0.95));
  CHECK(part.mat(0, 0).real() == doctest::Approx(0.05));

  std::mt19937_64 rng(8);
  Circuit c(3);
  c.one_qubit(1, gates::hadamard()).cnot(1, 2).cnot(0, 1).one_qubit(2, gates::pauli_y());
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix rho = random_density(8, rng);
    const DensityMatrix out = run(c, DensityMatrix{3, rho}, NoiseModel{0.2, 0.3});
    CHECK(std::abs(out.trace() - 1.0) < 1e-10);
    CHECK(is_hermitian(out.mat, 1e-12));
  }
  CHECK_THROWS_AS(run(c, ket(3, 0), NoiseModel{-0.1, 0.0}), Error);
  CHECK_THROWS_AS(run(c, ket(2, 0), NoiseModel{}), Error);
}

TEST_CASE("depolarizing one qubit of a Bell pair") {
  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  ComplexMatrix rho = bell;
  depolarize(rho, 2, 1, 0.4);
  const ComplexMatrix mixed = kron(gates::identity(1), gates::identity(1)) / 4.0;
  CHECK((rho - (0.6 * bell + 0.4 * mixed)).norm() < 1e-12);
}

TEST_CASE("postselect") {
  const ComplexMatrix p0 = gates::proj0();
  auto [kept, prob] = postselect(ket(1, 0), p0);
  CHECK(prob == doctest::Approx(1.0));
  CHECK((kept.mat - p0).norm() < 1e-15);

  auto [half, ph] = postselect(plus_state(), p0);
  CHECK(ph == doctest::Approx(0.5));
  CHECK((half.mat - 0.5 * p0).norm() < 1e-15);

  auto [none, pn] = postselect(ket(1, 1), p0);
  CHECK(pn == 0.0);
  CHECK(none.mat.norm() == 0.0);
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(10);
  const DensityMatrix pure{2, random_pure_state(4, rng)};
  CHECK(fidelity(pure, pure) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(ket(1, 0), ket(1, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  const DensityMatrix mixed{1, 0.5 * ComplexMatrix::Identity(2, 2)};
  CHECK(fidelity(ket(1, 0), mixed) == doctest::Approx(0.5).epsilon(1e-12));
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a{2, random_density(4, rng)};
    const DensityMatrix b{2, random_density(4, rng)};
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-10);
  }
  const DensityMatrix psi{2, random_pure_state(4, rng)};
  const DensityMatrix sigma{2, random_density(4, rng)};
  const double overlap = (psi.mat * sigma.mat).trace().real();
  CHECK(fidelity(sigma, psi) == doctest::Approx(overlap).epsilon(1e-10));
  CHECK_THROWS_AS(fidelity(DensityMatrix{1, 2.0 * gates::proj0()}, ket(1, 0)),
                  Error);
}

TEST_CASE("mc_expectation of an identity term is exact") {
  const auto d = decompose(ChannelMix::single(gates::identity(1)));
  McOptions opt;
  opt.n_samples = 100;
  const auto est = mc_expectation(d, EffectiveChannel::identity(1), ket(1, 0),
                                  gates::pauli_z(), opt);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.std_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(est.gamma == doctest::Approx(1.0));
}

TEST_CASE("mc_expectation on CNOT") {
  const auto d = cnot_decomposition();
  const auto wrap = EffectiveChannel::identity(2);
  const ComplexMatrix zz = kron(gates::pauli_z(), gates::pauli_z());
  McOptions opt;
  opt.n_samples = 100000;
  opt.seed = 42;
  const auto est = mc_expectation(d, wrap, ket(2, 0), zz, opt);
  CHECK(std::abs(est.value - 1.0) < 5.0 * 9.0 / std::sqrt(1e5));
  CHECK(est.gamma == doctest::Approx(9.0));
  CHECK(est.seed == 42);
  CHECK(est.n_samples == 100000);

  // Same seed: identical. Other worker counts: same draws, other summation
  // order.
  const auto again = mc_expectation(d, wrap, ket(2, 0), zz, opt);
  CHECK(again.value == est.value);
  opt.workers = 3;
  const auto split = mc_expectation(d, wrap, ket(2, 0), zz, opt);
  const auto split_again = mc_expectation(d, wrap, ket(2, 0), zz, opt);
  CHECK(split.value == split_again.value);
  CHECK(std::abs(split.value - est.value) < 1e-12);
  CHECK(std::abs(split.std_error - est.std_error) < 1e-12);
}

TEST_CASE("sampled states do not depend on the worker count") {
  const auto d = cnot_decomposition();
  McOptions opt;
  opt.n_samples = 5001;
  opt.seed = 8;
  const McState one = mc_state(d, EffectiveChannel::identity(2), ket(2, 1), opt);
  opt.workers = 4;
  const McState four = mc_state(d, EffectiveChannel::identity(2), ket(2, 1), opt);
  CHECK((one.mat - four.mat).norm() < 1e-12);
}

TEST_CASE("mc_expectation errors") {
  QuasiDecomposition empty;
  empty.n_qubits = 1;
  McOptions opt;
  try {
    mc_expectation(empty, EffectiveChannel::identity(1), ket(1, 0),
                   gates::pauli_z(), opt);
    FAIL("expected EmptyDecomposition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyDecomposition);
  }
  const auto d = decompose(ChannelMix::single(gates::identity(1)));
  CHECK_THROWS_AS(mc_expectation(d, EffectiveChannel::identity(1), ket(1, 0),
                                 gates::proj0() * gates::pauli_x(), opt),
                  Error);
}

TEST_CASE("exact signed sum equals direct channel application") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix u = random_unitary(4, rng);
    const auto d = decompose(ChannelMix::single(u));
    const DensityMatrix rho{2, random_density(4, rng)};
    const McState s = mc_state_exact(d, EffectiveChannel::identity(2), rho);
    CHECK((s.mat - u * rho.mat * u.adjoint()).norm() < 1e-10);
  }
  // Selected channel: the wrapper is applied around the effective terms.
  const ComplexMatrix toffoli = gates::toffoli();
  const auto [d, eff] = decompose_selected(toffoli, zeros_selection(3, 1, 1));
  const DensityMatrix rho{3, random_density(8, rng)};
  const McState s = mc_state_exact(d, eff, rho);
  const ComplexMatrix p = kron(gates::proj0(), gates::identity(2));
  CHECK((s.mat - p * toffoli * p * rho.mat * p * toffoli.adjoint() * p).norm() <
        1e-10);
}

TEST_CASE("sampled state converges and projects to a state") {
  const auto id = decompose(ChannelMix::single(gates::identity(1)));
  McOptions opt;
  opt.n_samples = 10;
  const McState one = mc_state(id, EffectiveChannel::identity(1), plus_state(), opt);
  CHECK((one.mat - plus_state().mat).norm() < 1e-12);

  std::vector<QuasiDecomposition::Term> terms;
  const std::array<std::string_view, 1> i{"I"}, x{"X"}, px{"piX"};
  terms.push_back(make_term(0.375, i));
  terms.push_back(make_term(-0.125, x));
  terms.push_back(make_term(0.75, px));
  const auto d = from_terms(1, std::move(terms));
  const ComplexMatrix v = (3.0 * gates::identity(1) + gates::pauli_x()) / 4.0;
  const DensityMatrix zero = ket(1, 0);
  const DensityMatrix target{1, v * zero.mat * v.adjoint()};
  opt.n_samples = 10000;
  opt.seed = 3;
  const McState s = mc_state(d, EffectiveChannel::identity(1), zero, opt);
  const ProjectedState p = project_to_state(s.mat);
  CHECK(std::abs(p.state.trace() - 1.0) < 1e-12);
  CHECK(fidelity(p.state, target.normalized()) >= 0.99);
  CHECK(p.negativity >= 0.0);
}

TEST_CASE("term noise lowers signed-state fidelity") {
  std::vector<QuasiDecomposition::Term> terms;
  const std::array<std::string_view, 1> x{"X"};
  terms.push_back(make_term(1.0, x));
  const auto d = from_terms(1, std::move(terms));
  const DensityMatrix zero = ket(1, 0);
  const McState clean = mc_state_exact(d, EffectiveChannel::identity(1), zero);
  const McState noisy = mc_state_exact(d, EffectiveChannel::identity(1), zero,
                                       NoiseModel{0.2, 0.0});
  CHECK(clean.mat(1, 1).real() == doctest::Approx(1.0));
  CHECK(noisy.mat(1, 1).real() == doctest::Approx(0.9));
}
