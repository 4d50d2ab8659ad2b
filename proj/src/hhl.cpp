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

#include "channelcut/hhl.hpp"

#include <cmath>
#include <numbers>
#include <span>

#include <fmt/format.h>

namespace channelcut {

namespace {

constexpr double kEncodingTolerance = 1e-9;
constexpr int kMaxRegisterBits = 10;

void validate(const HhlProblem& p) {
  if (p.a.rows() != 2 || p.a.cols() != 2 || p.b.size() != 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                "HHL problem needs a 2x2 matrix and a length-2 vector");
  }
  if (!is_hermitian(p.a, 1e-12)) {
    throw Error(ErrorKind::kNotHermitian, "HHL matrix is not Hermitian");
  }
  if (p.b.norm() < 1e-12) {
    throw Error(ErrorKind::kInvalidInput, "right-hand side is zero");
  }
  if (p.m < 1 || p.m > kMaxRegisterBits) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("register size {} outside 1..{}", p.m,
                            kMaxRegisterBits));
  }
  if (!(p.t > 0.0) || !std::isfinite(p.t)) {
    throw Error(ErrorKind::kInvalidInput, "evolution time must be positive");
  }
  if (!(p.c_rot >= 0.0) || !std::isfinite(p.c_rot)) {
    throw Error(ErrorKind::kInvalidInput, "rotation constant must be >= 0");
  }
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> eigen_of(const ComplexMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (a + a.adjoint()));
}

ComplexMatrix evolution(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& es,
                        double time) {
  const Eigen::VectorXcd phases =
      (Complex(0.0, time) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Eigenvalue represented by register value k.
double register_eigenvalue(int k, int m, double t) {
  return 2.0 * std::numbers::pi * k / (t * std::ldexp(1.0, m));
}

std::vector<double> rotation_angles(int m, double t, double c_rot) {
  const int size = 1 << m;
  std::vector<double> angles(static_cast<std::size_t>(size), 0.0);
  for (int k = 1; k < size; ++k) {
    const double ratio = std::min(1.0, c_rot / register_eigenvalue(k, m, t));
    angles[static_cast<std::size_t>(k)] = 2.0 * std::asin(ratio);
  }
  return angles;
}

ComplexMatrix hadamard_register(int m) {
  ComplexMatrix h = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < m; ++i) h = kron(h, gates::hadamard());
  return h;
}

ComplexMatrix inverse_qft_matrix(int m) {
  const Eigen::Index dim = Eigen::Index{1} << m;
  ComplexMatrix f(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((x * y) % dim) /
          static_cast<double>(dim);
      f(y, x) = scale * std::polar(1.0, angle);
    }
  }
  return f;
}

Circuit inverse(const Circuit& c) {
  Circuit out(c.n_qubits());
  const auto& gates = c.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (const auto* g = std::get_if<OneQubitGate>(&*it)) {
      out.one_qubit(g->qubit, g->u.adjoint(), g->label + "_dg");
    } else if (const auto* k = std::get_if<CnotGate>(&*it)) {
      out.cnot(k->control, k->target);
    } else {
      throw Error(ErrorKind::kInternal, "cannot invert a local operation");
    }
  }
  return out;
}

void append_controlled_phase(Circuit& c, int control, int target,
                             double theta) {
  c.one_qubit(control, phase(theta / 2), "P");
  c.cnot(control, target);
  c.one_qubit(target, phase(-theta / 2), "P");
  c.cnot(control, target);
  c.one_qubit(target, phase(theta / 2), "P");
}

void append_swap(Circuit& c, int a, int b) {
  c.cnot(a, b);
  c.cnot(b, a);
  c.cnot(a, b);
}

void ucry(Circuit& c, std::span<const int> controls, int target,
          std::vector<double> angles) {
  if (controls.empty()) {
    c.one_qubit(target, ry(angles[0]), "RY");
    return;
  }
  const std::size_t half = angles.size() / 2;
  std::vector<double> sum(half), diff(half);
  for (std::size_t i = 0; i < half; ++i) {
    sum[i] = 0.5 * (angles[i] + angles[half + i]);
    diff[i] = 0.5 * (angles[i] - angles[half + i]);
  }
  const auto rest = controls.subspan(1);
  ucry(c, rest, target, std::move(sum));
  c.cnot(controls[0], target);
  ucry(c, rest, target, std::move(diff));
  c.cnot(controls[0], target);
}

}  // namespace

HhlProblem default_problem() {
  HhlProblem p;
  p.a.resize(2, 2);
  p.a << 1.0, -1.0 / 3.0, -1.0 / 3.0, 1.0;
  p.b = ComplexVector::Zero(2);
  p.b(0) = 1.0;
  p.m = 3;
  p.t = 3.0 * std::numbers::pi / 4.0;
  p.c_rot = 2.0 / 3.0;
  return p;
}

ComplexMatrix rz(double theta) {
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = std::polar(1.0, -theta / 2);
  r(1, 1) = std::polar(1.0, theta / 2);
  return r;
}

ComplexMatrix ry(double theta) {
  ComplexMatrix r(2, 2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  r << c, -s, s, c;
  return r;
}

ComplexMatrix phase(double theta) {
  ComplexMatrix r = ComplexMatrix::Identity(2, 2);
  r(1, 1) = std::polar(1.0, theta);
  return r;
}

ZyzAngles zyz_decompose(const ComplexMatrix& u) {
  if (u.rows() != 2 || !is_unitary(u, 1e-9)) {
    throw Error(ErrorKind::kNotUnitary, "ZYZ needs a 2x2 unitary");
  }
  ZyzAngles z;
  z.alpha = std::arg(u.determinant()) / 2;
  const ComplexMatrix v = std::polar(1.0, -z.alpha) * u;
  const double c = std::abs(v(0, 0)), s = std::abs(v(1, 0));
  z.gamma = 2.0 * std::atan2(s, c);
  const double sum = c > 1e-12 ? -2.0 * std::arg(v(0, 0)) : 0.0;
  const double diff = s > 1e-12 ? 2.0 * std::arg(v(1, 0)) : 0.0;
  z.beta = 0.5 * (sum + diff);
  z.delta = 0.5 * (sum - diff);
  return z;
}

void append_controlled(Circuit& c, int control, int target,
                       const ComplexMatrix& u) {
  const ZyzAngles z = zyz_decompose(u);
  c.one_qubit(target, rz((z.delta - z.beta) / 2), "C");
  c.cnot(control, target);
  c.one_qubit(target, ry(-z.gamma / 2) * rz(-(z.delta + z.beta) / 2), "B");
  c.cnot(control, target);
  c.one_qubit(target, rz(z.beta) * ry(z.gamma / 2), "A");
  c.one_qubit(control, phase(z.alpha), "P");
}

void append_uniformly_controlled_ry(Circuit& c, const std::vector<int>& controls,
                                    int target,
                                    const std::vector<double>& angles) {
  if (angles.size() != (std::size_t{1} << controls.size())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "multiplexed rotation needs 2^controls angles");
  }
  ucry(c, controls, target, angles);
}

void append_inverse_qft(Circuit& c, const std::vector<int>& qubits) {
  Circuit qft(c.n_qubits());
  const int m = static_cast<int>(qubits.size());
  for (int j = 0; j < m; ++j) {
    qft.one_qubit(qubits[static_cast<std::size_t>(j)], gates::hadamard(), "H");
    for (int k = j + 1; k < m; ++k) {
      append_controlled_phase(qft, qubits[static_cast<std::size_t>(k)],
                              qubits[static_cast<std::size_t>(j)],
                              2.0 * std::numbers::pi / std::ldexp(1.0, k - j + 1));
    }
  }
  for (int i = 0; i < m / 2; ++i) {
    append_swap(qft, qubits[static_cast<std::size_t>(i)],
                qubits[static_cast<std::size_t>(m - 1 - i)]);
  }
  c.append(inverse(qft));
}

std::vector<int> encoded_register_values(const HhlProblem& problem) {
  validate(problem);
  const auto es = eigen_of(problem.a);
  std::vector<int> out;
  const double scale = problem.t * std::ldexp(1.0, problem.m) /
                       (2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double x = es.eigenvalues()(i) * scale;
    const double k = std::round(x);
    if (std::abs(x - k) > kEncodingTolerance || k < 1 ||
        k >= std::ldexp(1.0, problem.m)) {
      throw Error(ErrorKind::kEigenvalueNotEncodable,
                  fmt::format("eigenvalue {} maps to register value {} (need "
                              "an integer in 1..{})",
                              es.eigenvalues()(i), x, (1 << problem.m) - 1));
    }
    out.push_back(static_cast<int>(k));
  }
  return out;
}

HhlCircuit build_hhl(const HhlProblem& problem) {
  encoded_register_values(problem);  // throws when not exactly encodable
  const auto es = eigen_of(problem.a);
  const int m = problem.m;
  const double lambda_min = es.eigenvalues().minCoeff();
  const double c_rot = problem.c_rot > 0.0 ? problem.c_rot : lambda_min;
  if (c_rot > lambda_min * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kConstantTooLarge,
                fmt::format("rotation constant {} exceeds smallest eigenvalue {}",
                            c_rot, lambda_min));
  }
  const std::vector<double> angles = rotation_angles(m, problem.t, c_rot);
  const int n = m + 2;
  const Eigen::Index regs = Eigen::Index{1} << m;
  const Eigen::Index dim = Eigen::Index{1} << n;
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);

  // Matrix path: index = ancilla * 2^(m+1) + register * 2 + work.
  const ComplexMatrix spread = kron(id2, kron(hadamard_register(m), id2));
  const ComplexMatrix fourier = kron(id2, kron(inverse_qft_matrix(m), id2));
  ComplexMatrix controlled = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix rotation = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < regs; ++k) {
    const ComplexMatrix e = evolution(es, problem.t * static_cast<double>(k));
    const ComplexMatrix r = ry(angles[static_cast<std::size_t>(k)]);
    for (int anc = 0; anc < 2; ++anc) {
      const Eigen::Index base = anc * 2 * regs + 2 * k;
      controlled.block(base, base, 2, 2) = e;
      for (int anc2 = 0; anc2 < 2; ++anc2) {
        const Eigen::Index base2 = anc2 * 2 * regs + 2 * k;
        rotation.block(base, base2, 2, 2) = r(anc, anc2) * id2;
      }
    }
  }
  const ComplexMatrix qpe = fourier * controlled * spread;
  ComplexMatrix u = qpe.adjoint() * rotation * qpe;

  // Gate path.
  Circuit estimate(n);
  const int work = n - 1;
  std::vector<int> reg_qubits;
  for (int q = 1; q <= m; ++q) {
    reg_qubits.push_back(q);
    estimate.one_qubit(q, gates::hadamard(), "H");
  }
  for (int j = 0; j < m; ++j) {
    append_controlled(estimate, m - j, work,
                      evolution(es, problem.t * std::ldexp(1.0, j)));
  }
  append_inverse_qft(estimate, reg_qubits);
  Circuit circuit = estimate;
  append_uniformly_controlled_ry(circuit, reg_qubits, 0, angles);
  circuit.append(inverse(estimate));
  return HhlCircuit{std::move(u), std::move(circuit)};
}

ComplexVector solve_reference(const HhlProblem& problem) {
  validate(problem);
  Eigen::FullPivLU<ComplexMatrix> lu(problem.a);
  if (!lu.isInvertible() ||
      std::abs(problem.a.determinant()) < 1e-12 * problem.a.squaredNorm()) {
    throw Error(ErrorKind::kSingular, "HHL matrix is singular");
  }
  return lu.solve(problem.b);
}

HhlReport run_study(const HhlProblem& problem,
                    const std::vector<NoiseModel>& noise_settings,
                    std::int64_t n_samples, std::uint64_t seed, int workers) {
  for (const auto& noise : noise_settings) noise.validate();
  if (n_samples < 0) {
    throw Error(ErrorKind::kInvalidInput, "sample count must be >= 0");
  }
  const HhlCircuit hc = build_hhl(problem);
  const int m = problem.m;
  const int n = m + 2;
  const EffectiveChannel eff = corollary2(hc.u, m);
  const QuasiDecomposition d = decompose_effective(eff);

  const DensityMatrix target = DensityMatrix::pure(solve_reference(problem));
  const DensityMatrix work_in = DensityMatrix::pure(problem.b);
  DensityMatrix full_in{n, kron(DensityMatrix::basis_state(n - 1, 0).mat,
                                work_in.mat)};
  ComplexMatrix success = gates::proj1();
  for (int i = 0; i < m; ++i) success = kron(success, gates::proj0());
  success = kron(success, ComplexMatrix::Identity(2, 2));
  const Eigen::Index offset = Eigen::Index{1} << (n - 1);
  const EffectiveChannel wrap = EffectiveChannel::identity(1);

  HhlReport report;
  report.gamma = d.gamma;
  report.decomposition = d;
  report.n_tilde = eff.n_tilde;
  report.depth = hc.circuit.depth();
  report.cnot_count = hc.circuit.cnot_count();
  report.n_samples = n_samples;
  report.seed = seed;
  for (const auto& noise : noise_settings) {
    HhlRow row;
    row.noise = noise;
    const DensityMatrix out = run(hc.circuit, full_in, noise);
    const auto [kept, prob] = postselect(out, success);
    row.success_probability = prob;
    if (prob > 1e-15) {
      const DensityMatrix work{1, kept.mat.block(offset, offset, 2, 2) / prob};
      row.fidelity_without = fidelity(work, target);
    }
    const McState exact = mc_state_exact(d, wrap, work_in, noise);
    row.fidelity_with_exact =
        fidelity(project_to_state(exact.mat).state, target);
    if (n_samples > 0) {
      McOptions options;
      options.n_samples = n_samples;
      options.seed = seed;
      options.workers = workers;
      options.noise = noise;
      const McState sampled = mc_state(d, wrap, work_in, options);
      const ProjectedState projected = project_to_state(sampled.mat);
      row.fidelity_with_sampled = fidelity(projected.state, target);
      row.negativity = projected.negativity;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace channelcut
