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

#include "channelcut/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "channelcut/random.hpp"

namespace channelcut {

namespace {

constexpr double kGateUnitaryTolerance = 1e-9;

Eigen::Index bit_mask(int n, int qubit) {
  return Eigen::Index{1} << (n - 1 - qubit);
}

void check_state(const DensityMatrix& rho) {
  const Eigen::Index dim = Eigen::Index{1} << rho.n;
  if (rho.mat.rows() != dim || rho.mat.cols() != dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("state is {}x{}, expected {}x{} for {} qubit(s)",
                            rho.mat.rows(), rho.mat.cols(), dim, dim, rho.n));
  }
}

// Cumulative |c_i| / gamma for inverse-CDF sampling.
std::vector<double> cumulative_weights(const QuasiDecomposition& d,
                                       double& gamma) {
  gamma = 0.0;
  for (const auto& t : d.terms) gamma += std::abs(t.coeff);
  std::vector<double> cdf;
  cdf.reserve(d.terms.size());
  double acc = 0.0;
  for (const auto& t : d.terms) {
    acc += std::abs(t.coeff) / gamma;
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;
  return cdf;
}

std::size_t draw(Philox4x32& rng, const std::vector<double>& cdf) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// Runs body(worker, begin, end) over contiguous sample chunks. Sample i
// always consumes draw i of the (seed, 0) stream, so the drawn terms do not
// depend on the worker count; only the floating-point reduction order does.
template <typename Body>
void for_each_chunk(std::int64_t n_samples, int workers, Body body) {
  workers = std::max(1, workers);
  const std::int64_t chunk = n_samples / workers;
  const std::int64_t extra = n_samples % workers;
  std::vector<std::thread> threads;
  std::int64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t size = chunk + (w < extra ? 1 : 0);
    if (workers == 1) {
      body(w, begin, begin + size);
    } else {
      threads.emplace_back(body, w, begin, begin + size);
    }
    begin += size;
  }
  for (auto& t : threads) t.join();
}

void check_decomposition(const QuasiDecomposition& d,
                         const EffectiveChannel& wrap,
                         const DensityMatrix& rho0) {
  if (d.terms.empty()) {
    throw Error(ErrorKind::kEmptyDecomposition, "decomposition has no terms");
  }
  check_state(rho0);
  if (wrap.n != rho0.n || wrap.n_tilde != d.n_qubits) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("wrapper ({} -> {} qubits) does not match state "
                            "({}) and decomposition ({})",
                            wrap.n, wrap.n_tilde, rho0.n, d.n_qubits));
  }
}

}  // namespace

DensityMatrix DensityMatrix::basis_state(int n, Eigen::Index index) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (index < 0 || index >= dim) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("basis index {} out of range", index));
  }
  DensityMatrix rho{n, ComplexMatrix::Zero(dim, dim)};
  rho.mat(index, index) = 1.0;
  return rho;
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  int n = 0;
  while ((Eigen::Index{1} << n) < psi.size()) ++n;
  if ((Eigen::Index{1} << n) != psi.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "state vector length is not a power of two");
  }
  const ComplexVector unit = psi.normalized();
  return DensityMatrix{n, unit * unit.adjoint()};
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "cannot normalize a zero-trace state");
  }
  return DensityMatrix{n, mat / tr};
}

Circuit::Circuit(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) {
    throw Error(ErrorKind::kInvalidInput, "circuit needs at least one qubit");
  }
}

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= n_) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("qubit {} out of range for {} qubit(s)", q, n_));
  }
}

Circuit& Circuit::one_qubit(int qubit, ComplexMatrix u, std::string label) {
  check_qubit(qubit);
  if (u.rows() != 2 || !is_unitary(u, kGateUnitaryTolerance)) {
    throw Error(ErrorKind::kNotUnitary,
                fmt::format("gate '{}' is not a 2x2 unitary", label));
  }
  gates_.emplace_back(OneQubitGate{qubit, std::move(u), std::move(label)});
  return *this;
}

Circuit& Circuit::cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw Error(ErrorKind::kInvalidInput, "CNOT control equals target");
  }
  gates_.emplace_back(CnotGate{control, target});
  return *this;
}

Circuit& Circuit::local_operation(int qubit, ComplexMatrix op,
                                  std::string label) {
  check_qubit(qubit);
  if (op.rows() != 2 || op.cols() != 2) {
    throw Error(ErrorKind::kDimensionMismatch, "local operation must be 2x2");
  }
  gates_.emplace_back(LocalOperation{qubit, std::move(op), std::move(label)});
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_ != n_) {
    throw Error(ErrorKind::kDimensionMismatch, "appending circuit of other width");
  }
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

int Circuit::depth() const {
  std::vector<int> layer(static_cast<std::size_t>(n_), 0);
  for (const auto& gate : gates_) {
    if (const auto* c = std::get_if<CnotGate>(&gate)) {
      auto& lc = layer[static_cast<std::size_t>(c->control)];
      auto& lt = layer[static_cast<std::size_t>(c->target)];
      lc = lt = std::max(lc, lt) + 1;
    } else {
      const int q = std::visit(
          [](const auto& g) {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, CnotGate>) {
              return g.control;
            } else {
              return g.qubit;
            }
          },
          gate);
      ++layer[static_cast<std::size_t>(q)];
    }
  }
  return layer.empty() ? 0 : *std::max_element(layer.begin(), layer.end());
}

int Circuit::cnot_count() const {
  return static_cast<int>(std::count_if(
      gates_.begin(), gates_.end(),
      [](const Gate& g) { return std::holds_alternative<CnotGate>(g); }));
}

void NoiseModel::validate() const {
  if (!(p_local >= 0.0 && p_local <= 1.0 && p_cnot >= 0.0 && p_cnot <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("noise probabilities ({}, {}) outside [0, 1]",
                            p_local, p_cnot));
  }
}

void apply_one_qubit(ComplexMatrix& rho, int n, int qubit,
                     const ComplexMatrix& op) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index mask = bit_mask(n, qubit);
  const Complex k00 = op(0, 0), k01 = op(0, 1), k10 = op(1, 0), k11 = op(1, 1);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index x0 = 0; x0 < dim; ++x0) {
      if (x0 & mask) continue;
      const Eigen::Index x1 = x0 | mask;
      const Complex a = rho(x0, c), b = rho(x1, c);
      rho(x0, c) = k00 * a + k01 * b;
      rho(x1, c) = k10 * a + k11 * b;
    }
  }
  const Complex c00 = std::conj(k00), c01 = std::conj(k01),
                c10 = std::conj(k10), c11 = std::conj(k11);
  for (Eigen::Index y0 = 0; y0 < dim; ++y0) {
    if (y0 & mask) continue;
    const Eigen::Index y1 = y0 | mask;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Complex a = rho(r, y0), b = rho(r, y1);
      rho(r, y0) = a * c00 + b * c01;
      rho(r, y1) = a * c10 + b * c11;
    }
  }
}

void apply_cnot(ComplexMatrix& rho, int n, int control, int target) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index cmask = bit_mask(n, control);
  const Eigen::Index tmask = bit_mask(n, target);
  for (Eigen::Index x = 0; x < dim; ++x) {
    if ((x & cmask) && !(x & tmask)) {
      rho.row(x).swap(rho.row(x | tmask));
    }
  }
  for (Eigen::Index y = 0; y < dim; ++y) {
    if ((y & cmask) && !(y & tmask)) {
      rho.col(y).swap(rho.col(y | tmask));
    }
  }
}

void depolarize(ComplexMatrix& rho, int n, int qubit, double p) {
  if (p == 0.0) return;
  const Eigen::Index dim = rho.rows();
  const Eigen::Index mask = bit_mask(n, qubit);
  for (Eigen::Index y0 = 0; y0 < dim; ++y0) {
    if (y0 & mask) continue;
    const Eigen::Index y1 = y0 | mask;
    for (Eigen::Index x0 = 0; x0 < dim; ++x0) {
      if (x0 & mask) continue;
      const Eigen::Index x1 = x0 | mask;
      const Complex mixed = 0.5 * (rho(x0, y0) + rho(x1, y1));
      rho(x0, y0) = (1.0 - p) * rho(x0, y0) + p * mixed;
      rho(x1, y1) = (1.0 - p) * rho(x1, y1) + p * mixed;
      rho(x0, y1) *= (1.0 - p);
      rho(x1, y0) *= (1.0 - p);
    }
  }
}

DensityMatrix run(const Circuit& circuit, const DensityMatrix& rho0,
                  const NoiseModel& noise) {
  noise.validate();
  check_state(rho0);
  if (rho0.n != circuit.n_qubits()) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("circuit has {} qubit(s) but state has {}",
                            circuit.n_qubits(), rho0.n));
  }
  const int n = rho0.n;
  ComplexMatrix rho = rho0.mat;
  for (const auto& gate : circuit.gates()) {
    if (const auto* g = std::get_if<OneQubitGate>(&gate)) {
      apply_one_qubit(rho, n, g->qubit, g->u);
      depolarize(rho, n, g->qubit, noise.p_local);
    } else if (const auto* k = std::get_if<LocalOperation>(&gate)) {
      apply_one_qubit(rho, n, k->qubit, k->op);
      depolarize(rho, n, k->qubit, noise.p_local);
    } else {
      const auto& c = std::get<CnotGate>(gate);
      apply_cnot(rho, n, c.control, c.target);
      depolarize(rho, n, c.control, noise.p_cnot);
      depolarize(rho, n, c.target, noise.p_cnot);
    }
  }
  return DensityMatrix{n, std::move(rho)};
}

ComplexMatrix circuit_unitary(const Circuit& circuit) {
  const int n = circuit.n_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  // Left-multiplication only: reuse the row pass of apply_one_qubit by
  // treating u as a stack of column vectors.
  for (const auto& gate : circuit.gates()) {
    const ComplexMatrix* op = nullptr;
    int qubit = 0;
    if (const auto* g = std::get_if<OneQubitGate>(&gate)) {
      op = &g->u;
      qubit = g->qubit;
    } else if (const auto* k = std::get_if<LocalOperation>(&gate)) {
      op = &k->op;
      qubit = k->qubit;
    }
    if (op != nullptr) {
      const Eigen::Index mask = bit_mask(n, qubit);
      for (Eigen::Index x0 = 0; x0 < dim; ++x0) {
        if (x0 & mask) continue;
        const Eigen::Index x1 = x0 | mask;
        const Eigen::RowVectorXcd a = u.row(x0), b = u.row(x1);
        u.row(x0) = (*op)(0, 0) * a + (*op)(0, 1) * b;
        u.row(x1) = (*op)(1, 0) * a + (*op)(1, 1) * b;
      }
    } else {
      const auto& c = std::get<CnotGate>(gate);
      const Eigen::Index cmask = bit_mask(n, c.control);
      const Eigen::Index tmask = bit_mask(n, c.target);
      for (Eigen::Index x = 0; x < dim; ++x) {
        if ((x & cmask) && !(x & tmask)) u.row(x).swap(u.row(x | tmask));
      }
    }
  }
  return u;
}

std::pair<DensityMatrix, double> postselect(const DensityMatrix& rho,
                                            const ComplexMatrix& projector) {
  check_state(rho);
  if (projector.rows() != rho.mat.rows() ||
      projector.cols() != rho.mat.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "projector and state shapes differ");
  }
  eig_projector(projector);
  ComplexMatrix kept = projector * rho.mat * projector;
  const double prob = (rho.mat * projector).trace().real();
  return {DensityMatrix{rho.n, std::move(kept)}, prob};
}

namespace {

// Eigenvalues below this are eigensolver noise; taking their square root
// would inflate them to ~1e-8.
constexpr double kSpectrumFloor = 1e-14;

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  const Eigen::VectorXd roots =
      es.eigenvalues()
          .unaryExpr([](double v) { return v > kSpectrumFloor ? v : 0.0; })
          .cwiseSqrt();
  return es.eigenvectors() * roots.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  check_state(a);
  check_state(b);
  if (a.n != b.n) {
    throw Error(ErrorKind::kDimensionMismatch, "fidelity of states of different size");
  }
  if (std::abs(a.trace() - 1.0) > 1e-8 || std::abs(b.trace() - 1.0) > 1e-8) {
    throw Error(ErrorKind::kInvalidInput, "fidelity needs unit-trace states");
  }
  // Tr sqrt(sqrt(a) b sqrt(a)) is the nuclear norm of sqrt(a) sqrt(b).
  const ComplexMatrix product = psd_sqrt(a.mat) * psd_sqrt(b.mat);
  const double root_sum =
      Eigen::JacobiSVD<ComplexMatrix>(product).singularValues().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

ComplexMatrix term_output(const QuasiDecomposition& d,
                          const QuasiDecomposition::Term& term,
                          const EffectiveChannel& wrap,
                          const DensityMatrix& rho0, const NoiseModel& noise) {
  const int n = rho0.n;
  ComplexMatrix rho = wrap.o_in * rho0.mat * wrap.o_in.adjoint();
  const ComplexMatrix p0 = gates::proj0();
  for (int q = 0; q < wrap.zero_qubits(); ++q) {
    apply_one_qubit(rho, n, q, p0);
    depolarize(rho, n, q, noise.p_local);
  }
  for (std::size_t k = 0; k < term.basis.size(); ++k) {
    const int q = wrap.zero_qubits() + static_cast<int>(k);
    const int b = term.basis[k];
    if (b == 0) continue;  // identity factor: nothing is executed
    apply_one_qubit(rho, n, q, basis16()[static_cast<std::size_t>(b)].op);
    depolarize(rho, n, q, noise.p_local);
  }
  rho = wrap.o_out * rho * wrap.o_out.adjoint();
  return d.rescale * rho;
}

McEstimate mc_expectation(const QuasiDecomposition& d,
                          const EffectiveChannel& wrap,
                          const DensityMatrix& rho0, const ComplexMatrix& obs,
                          const McOptions& options) {
  check_decomposition(d, wrap, rho0);
  options.noise.validate();
  if (!is_hermitian(obs, 1e-9) || obs.rows() != rho0.mat.rows()) {
    throw Error(ErrorKind::kInvalidInput,
                "observable must be Hermitian and match the state");
  }
  if (options.n_samples < 1) {
    throw Error(ErrorKind::kInvalidInput, "need at least one sample");
  }
  double gamma = 0.0;
  const auto cdf = cumulative_weights(d, gamma);
  // Each sampled term contributes a deterministic value; tabulate them once.
  std::vector<double> contribution;
  contribution.reserve(d.terms.size());
  for (const auto& t : d.terms) {
    const ComplexMatrix out = term_output(d, t, wrap, rho0, options.noise);
    const double value = (obs * out).trace().real();
    contribution.push_back(gamma * (t.coeff < 0.0 ? -1.0 : 1.0) * value);
  }

  const int workers = std::max(1, options.workers);
  std::vector<double> sums(static_cast<std::size_t>(workers), 0.0);
  std::vector<double> squares(static_cast<std::size_t>(workers), 0.0);
  for_each_chunk(options.n_samples, workers,
                 [&](int w, std::int64_t begin, std::int64_t end) {
                   Philox4x32 rng(options.seed, 0);
                   rng.seek(static_cast<std::uint64_t>(begin));
                   double s = 0.0, s2 = 0.0;
                   for (std::int64_t i = begin; i < end; ++i) {
                     const double y = contribution[draw(rng, cdf)];
                     s += y;
                     s2 += y * y;
                   }
                   sums[static_cast<std::size_t>(w)] = s;
                   squares[static_cast<std::size_t>(w)] = s2;
                 });
  double total = 0.0, total_sq = 0.0;
  for (int w = 0; w < workers; ++w) {
    total += sums[static_cast<std::size_t>(w)];
    total_sq += squares[static_cast<std::size_t>(w)];
  }
  const auto count = static_cast<double>(options.n_samples);
  McEstimate est;
  est.value = total / count;
  est.n_samples = options.n_samples;
  est.gamma = gamma;
  est.seed = options.seed;
  if (options.n_samples > 1) {
    const double var =
        std::max(0.0, (total_sq - count * est.value * est.value) / (count - 1));
    est.std_error = std::sqrt(var / count);
  }
  return est;
}

McState mc_state(const QuasiDecomposition& d, const EffectiveChannel& wrap,
                 const DensityMatrix& rho0, const McOptions& options) {
  check_decomposition(d, wrap, rho0);
  options.noise.validate();
  if (options.n_samples < 1) {
    throw Error(ErrorKind::kInvalidInput, "need at least one sample");
  }
  double gamma = 0.0;
  const auto cdf = cumulative_weights(d, gamma);
  const int workers = std::max(1, options.workers);
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(workers),
      std::vector<std::int64_t>(d.terms.size(), 0));
  for_each_chunk(options.n_samples, workers,
                 [&](int w, std::int64_t begin, std::int64_t end) {
                   Philox4x32 rng(options.seed, 0);
                   rng.seek(static_cast<std::uint64_t>(begin));
                   auto& mine = counts[static_cast<std::size_t>(w)];
                   for (std::int64_t i = begin; i < end; ++i) {
                     ++mine[draw(rng, cdf)];
                   }
                 });
  McState out;
  out.mat = ComplexMatrix::Zero(rho0.mat.rows(), rho0.mat.cols());
  out.n_samples = options.n_samples;
  out.gamma = gamma;
  out.seed = options.seed;
  const auto count = static_cast<double>(options.n_samples);
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    std::int64_t hits = 0;
    for (const auto& c : counts) hits += c[i];
    if (hits == 0) continue;
    const double sign = d.terms[i].coeff < 0.0 ? -1.0 : 1.0;
    out.mat += (gamma * sign * static_cast<double>(hits) / count) *
               term_output(d, d.terms[i], wrap, rho0, options.noise);
  }
  return out;
}

McState mc_state_exact(const QuasiDecomposition& d,
                       const EffectiveChannel& wrap, const DensityMatrix& rho0,
                       const NoiseModel& noise) {
  check_decomposition(d, wrap, rho0);
  noise.validate();
  McState out;
  out.mat = ComplexMatrix::Zero(rho0.mat.rows(), rho0.mat.cols());
  for (const auto& t : d.terms) {
    out.mat += t.coeff * term_output(d, t, wrap, rho0, noise);
  }
  out.gamma = d.gamma;
  return out;
}

ProjectedState project_to_state(const ComplexMatrix& mat) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (mat + mat.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues();
  const double trace = ev.sum();
  const double negative = ev.cwiseMin(0.0).cwiseAbs().sum();
  const Eigen::VectorXd clipped = ev.cwiseMax(0.0);
  const double kept = clipped.sum();
  if (!(kept > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "matrix has no positive spectrum");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < mat.rows()) ++n;
  ProjectedState out;
  out.state = DensityMatrix{
      n, es.eigenvectors() * (clipped / kept).cast<Complex>().asDiagonal() *
             es.eigenvectors().adjoint()};
  out.negativity = trace != 0.0 ? negative / std::abs(trace) : negative;
  return out;
}

}  // namespace channelcut
