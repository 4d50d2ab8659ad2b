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

#include "channelcut/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "channelcut/hhl.hpp"
#include "channelcut/matrix_io.hpp"
#include "channelcut/qpd.hpp"
#include "channelcut/selection.hpp"

namespace channelcut::cli {

namespace {

using nlohmann::json;

constexpr int kCoefficientDigits = 12;
constexpr int kGammaDigits = 6;

std::string sig(double x, int digits) {
  return fmt::format("{:.{}g}", x, digits);
}

// The JSON value carries exactly the digits the CSV prints.
double rounded(double x, int digits) { return std::stod(sig(x, digits)); }

struct GateSpec {
  std::string name;
  ComplexMatrix u;
  int n = 0;
};

int qubits_of(const ComplexMatrix& m) {
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  if (m.rows() != m.cols() || (Eigen::Index{1} << n) != m.rows() || n < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                fmt::format("gate matrix is {}x{}, not a square power of two",
                            m.rows(), m.cols()));
  }
  return n;
}

GateSpec resolve_gate(const std::string& source) {
  GateSpec g;
  g.name = source;
  if (source == "cnot") {
    g.u = gates::cnot();
  } else if (source == "toffoli") {
    g.u = gates::toffoli();
  } else if (source == "qft3") {
    g.u = gates::qft(3);
  } else {
    g.u = load_matrix(source);
  }
  g.n = qubits_of(g.u);
  return g;
}

std::pair<int, int> parse_pair(const std::string& text,
                               const std::string& what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_a = 0, used_b = 0;
    const int a = std::stoi(text.substr(0, comma), &used_a);
    const std::string rest = text.substr(comma + 1);
    const int b = std::stoi(rest, &used_b);
    if (used_a != comma || used_b != rest.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return {a, b};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("{} expects two integers 'a,b', got '{}'", what,
                            text));
  }
}

struct Decomposed {
  QuasiDecomposition d;
  int n_tilde = 0;
  int r_in = 0;
  int r_out = 0;
};

Decomposed decompose_with(const GateSpec& gate, const std::string& select) {
  const Eigen::Index dim = gate.u.rows();
  Decomposed out;
  if (select == "none") {
    out.d = decompose(ChannelMix::single(gate.u));
    out.n_tilde = gate.n;
    out.r_in = out.r_out = static_cast<int>(dim);
    return out;
  }
  const auto colon = select.find(':');
  const std::string mode = select.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : select.substr(colon + 1);
  EffectiveChannel eff;
  if (mode == "zeros") {
    const auto [m_in, m_out] = parse_pair(arg, "zeros");
    eff = corollary1(gate.u, m_in, m_out);
    out.r_in = static_cast<int>(dim >> m_in);
    out.r_out = static_cast<int>(dim >> m_out);
  } else if (mode == "hhl") {
    int m = 0;
    try {
      std::size_t used = 0;
      m = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidInput,
                  fmt::format("hhl expects an integer, got '{}'", arg));
    }
    eff = corollary2(gate.u, m);
    out.r_in = out.r_out = static_cast<int>(dim >> (m + 1));
  } else if (mode == "file") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::kInvalidInput,
                  "file selection expects 'file:p_in.json,p_out.json'");
    }
    const Selection sel = make_selection(load_matrix(arg.substr(0, comma)),
                                         load_matrix(arg.substr(comma + 1)));
    eff = effective_operator(gate.u, sel);
    out.r_in = sel.r_in;
    out.r_out = sel.r_out;
  } else {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("unknown selection '{}'", select));
  }
  out.d = decompose_effective(eff);
  out.n_tilde = eff.n_tilde;
  return out;
}

std::string join_labels(const QuasiDecomposition::Term& t) {
  std::string s;
  for (const auto label : term_labels(t)) {
    if (!s.empty()) s += ' ';
    s += label;
  }
  return s;
}

std::string render_decomposition(const GateSpec& gate,
                                 const std::string& select,
                                 const Decomposed& r, const std::string& fmt) {
  const auto& d = r.d;
  if (fmt == "csv") {
    std::string s;
    s += fmt::format("# gate={} select={} n_qubits={} n_tilde={} r_in={} "
                     "r_out={}\n",
                     gate.name, select, gate.n, r.n_tilde, r.r_in, r.r_out);
    s += fmt::format("# gamma={} residual={} rescale={}\n",
                     sig(d.gamma, kGammaDigits), sig(d.residual, 3),
                     sig(d.rescale, kCoefficientDigits));
    s += "term,coefficient,abs_coefficient\n";
    for (const auto& t : d.terms) {
      s += fmt::format("{},{},{}\n", join_labels(t),
                       sig(t.coeff, kCoefficientDigits),
                       sig(std::abs(t.coeff), kCoefficientDigits));
    }
    return s;
  }
  json terms = json::array();
  for (const auto& t : d.terms) {
    json labels = json::array();
    for (const auto label : term_labels(t)) labels.push_back(std::string(label));
    terms.push_back({{"labels", labels},
                     {"coefficient", rounded(t.coeff, kCoefficientDigits)},
                     {"abs_coefficient",
                      rounded(std::abs(t.coeff), kCoefficientDigits)}});
  }
  const json j = {{"gate", gate.name},
                  {"select", select},
                  {"n_qubits", gate.n},
                  {"n_tilde", r.n_tilde},
                  {"r_in", r.r_in},
                  {"r_out", r.r_out},
                  {"gamma", rounded(d.gamma, kGammaDigits)},
                  {"residual", rounded(d.residual, 3)},
                  {"rescale", rounded(d.rescale, kCoefficientDigits)},
                  {"terms", terms}};
  return j.dump(2) + "\n";
}

std::string render_table(const GateSpec& gate,
                         const std::vector<std::vector<double>>& grid,
                         const std::string& fmt) {
  if (fmt == "csv") {
    std::string s = "m_in\\m_out";
    for (std::size_t c = 0; c < grid.size(); ++c) s += fmt::format(",{}", c);
    s += '\n';
    for (std::size_t r = 0; r < grid.size(); ++r) {
      s += std::to_string(r);
      for (double g : grid[r]) s += "," + sig(g, kGammaDigits);
      s += '\n';
    }
    return s;
  }
  json rows = json::array();
  for (const auto& row : grid) {
    json jr = json::array();
    for (double g : row) jr.push_back(rounded(g, kGammaDigits));
    rows.push_back(jr);
  }
  const json j = {{"gate", gate.name}, {"n_qubits", gate.n}, {"grid", rows}};
  return j.dump(2) + "\n";
}

std::string render_hhl(const HhlReport& r, const std::string& fmt) {
  const auto& d = r.decomposition;
  if (fmt == "csv") {
    std::string s = fmt::format(
        "# gamma={} n_tilde={} depth={} cnot_count={} samples={} seed={}\n",
        sig(r.gamma, kGammaDigits), r.n_tilde, r.depth, r.cnot_count,
        r.n_samples, r.seed);
    for (const auto& t : d.terms) {
      s += fmt::format("# term {} {}\n", join_labels(t),
                       sig(t.coeff, kCoefficientDigits));
    }
    s += "p_local,p_cnot,fidelity_without,success_probability,"
         "fidelity_with_exact,fidelity_with_sampled,negativity\n";
    for (const auto& row : r.rows) {
      s += fmt::format("{},{},{},{},{},{},{}\n",
                       sig(row.noise.p_local, kCoefficientDigits),
                       sig(row.noise.p_cnot, kCoefficientDigits),
                       sig(row.fidelity_without, kCoefficientDigits),
                       sig(row.success_probability, kCoefficientDigits),
                       sig(row.fidelity_with_exact, kCoefficientDigits),
                       sig(row.fidelity_with_sampled, kCoefficientDigits),
                       sig(row.negativity, kCoefficientDigits));
    }
    return s;
  }
  json coeffs = json::array();
  for (const auto& t : d.terms) {
    coeffs.push_back({{"label", join_labels(t)},
                      {"coefficient", rounded(t.coeff, kCoefficientDigits)}});
  }
  json rows = json::array();
  for (const auto& row : r.rows) {
    auto c = [](double x) { return rounded(x, kCoefficientDigits); };
    rows.push_back({{"p_local", c(row.noise.p_local)},
                    {"p_cnot", c(row.noise.p_cnot)},
                    {"fidelity_without", c(row.fidelity_without)},
                    {"success_probability", c(row.success_probability)},
                    {"fidelity_with_exact", c(row.fidelity_with_exact)},
                    {"fidelity_with_sampled", c(row.fidelity_with_sampled)},
                    {"negativity", c(row.negativity)}});
  }
  const json j = {{"gamma", rounded(r.gamma, kGammaDigits)},
                  {"coefficients", coeffs},
                  {"n_tilde", r.n_tilde},
                  {"depth", r.depth},
                  {"cnot_count", r.cnot_count},
                  {"samples", r.n_samples},
                  {"seed", r.seed},
                  {"rows", rows}};
  return j.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("cannot write '{}'", path));
  }
  file << text;
}

int worker_count() {
  const char* env = std::getenv("CHANNELCUT_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const int w = std::stoi(env, &used);
    if (used != std::string(env).size() || w < 1) {
      throw std::invalid_argument("bad");
    }
    return w;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("CHANNELCUT_THREADS must be a positive integer, "
                            "got '{}'",
                            env));
  }
}

NoiseModel parse_noise(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_a = 0, used_b = 0;
    NoiseModel n;
    n.p_local = std::stod(text.substr(0, comma), &used_a);
    const std::string rest = text.substr(comma + 1);
    n.p_cnot = std::stod(rest, &used_b);
    if (used_a != comma || used_b != rest.size()) {
      throw std::invalid_argument("trailing");
    }
    n.validate();
    return n;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("--noise expects 'p_local,p_cnot', got '{}'",
                            text));
  }
}

void fail(std::ostream& err, std::string_view kind, std::string_view msg) {
  std::string line(msg);
  std::replace(line.begin(), line.end(), '\n', ' ');
  err << "error: " << kind << ": " << line << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Quasiprobability decomposition of quantum channels",
               "channelcut"};
  app.require_subcommand(1);

  std::string gate_name, select = "none", out_path, format = "json";
  auto* dec = app.add_subcommand("decompose", "Decompose a gate channel");
  dec->add_option("--gate", gate_name, "cnot, toffoli, qft3 or a matrix file")
      ->required();
  dec->add_option("--select", select,
                  "none, zeros:m_in,m_out, hhl:m or file:p_in,p_out");
  dec->add_option("--out", out_path, "Output path (default stdout)");
  dec->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* table = app.add_subcommand("table", "Overhead grid over zero selections");
  table->add_option("--gate", gate_name, "cnot, toffoli, qft3 or a matrix file")
      ->required();
  table->add_option("--out", out_path, "Output path (default stdout)");
  table->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> noise_text;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  std::string problem_path;
  auto* hhl = app.add_subcommand("hhl", "Noisy HHL study");
  hhl->add_option("--noise", noise_text, "p_local,p_cnot (repeatable)");
  hhl->add_option("--samples", samples, "Monte-Carlo samples (0: exact only)")
      ->check(CLI::NonNegativeNumber);
  hhl->add_option("--seed", seed, "Sampler seed");
  hhl->add_option("--problem", problem_path, "HHL problem JSON file");
  hhl->add_option("--out", out_path, "Output path (default stdout)");
  hhl->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    fail(err, to_string(ErrorKind::kInvalidInput), e.what());
    return kValidationError;
  }

  try {
    if (dec->parsed()) {
      const GateSpec gate = resolve_gate(gate_name);
      const Decomposed r = decompose_with(gate, select);
      emit(render_decomposition(gate, select, r, format), out_path, out);
    } else if (table->parsed()) {
      const GateSpec gate = resolve_gate(gate_name);
      std::vector<std::vector<double>> grid(
          static_cast<std::size_t>(gate.n + 1),
          std::vector<double>(static_cast<std::size_t>(gate.n + 1)));
      for (int a = 0; a <= gate.n; ++a) {
        for (int b = 0; b <= gate.n; ++b) {
          const auto eff = corollary1(gate.u, a, b);
          grid[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
              decompose_effective(eff).gamma;
        }
      }
      emit(render_table(gate, grid, format), out_path, out);
    } else {
      std::vector<NoiseModel> noise;
      for (const auto& t : noise_text) noise.push_back(parse_noise(t));
      if (noise.empty()) noise = {{0.0, 0.0}, {0.001, 0.005}, {0.001, 0.01}};
      const HhlProblem problem =
          problem_path.empty() ? default_problem() : load_hhl_problem(problem_path);
      const HhlReport report =
          run_study(problem, noise, samples, seed, worker_count());
      emit(render_hhl(report, format), out_path, out);
    }
  } catch (const Error& e) {
    fail(err, to_string(e.kind()), e.what());
    return is_validation_error(e.kind()) ? kValidationError : kSolverError;
  } catch (const std::exception& e) {
    fail(err, to_string(ErrorKind::kInternal), e.what());
    return kSolverError;
  }
  return kOk;
}

}  // namespace channelcut::cli
