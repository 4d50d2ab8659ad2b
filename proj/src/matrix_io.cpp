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

#include "channelcut/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace channelcut {

namespace {

using nlohmann::json;

json matrix_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::kInvalidInput,
                    fmt::format("non-finite entry at ({}, {})", r, c));
      }
      entries.push_back(json::array({z.real(), z.imag()}));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

ComplexMatrix parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries")) {
    throw Error(ErrorKind::kInvalidInput,
                "matrix needs \"rows\", \"cols\" and \"entries\"");
  }
  const auto rows = j.at("rows").get<std::int64_t>();
  const auto cols = j.at("cols").get<std::int64_t>();
  if (rows < 1 || cols < 1 || rows > kMaxDimension || cols > kMaxDimension) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("matrix shape {}x{} out of range", rows, cols));
  }
  const json& entries = j.at("entries");
  if (!entries.is_array() ||
      entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("expected {} entries", rows * cols));
  }
  ComplexMatrix m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++i) {
      const json& e = entries[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw Error(ErrorKind::kInvalidInput,
                    fmt::format("entry {} is not a [re, im] pair", i));
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("cannot read '{}'", path));
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("bad JSON: {}", e.what()));
  }
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) {
  return matrix_json(m).dump();
}

ComplexMatrix matrix_from_json(std::string_view text) {
  try {
    return parse_matrix(parse_text(text));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("bad matrix: {}", e.what()));
  }
}

ComplexMatrix load_matrix(const std::string& path) {
  return matrix_from_json(read_file(path));
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("cannot write '{}'", path));
  }
  out << matrix_to_json(m) << '\n';
}

HhlProblem load_hhl_problem(const std::string& path) {
  const json j = parse_text(read_file(path));
  HhlProblem p = default_problem();
  try {
    if (j.contains("a")) p.a = parse_matrix(j.at("a"));
    if (j.contains("b")) {
      const ComplexMatrix b = parse_matrix(j.at("b"));
      if (b.cols() != 1) {
        throw Error(ErrorKind::kDimensionMismatch, "b must be a column");
      }
      p.b = b.col(0);
    }
    if (j.contains("m")) p.m = j.at("m").get<int>();
    if (j.contains("t")) p.t = j.at("t").get<double>();
    // A new matrix invalidates the default rotation constant.
    p.c_rot = j.contains("c_rot") ? j.at("c_rot").get<double>()
              : j.contains("a")   ? 0.0
                                  : p.c_rot;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                fmt::format("bad problem file: {}", e.what()));
  }
  return p;
}

}  // namespace channelcut
