// Copyright 2026 The qslopen Authors
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

// JSON model files.
//
//   {
//     "kind": "isotropic" | "dephasing_local" | "unitary" | "gain_loss" | "custom",
//     "gamma": 1.0,
//     "n_qubits": 1,
//     "bloch": [0, 0, 1],
//     "hamiltonian": [[[re, im], ...], ...],
//     "gamma_op": [[[re, im], ...], ...],
//     "jumps": [ <matrix>, ... ],
//     "initial_state": "plus" | <matrix>
//   }
//
// A matrix entry is either a [re, im] pair or a bare real number.

#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qslopen/errors.hpp"
#include "qslopen/linalg.hpp"
#include "qslopen/models.hpp"
#include "qslopen/quantum.hpp"

namespace qsl {

namespace detail {

using json = nlohmann::json;

inline constexpr std::array<std::string_view, 8> kModelFields = {
    "kind", "gamma", "n_qubits", "bloch", "hamiltonian", "gamma_op", "jumps", "initial_state"};

[[noreturn]] inline void field_error(std::string_view path, std::string_view message) {
  throw ValidationError("model file: " + std::string(path) + ": " + std::string(message));
}

inline double json_real(const json& j, std::string_view path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) field_error(path, "non-finite number");
  return x;
}

inline cplx json_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {json_real(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) field_error(path, "expected [re, im] or a number");
  return {json_real(j[0], path + "[0]"), json_real(j[1], path + "[1]")};
}

inline CMatrix json_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty array of rows");
  const auto n = static_cast<Index>(j.size());
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      field_error(row_path, "expected " + std::to_string(n) + " entries (square matrix)");
    }
    for (Index c = 0; c < n; ++c) {
      m(r, c) = json_complex(row[static_cast<std::size_t>(c)],
                             row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline CMatrix json_hermitian(const json& j, const std::string& path) {
  CMatrix m = json_matrix(j, path);
  if (const double dev = hermitian_deviation(m); dev > kHermitianTol) {
    std::ostringstream os;
    os << "matrix is not Hermitian (deviation " << dev << ")";
    field_error(path, os.str());
  }
  return m;
}

inline std::string line_context(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(end), '\n');
  return "line " + std::to_string(line);
}

}  // namespace detail

/// Parses a model object; strict mode rejects unknown fields.
inline ModelSpec parse_model_json(std::string_view text, bool strict = false) {
  using detail::field_error;
  detail::json root;
  try {
    root = detail::json::parse(text.begin(), text.end());
  } catch (const detail::json::parse_error& e) {
    throw ValidationError("model file: " + detail::line_context(text, e.byte) +
                          ": malformed JSON (" + e.what() + ")");
  }
  if (!root.is_object()) field_error("$", "expected a JSON object");
  if (strict) {
    for (const auto& [key, value] : root.items()) {
      if (std::find(detail::kModelFields.begin(), detail::kModelFields.end(), key) ==
          detail::kModelFields.end()) {
        field_error("$." + key, "unknown field (strict mode)");
      }
    }
  }

  ModelSpec spec;
  if (!root.contains("kind") || !root["kind"].is_string()) {
    field_error("$.kind", "required string field");
  }
  const auto kind_name = root["kind"].get<std::string>();
  const auto kind = parse_model_kind(kind_name);
  if (!kind) field_error("$.kind", "unknown model kind \"" + kind_name + "\"");
  spec.kind = *kind;

  if (root.contains("gamma")) spec.gamma = detail::json_real(root["gamma"], "$.gamma");
  if (root.contains("n_qubits")) {
    const auto& j = root["n_qubits"];
    if (!j.is_number_integer()) field_error("$.n_qubits", "expected an integer");
    const auto n = j.get<long>();
    if (n < 1 || n > kMaxQubits) {
      field_error("$.n_qubits", "outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    spec.n_qubits = static_cast<int>(n);
  }
  if (root.contains("bloch")) {
    const auto& j = root["bloch"];
    if (!j.is_array() || j.size() != 3) field_error("$.bloch", "expected [r1, r2, r3]");
    BlochState b{detail::json_real(j[0], "$.bloch[0]"), detail::json_real(j[1], "$.bloch[1]"),
                 detail::json_real(j[2], "$.bloch[2]")};
    try {
      require_valid_bloch(b);
    } catch (const ValidationError& e) {
      field_error("$.bloch", e.what());
    }
    spec.bloch = b;
  }
  if (root.contains("hamiltonian")) {
    spec.hamiltonian = detail::json_hermitian(root["hamiltonian"], "$.hamiltonian");
  }
  if (root.contains("gamma_op")) {
    spec.gamma_op = detail::json_hermitian(root["gamma_op"], "$.gamma_op");
  }
  if (root.contains("jumps")) {
    const auto& j = root["jumps"];
    if (!j.is_array()) field_error("$.jumps", "expected an array of matrices");
    for (std::size_t k = 0; k < j.size(); ++k) {
      spec.jumps.push_back(detail::json_matrix(j[k], "$.jumps[" + std::to_string(k) + "]"));
    }
  }
  if (root.contains("initial_state")) {
    const auto& j = root["initial_state"];
    if (j.is_string()) {
      spec.initial_state = j.get<std::string>();
    } else {
      spec.initial_state = detail::json_matrix(j, "$.initial_state");
    }
  }
  return spec;
}

inline ModelSpec parse_model_file(const std::string& path, bool strict = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("model file: cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_model_json(text, strict);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace qsl
