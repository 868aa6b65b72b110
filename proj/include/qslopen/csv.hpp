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

// Minimal CSV emission: header row, comma separators, LF line endings and
// 17 significant digits so that every double round-trips exactly.

#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "qslopen/errors.hpp"

namespace qsl {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw NumericalError("format_double: conversion failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ValidationError("parse_double: not a number: '" + std::string(text) + "'");
  }
  return x;
}

/// A cell: text, a number, or empty.
using CsvCell = std::variant<std::monostate, std::string, double, long>;

inline CsvCell cell(std::optional<double> x) {
  if (x) return *x;
  return std::monostate{};
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header)
      : out_(out), columns_(header.size()) {
    write_row(header);
  }

  void row(const std::vector<CsvCell>& cells) {
    if (cells.size() != columns_) {
      throw ValidationError("CsvWriter: row has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(columns_));
    }
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (const CsvCell& c : cells) {
      if (const auto* s = std::get_if<std::string>(&c)) {
        text.push_back(*s);
      } else if (const auto* d = std::get_if<double>(&c)) {
        text.push_back(format_double(*d));
      } else if (const auto* l = std::get_if<long>(&c)) {
        text.push_back(std::to_string(*l));
      } else {
        text.emplace_back();
      }
    }
    write_row(text);
  }

 private:
  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].find_first_of(",\"\n") != std::string::npos) {
        throw ValidationError("CsvWriter: field needs quoting: " + fields[i]);
      }
      if (i > 0) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace qsl
