// Copyright 2026 The MSDRO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "io/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "common/error.h"

namespace msdro::io {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool NextLine(std::istream& in, std::string& line, int& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!Trim(line).empty()) return true;
  }
  return false;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path);
  return out;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    Fail(ErrorCode::kParse, "bad number '" + text + "' in " + what);
  return v;
}

dro::MultiDataset ReadDataset(std::istream& in) {
  std::string line;
  int number = 0;
  Require(NextLine(in, line, number), ErrorCode::kParse, "dataset is empty");
  const std::vector<std::string> header = SplitCsvLine(line);
  for (std::size_t j = 0; j < header.size(); ++j) {
    Require(header[j] == "xi_" + std::to_string(j + 1), ErrorCode::kParse,
            "dataset header must be xi_1,...,xi_D; got '" + header[j] + "'");
  }
  dro::MultiDataset data;
  data.samples.resize(header.size());
  std::vector<bool> ended(header.size(), false);
  while (NextLine(in, line, number)) {
    const std::vector<std::string> cells = SplitCsvLine(line);
    const std::string where = "dataset line " + std::to_string(number);
    Require(cells.size() <= header.size(), ErrorCode::kParse, where + " has too many cells");
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j >= cells.size() || cells[j].empty()) {
        ended[j] = true;
        continue;
      }
      Require(!ended[j], ErrorCode::kParse, where + ": gap in column xi_" + std::to_string(j + 1));
      data.samples[j].push_back(ParseNumber(cells[j], where));
    }
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    Require(!data.samples[j].empty(), ErrorCode::kParse,
            "column xi_" + std::to_string(j + 1) + " has no samples");
  }
  return data;
}

dro::MultiDataset ReadDataset(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadDataset(in);
}

void WriteDataset(std::ostream& out, const dro::MultiDataset& data) {
  const int d_count = data.dimension();
  std::size_t rows = 0;
  for (int j = 0; j < d_count; ++j) {
    out << (j ? "," : "") << "xi_" << j + 1;
    rows = std::max(rows, data.samples[j].size());
  }
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < d_count; ++j) {
      if (j) out << ',';
      if (i < data.samples[j].size()) out << data.samples[j][i];
    }
    out << '\n';
  }
}

void WriteDataset(const std::string& path, const dro::MultiDataset& data) {
  std::ofstream out = OpenOut(path);
  WriteDataset(out, data);
}

std::vector<double> ReadQuality(std::istream& in) {
  std::string line;
  int number = 0;
  Require(NextLine(in, line, number), ErrorCode::kParse, "quality file is empty");
  const std::vector<std::string> header = SplitCsvLine(line);
  Require(header.size() == 2 && header[0] == "feature" && header[1] == "epsilon",
          ErrorCode::kParse, "quality header must be feature,epsilon");
  std::vector<double> eps;
  std::vector<bool> seen;
  while (NextLine(in, line, number)) {
    const std::vector<std::string> cells = SplitCsvLine(line);
    const std::string where = "quality line " + std::to_string(number);
    Require(cells.size() == 2, ErrorCode::kParse, where + " must have two cells");
    const double f = ParseNumber(cells[0], where);
    Require(f >= 1 && f == std::floor(f) && f < 1e6, ErrorCode::kParse,
            where + ": feature must be a positive integer");
    const std::size_t j = static_cast<std::size_t>(f) - 1;
    if (j >= eps.size()) {
      eps.resize(j + 1, 0.0);
      seen.resize(j + 1, false);
    }
    Require(!seen[j], ErrorCode::kParse, where + ": feature listed twice");
    seen[j] = true;
    eps[j] = ParseNumber(cells[1], where);
    Require(eps[j] >= 0.0, ErrorCode::kInput, where + ": epsilon must be >= 0");
  }
  for (std::size_t j = 0; j < seen.size(); ++j)
    Require(seen[j], ErrorCode::kParse, "quality file misses feature " + std::to_string(j + 1));
  Require(!eps.empty(), ErrorCode::kParse, "quality file lists no features");
  return eps;
}

std::vector<double> ReadQuality(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadQuality(in);
}

void WriteQuality(std::ostream& out, const std::vector<double>& epsilon) {
  out << "feature,epsilon\n" << std::setprecision(17);
  for (std::size_t j = 0; j < epsilon.size(); ++j) out << j + 1 << ',' << epsilon[j] << '\n';
}

void WriteQuality(const std::string& path, const std::vector<double>& epsilon) {
  std::ofstream out = OpenOut(path);
  WriteQuality(out, epsilon);
}

}  // namespace msdro::io
