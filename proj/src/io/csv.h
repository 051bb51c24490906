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

#ifndef MSDRO_IO_CSV_H_
#define MSDRO_IO_CSV_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "dro/dro.h"

namespace msdro::io {

// Dataset files: header `xi_1,...,xi_D`, one row per sample index. Features
// with fewer samples leave trailing cells empty. Epsilon is left empty.
dro::MultiDataset ReadDataset(std::istream& in);
dro::MultiDataset ReadDataset(const std::string& path);
void WriteDataset(std::ostream& out, const dro::MultiDataset& data);
void WriteDataset(const std::string& path, const dro::MultiDataset& data);

// Quality files: header `feature,epsilon`, features numbered from 1 and
// listed once each, in any order.
std::vector<double> ReadQuality(std::istream& in);
std::vector<double> ReadQuality(const std::string& path);
void WriteQuality(std::ostream& out, const std::vector<double>& epsilon);
void WriteQuality(const std::string& path, const std::vector<double>& epsilon);

// Splits one CSV line on commas and trims blanks; no quoting.
std::vector<std::string> SplitCsvLine(const std::string& line);

// Strict number parsing; raises kParse with `what` in the message.
double ParseNumber(const std::string& text, const std::string& what);

}  // namespace msdro::io

#endif  // MSDRO_IO_CSV_H_
