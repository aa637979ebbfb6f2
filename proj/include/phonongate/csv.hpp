// Copyright 2026 The PhononGate Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace phonongate {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Parses a numeric CSV with a mandatory header row.
CsvTable read_csv(std::istream &in);

/// Fixed 17-significant-digit rendering with '.' as decimal separator,
/// independent of the global locale.
std::string format_double(double value);

/// Comma-separated, LF-terminated rendering of `table`.
std::string to_csv(const CsvTable &table);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Writes several files so that either all of them appear or none do
/// (as far as the filesystem allows): every temp file is written first,
/// then they are renamed in order.
void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>> &files);

}  // namespace phonongate
