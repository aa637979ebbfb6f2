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

#include "phonongate/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include "phonongate/error.hpp"

namespace phonongate {

namespace {

std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        auto begin = cell.find_first_not_of(" \t\r");
        auto end = cell.find_last_not_of(" \t\r");
        cells.push_back(begin == std::string::npos ? std::string() : cell.substr(begin, end - begin + 1));
    }
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream &in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::io_error, "empty CSV input");
    }
    table.header = split_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::io_error, "CSV line " + std::to_string(line_no) + " has the wrong number of cells");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto &c : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size()) {
                throw Error(ErrorCode::io_error, "CSV line " + std::to_string(line_no) + ": bad number '" + c + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw Error(ErrorCode::io_error, "failed to format number");
    }
    return std::string(buf, ptr);
}

std::string to_csv(const CsvTable &table) {
    std::string out;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k) {
            out += ',';
        }
        out += table.header[k];
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) {
                out += ',';
            }
            out += format_double(row[k]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    write_files_atomic({{path, content}});
}

void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>> &files) {
    std::vector<std::filesystem::path> temps;
    try {
        for (const auto &[path, content] : files) {
            if (path.has_parent_path()) {
                std::filesystem::create_directories(path.parent_path());
            }
            auto tmp = path;
            tmp += ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error(ErrorCode::io_error, "cannot write " + tmp.string());
            }
            temps.push_back(tmp);
            out << content;
            out.close();
            if (!out) {
                throw Error(ErrorCode::io_error, "write failed for " + tmp.string());
            }
        }
    } catch (...) {
        std::error_code ignored;
        for (const auto &tmp : temps) {
            std::filesystem::remove(tmp, ignored);
        }
        throw;
    }
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::filesystem::rename(temps[k], files[k].first);
    }
}

}  // namespace phonongate
