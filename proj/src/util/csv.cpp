// Copyright 2026 The ringtrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ringtrace/csv.hpp"

#include <charconv>
#include <cmath>

#include "ringtrace/error.hpp"

namespace ringtrace::csv {

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (value == 0.0) {
        return "0";  // folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return {buf, res.ptr};
}

Writer::Writer(const std::filesystem::path& path) : out_(path, std::ios::binary)
{
    if (!out_) {
        fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    }
}

void Writer::header(const std::vector<std::string>& columns)
{
    bool first = true;
    for (const auto& c : columns) {
        write_cell(c, first);
    }
    out_ << '\n';
}

void Writer::row_values(std::string_view leading, const std::vector<double>& values)
{
    out_ << leading;
    for (double v : values) {
        out_ << ',' << format_double(v);
    }
    out_ << '\n';
}

std::optional<std::size_t> Table::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const
{
    if (auto idx = column(name)) {
        return *idx;
    }
    fail(ErrorCode::SchemaError, source + ": missing column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.emplace_back(line.substr(start));
            break;
        }
        cells.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

}  // namespace

Table read(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    Table table;
    table.source = path.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            fail(ErrorCode::SchemaError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.header.size()) + " cells, got " +
                                             std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) {
        fail(ErrorCode::SchemaError, path.string() + ": missing header");
    }
    return table;
}

double parse_double(const std::string& cell)
{
    if (cell == "nan") {
        return std::nan("");
    }
    double value = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        fail(ErrorCode::SchemaError, "not a number: '" + cell + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string& cell)
{
    std::int64_t value = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        fail(ErrorCode::SchemaError, "not an integer: '" + cell + "'");
    }
    return value;
}

}  // namespace ringtrace::csv
