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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ringtrace::csv {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void header(const std::vector<std::string>& columns);

    template <typename... Cells>
    void row(const Cells&... cells)
    {
        bool first = true;
        (write_cell(cells, first), ...);
        out_ << '\n';
    }

    void row_values(std::string_view leading, const std::vector<double>& values);

private:
    void separator(bool& first)
    {
        if (!first) {
            out_ << ',';
        }
        first = false;
    }
    void write_cell(const std::string& s, bool& first) { separator(first); out_ << s; }
    void write_cell(std::string_view s, bool& first) { separator(first); out_ << s; }
    void write_cell(const char* s, bool& first) { separator(first); out_ << s; }
    void write_cell(double v, bool& first) { separator(first); out_ << format_double(v); }
    template <typename Int>
    void write_cell(Int v, bool& first) requires std::is_integral_v<Int>
    {
        separator(first);
        out_ << v;
    }

    std::ofstream out_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
    /// Like column() but throws SchemaError naming the file when missing.
    [[nodiscard]] std::size_t require_column(std::string_view name) const;

    std::string source;
};

/// Plain comma-separated reader (no quoting); the first line is the header.
Table read(const std::filesystem::path& path);

double parse_double(const std::string& cell);
std::int64_t parse_int(const std::string& cell);

}  // namespace ringtrace::csv
