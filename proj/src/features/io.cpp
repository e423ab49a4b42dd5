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

#include <algorithm>
#include <string>

#include "ringtrace/csv.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/json_io.hpp"

namespace ringtrace {

void write_features_csv(const std::filesystem::path& path, const std::vector<TxId>& tx_ids, const Matrix& values,
                        const std::vector<std::string>& columns)
{
    if (values.rows != tx_ids.size() || values.cols != columns.size()) {
        fail(ErrorCode::InvalidArgument, "feature matrix shape does not match ids/columns");
    }
    csv::Writer out(path);
    std::vector<std::string> header{"tx_id"};
    header.insert(header.end(), columns.begin(), columns.end());
    out.header(header);
    std::vector<double> row(values.cols);
    for (std::size_t r = 0; r < values.rows; ++r) {
        const auto src = values.row(r);
        row.assign(src.begin(), src.end());
        out.row_values(std::to_string(tx_ids[r]), row);
    }
}

void write_norm_stats(const std::filesystem::path& path, const FeatureMatrix& features)
{
    Json columns = Json::array();
    for (std::size_t c = 0; c < features.columns.size(); ++c) {
        columns.push_back({{"name", features.columns[c]},
                           {"mean", features.norm.mean[c]},
                           {"std", features.norm.stddev[c]},
                           {"constant", features.norm.stddev[c] == 0.0}});
    }
    write_json(path, {{"format", "ringtrace-norm-stats"}, {"format_version", 1}, {"columns", columns}}, true);
}

void write_candidates_csv(const std::filesystem::path& path, const CandidateTable& table)
{
    csv::Writer out(path);
    std::vector<std::string> header{"tx_id", "ring_index", "candidate_index"};
    const auto& names = candidate_feature_names();
    header.insert(header.end(), names.begin(), names.end());
    out.header(header);
    std::vector<double> row(table.features.cols);
    for (std::size_t r = 0; r < table.features.rows; ++r) {
        const auto src = table.features.row(r);
        row.assign(src.begin(), src.end());
        const std::string lead = std::to_string(table.tx_ids[r]) + "," + std::to_string(table.ring_index[r]) + "," +
                                 std::to_string(table.candidate_index[r]);
        out.row_values(lead, row);
    }
}

void write_correlation_csv(const std::filesystem::path& path, const RingCorrelationMatrix& matrix)
{
    csv::Writer out(path);
    out.header({"bin_i", "bin_j", "value", "support"});
    for (std::size_t i = 0; i < matrix.bins; ++i) {
        for (std::size_t j = 0; j < matrix.bins; ++j) {
            const auto& v = matrix.at(i, j);
            out.row(i, j, v ? csv::format_double(*v) : std::string{}, matrix.support_at(i, j));
        }
    }
}

namespace {

Matrix parse_block(const csv::Table& table, std::size_t first_col)
{
    Matrix m(table.rows.size(), table.header.size() - first_col);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = first_col; c < table.header.size(); ++c) {
            m(r, c - first_col) = csv::parse_double(table.rows[r][c]);
        }
    }
    return m;
}

}  // namespace

FeatureTable read_features_csv(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    if (table.header.empty() || table.header.front() != "tx_id") {
        fail(ErrorCode::SchemaError, path.string() + ": first column must be tx_id");
    }
    FeatureTable out;
    out.columns.assign(table.header.begin() + 1, table.header.end());
    for (const auto& row : table.rows) {
        out.tx_ids.push_back(static_cast<TxId>(csv::parse_int(row[0])));
    }
    out.values = parse_block(table, 1);
    return out;
}

CandidateTable read_candidates_csv(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const std::vector<std::string> lead{"tx_id", "ring_index", "candidate_index"};
    if (table.header.size() != lead.size() + kCandidateWidth ||
        !std::equal(lead.begin(), lead.end(), table.header.begin())) {
        fail(ErrorCode::SchemaError, path.string() + ": unexpected candidates header");
    }
    CandidateTable out;
    for (const auto& row : table.rows) {
        out.tx_ids.push_back(static_cast<TxId>(csv::parse_int(row[0])));
        out.ring_index.push_back(static_cast<std::size_t>(csv::parse_int(row[1])));
        out.candidate_index.push_back(static_cast<std::size_t>(csv::parse_int(row[2])));
    }
    out.features = parse_block(table, lead.size());
    return out;
}

}  // namespace ringtrace
