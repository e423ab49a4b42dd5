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
#include <cctype>
#include <set>
#include <string>
#include <unordered_map>

#include "ringtrace/csv.hpp"
#include "ringtrace/ingest.hpp"

namespace ringtrace::ingest {

LabelSet read_labels(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto hash_col = table.require_column("tx_hash");
    const auto label_col = table.require_column("label");
    LabelSet out;
    std::set<std::string> repeated;
    for (const auto& row : table.rows) {
        const auto& hash = row[hash_col];
        if (!out.labels.emplace(hash, row[label_col]).second && repeated.insert(hash).second) {
            out.duplicates.push_back(hash);
        }
    }
    return out;
}

bool is_positive_label(const std::string& label)
{
    std::string s = label;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return !(s.empty() || s == "0" || s == "false" || s == "no" || s == "negative");
}

JoinResult join_labels(const Dump& dump, const LabelSet& labels)
{
    JoinResult out;
    out.duplicates = labels.duplicates;
    std::unordered_map<std::string, TxId> ids;
    for (std::size_t i = 0; i < dump.transactions.size(); ++i) {
        ids.emplace(dump.transactions[i].tx_hash, static_cast<TxId>(i));
        out.labels[static_cast<TxId>(i)] = 0;
    }
    out.total = dump.transactions.size();
    std::size_t matched = 0;
    for (const auto& [hash, label] : labels.labels) {
        const auto it = ids.find(hash);
        if (it == ids.end()) {
            out.unmatched.push_back(hash);
            continue;
        }
        ++matched;
        if (is_positive_label(label)) {
            out.labels[it->second] = 1;
            ++out.positives;
        }
    }
    if (matched == 0) {
        out.warnings.push_back("no label matched a dump transaction; every row is negative");
    }
    if (!out.duplicates.empty()) {
        out.warnings.push_back(std::to_string(out.duplicates.size()) + " duplicate label hash(es), first label kept");
    }
    return out;
}

}  // namespace ringtrace::ingest
