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
#include <map>
#include <string>
#include <vector>

#include "ringtrace/features.hpp"
#include "ringtrace/json_io.hpp"
#include "ringtrace/ledger.hpp"
#include "ringtrace/ml/tasks.hpp"

namespace ringtrace::ingest {

/// Version of the xmr-dump.json layout (docs/xmr-dump.schema.json).
inline constexpr int kDumpSchemaVersion = 1;

struct RingRef {
    std::string tx_hash;
    std::uint64_t output_index = 0;

    friend bool operator==(const RingRef&, const RingRef&) = default;
};

struct ExternalTx {
    std::string tx_hash;
    Height block_height = 0;
    Seconds timestamp = 0;  // wall clock, seconds since epoch
    bool coinbase = false;
    std::uint64_t num_outputs = 0;
    Amount fee = 0;
    std::vector<std::vector<RingRef>> rings;

    friend bool operator==(const ExternalTx&, const ExternalTx&) = default;
};

struct Dump {
    std::vector<ExternalTx> transactions;
    /// Ring references whose transaction is not in the dump, "hash:index",
    /// in order of first appearance.
    std::vector<std::string> dangling;
};

/// Accepts a top-level array of records or an object with a
/// "transactions" array. Throws SchemaError naming the record and field.
Dump parse_dump(const std::filesystem::path& path);
Dump parse_dump_json(const Json& json, const std::string& source = "dump");

/// Deterministic 64-hex-digit identifier for a simulated transaction.
std::string synthetic_tx_hash(std::uint64_t seed, TxId id);

Json to_dump_json(const PublicChain& chain);
void export_dump(const PublicChain& chain, const std::filesystem::path& path);

/// Transaction ids follow record order; outputs are numbered per record.
/// Dangling references become opaque outputs with no creating transaction,
/// so their neighbour features are zero and row coverage drops.
PublicChain to_public_chain(const Dump& dump);

struct LabelSet {
    std::map<std::string, std::string> labels;  // tx_hash -> label
    std::vector<std::string> duplicates;        // each repeated hash once
};

/// labels.csv with columns tx_hash,label. A repeated hash keeps its first label.
LabelSet read_labels(const std::filesystem::path& path);

/// Labels 0, false, no, negative and the empty string are negative; anything
/// else is positive.
bool is_positive_label(const std::string& label);

struct JoinResult {
    std::map<TxId, int> labels;  // every dump transaction, 1 positive / 0 negative
    std::size_t positives = 0;
    std::size_t total = 0;
    std::vector<std::string> unmatched;  // label hashes absent from the dump
    std::vector<std::string> duplicates;
    std::vector<std::string> warnings;

    [[nodiscard]] double positive_rate() const noexcept
    {
        return total == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(total);
    }
};

JoinResult join_labels(const Dump& dump, const LabelSet& labels);

struct PipelineOptions {
    double min_coverage = 0.0;  // rows below this coverage are dropped before training
    bool include_coinbase = false;
    std::size_t jobs = 1;
};

struct PipelineResult {
    PublicChain chain;
    FeatureMatrix features;
    JoinResult join;
    ml::ModelReport report;
};

/// featurize -> join labels -> cross-validated search on the binary label.
PipelineResult external_pipeline(const Dump& dump, const LabelSet& labels, const ml::ModelSpec& model,
                                 const ml::SearchSpec& search, const PipelineOptions& options = {});

}  // namespace ringtrace::ingest
