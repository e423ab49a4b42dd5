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

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "ringtrace/error.hpp"
#include "ringtrace/ingest.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::ingest {

namespace {

std::string where(const std::string& source, std::size_t record, const std::string& hash)
{
    std::string out = source + ": record " + std::to_string(record);
    if (!hash.empty()) {
        out += " (" + hash + ")";
    }
    return out;
}

std::string ref_key(const std::string& hash, std::uint64_t index)
{
    return hash + ":" + std::to_string(index);
}

ExternalTx parse_record(const Json& record, const std::string& at)
{
    ExternalTx tx;
    tx.tx_hash = field<std::string>(record, "tx_hash", at);
    const std::string here = at + " (" + tx.tx_hash + ")";
    tx.block_height = field<Height>(record, "block_height", here);
    tx.timestamp = field<Seconds>(record, "timestamp", here);
    tx.num_outputs = field<std::uint64_t>(record, "num_outputs", here);
    if (record.contains("coinbase")) {
        tx.coinbase = field<bool>(record, "coinbase", here);
    }
    if (record.contains("fee")) {
        tx.fee = field<Amount>(record, "fee", here);
    }
    const auto rings = record.contains("rings") ? record.at("rings") : Json::array();
    if (!rings.is_array()) {
        fail(ErrorCode::SchemaError, here + ".rings: expected an array");
    }
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& ring = rings[r];
        const std::string ring_at = here + ".rings[" + std::to_string(r) + "]";
        if (!ring.is_array() || ring.empty()) {
            fail(ErrorCode::SchemaError, ring_at + ": expected a non-empty array");
        }
        std::vector<RingRef> members;
        for (std::size_t m = 0; m < ring.size(); ++m) {
            const std::string member_at = ring_at + "[" + std::to_string(m) + "]";
            members.push_back({field<std::string>(ring[m], "tx_hash", member_at),
                               field<std::uint64_t>(ring[m], "output_index", member_at)});
        }
        tx.rings.push_back(std::move(members));
    }
    if (tx.coinbase && !tx.rings.empty()) {
        fail(ErrorCode::SchemaError, here + ".rings: coinbase records carry no rings");
    }
    if (!tx.coinbase && tx.rings.empty()) {
        fail(ErrorCode::SchemaError, here + ".rings: non-coinbase records need at least one ring");
    }
    return tx;
}

}  // namespace

Dump parse_dump_json(const Json& json, const std::string& source)
{
    const Json* records = &json;
    if (json.is_object()) {
        if (json.contains("schema_version") && json["schema_version"] != kDumpSchemaVersion) {
            fail(ErrorCode::SchemaError, source + ": unsupported schema_version " + json["schema_version"].dump());
        }
        const auto it = json.find("transactions");
        if (it == json.end()) {
            fail(ErrorCode::SchemaError, source + ".transactions: missing field");
        }
        records = &*it;
    }
    if (!records->is_array()) {
        fail(ErrorCode::SchemaError, source + ": expected an array of transaction records");
    }
    Dump dump;
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records->size(); ++i) {
        auto tx = parse_record((*records)[i], where(source, i, ""));
        if (!index.emplace(tx.tx_hash, i).second) {
            fail(ErrorCode::SchemaError, where(source, i, tx.tx_hash) + ".tx_hash: duplicate hash");
        }
        dump.transactions.push_back(std::move(tx));
    }
    std::set<std::string> seen_dangling;
    for (std::size_t i = 0; i < dump.transactions.size(); ++i) {
        const auto& tx = dump.transactions[i];
        for (const auto& ring : tx.rings) {
            for (const auto& ref : ring) {
                const auto it = index.find(ref.tx_hash);
                if (it == index.end()) {
                    const auto key = ref_key(ref.tx_hash, ref.output_index);
                    if (seen_dangling.insert(key).second) {
                        dump.dangling.push_back(key);
                    }
                    continue;
                }
                const auto& source_tx = dump.transactions[it->second];
                if (source_tx.block_height >= tx.block_height) {
                    fail(ErrorCode::SchemaError, where(source, i, tx.tx_hash) + ".rings: references " +
                                                     ref.tx_hash + " at height " +
                                                     std::to_string(source_tx.block_height) +
                                                     ", not below its own height");
                }
                if (ref.output_index >= source_tx.num_outputs) {
                    fail(ErrorCode::SchemaError, where(source, i, tx.tx_hash) + ".rings: output_index " +
                                                     std::to_string(ref.output_index) + " out of range for " +
                                                     ref.tx_hash);
                }
            }
        }
    }
    return dump;
}

Dump parse_dump(const std::filesystem::path& path)
{
    return parse_dump_json(read_json(path), path.string());
}

std::string synthetic_tx_hash(std::uint64_t seed, TxId id)
{
    std::string out;
    std::uint64_t state = mix64(seed ^ mix64(id));
    char buf[17];
    for (int part = 0; part < 4; ++part) {
        state = mix64(state + static_cast<std::uint64_t>(part));
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state));
        out += buf;
    }
    return out;
}

Json to_dump_json(const PublicChain& chain)
{
    // Output id -> (creating tx, position in its output list).
    std::unordered_map<OutputId, std::pair<TxId, std::size_t>> origin;
    for (const auto& tx : chain.transactions) {
        for (std::size_t k = 0; k < tx.outputs.size(); ++k) {
            origin.emplace(tx.outputs[k], std::make_pair(tx.id, k));
        }
    }
    Json records = Json::array();
    for (const auto& tx : chain.transactions) {
        Json rings = Json::array();
        for (const auto& ring : tx.rings) {
            Json members = Json::array();
            for (OutputId o : ring) {
                const auto it = origin.find(o);
                if (it == origin.end()) {
                    fail(ErrorCode::InvalidArgument, "output " + std::to_string(o) + " has no creating transaction");
                }
                members.push_back({{"tx_hash", synthetic_tx_hash(chain.seed, it->second.first)},
                                   {"output_index", it->second.second}});
            }
            rings.push_back(std::move(members));
        }
        records.push_back({{"tx_hash", synthetic_tx_hash(chain.seed, tx.id)},
                           {"block_height", tx.block_height},
                           {"timestamp", tx.timestamp},
                           {"coinbase", tx.kind == TxKind::coinbase},
                           {"num_outputs", tx.outputs.size()},
                           {"fee", tx.fee},
                           {"rings", std::move(rings)}});
    }
    return {{"format", "xmr-dump"}, {"schema_version", kDumpSchemaVersion}, {"transactions", std::move(records)}};
}

void export_dump(const PublicChain& chain, const std::filesystem::path& path)
{
    write_json(path, to_dump_json(chain), false);
}

PublicChain to_public_chain(const Dump& dump)
{
    PublicChain chain;
    std::unordered_map<std::string, std::pair<TxId, OutputId>> first_output;
    OutputId next_output = 0;
    chain.transactions.reserve(dump.transactions.size());
    for (std::size_t i = 0; i < dump.transactions.size(); ++i) {
        const auto& ext = dump.transactions[i];
        PublicTransaction tx;
        tx.id = static_cast<TxId>(i);
        tx.kind = ext.coinbase ? TxKind::coinbase : TxKind::transfer;
        tx.timestamp = ext.timestamp;
        tx.block_height = ext.block_height;
        tx.fee = ext.fee;
        first_output.emplace(ext.tx_hash, std::make_pair(tx.id, next_output));
        for (std::uint64_t k = 0; k < ext.num_outputs; ++k) {
            tx.outputs.push_back(next_output++);
        }
        chain.transactions.push_back(std::move(tx));
    }
    // Opaque ids for references leaving the dump, numbered after every real output.
    std::unordered_map<std::string, OutputId> opaque;
    for (const auto& key : dump.dangling) {
        opaque.emplace(key, next_output++);
    }
    for (std::size_t i = 0; i < dump.transactions.size(); ++i) {
        for (const auto& ring : dump.transactions[i].rings) {
            std::vector<OutputId> members;
            for (const auto& ref : ring) {
                const auto it = first_output.find(ref.tx_hash);
                members.push_back(it != first_output.end() ? it->second.second + ref.output_index
                                                           : opaque.at(ref_key(ref.tx_hash, ref.output_index)));
            }
            chain.transactions[i].rings.push_back(std::move(members));
        }
    }
    std::map<Height, PublicBlock> blocks;
    for (const auto& tx : chain.transactions) {
        auto& block = blocks[tx.block_height];
        block.height = tx.block_height;
        block.timestamp = block.tx_ids.empty() ? tx.timestamp : std::min(block.timestamp, tx.timestamp);
        block.tx_ids.push_back(tx.id);
    }
    for (auto& [height, block] : blocks) {
        chain.blocks.push_back(std::move(block));
    }
    return chain;
}

}  // namespace ringtrace::ingest
