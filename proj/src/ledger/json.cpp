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

#include <fstream>

#include "ringtrace/error.hpp"
#include "ringtrace/ledger_io.hpp"

namespace ringtrace {

void write_json(const std::filesystem::path& path, const Json& value, bool pretty)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    }
    out << (pretty ? value.dump(2) : value.dump()) << '\n';
    if (!out) {
        fail(ErrorCode::Io, "failed writing " + path.string());
    }
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::SchemaError, path.string() + ": " + e.what());
    }
}

namespace {

std::string kind_name(TxKind kind)
{
    return kind == TxKind::coinbase ? "coinbase" : "transfer";
}

TxKind parse_kind(const std::string& name, const std::string& where)
{
    if (name == "coinbase") {
        return TxKind::coinbase;
    }
    if (name == "transfer") {
        return TxKind::transfer;
    }
    fail(ErrorCode::SchemaError, where + ".kind: unknown kind '" + name + "'");
}

void check_format(const Json& doc, const std::string& expected)
{
    const auto format = field<std::string>(doc, "format", "$");
    if (format != expected) {
        fail(ErrorCode::SchemaError, "$.format: expected '" + expected + "', got '" + format + "'");
    }
    const auto version = field<int>(doc, "format_version", "$");
    if (version != kChainFormatVersion) {
        fail(ErrorCode::SchemaError, "$.format_version: unsupported version " + std::to_string(version));
    }
}

const Json& array_field(const Json& doc, const char* key, const std::string& where)
{
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_array()) {
        fail(ErrorCode::SchemaError, where + "." + key + ": expected an array");
    }
    return *it;
}

}  // namespace

Json to_json(const Chain& chain)
{
    Json doc;
    doc["format"] = "ringtrace-chain";
    doc["format_version"] = kChainFormatVersion;
    doc["seed"] = chain.seed;
    doc["params"] = {
        {"block_interval", chain.params.block_interval},
        {"coinbase_maturity", chain.params.coinbase_maturity},
        {"block_reward", chain.params.block_reward},
        {"fee", chain.params.fee},
        {"ring_size", chain.params.ring_size},
        {"decoy_policy", to_string(chain.params.decoy.kind)},
        {"recency_shape", chain.params.decoy.recency_shape},
    };
    Json blocks = Json::array();
    for (const auto& b : chain.blocks) {
        blocks.push_back({{"height", b.height}, {"timestamp", b.timestamp}, {"miner", b.miner}, {"tx_ids", b.tx_ids}});
    }
    doc["blocks"] = std::move(blocks);
    Json txs = Json::array();
    for (const auto& tx : chain.transactions) {
        Json inputs = Json::array();
        for (const auto& ring : tx.inputs) {
            inputs.push_back({{"members", ring.members}, {"real_index", ring.real_index}});
        }
        txs.push_back({
            {"tx_id", tx.id},
            {"kind", kind_name(tx.kind)},
            {"timestamp", tx.timestamp},
            {"block_height", tx.block_height},
            {"inputs", std::move(inputs)},
            {"outputs", tx.outputs},
            {"fee", tx.fee},
            {"sender", tx.sender ? Json(*tx.sender) : Json(nullptr)},
            {"receiver", tx.receiver},
            {"intended_amount", tx.intended_amount},
            {"request_time", tx.request_time},
        });
    }
    doc["transactions"] = std::move(txs);
    Json outputs = Json::array();
    for (const auto& o : chain.outputs) {
        outputs.push_back({
            {"output_id", o.id},
            {"created_by", o.created_by},
            {"owner", o.owner},
            {"amount", o.amount},
            {"block_height", o.block_height},
            {"timestamp", o.timestamp},
            {"is_coinbase", o.is_coinbase},
            {"spent_by", o.spent_by ? Json(*o.spent_by) : Json(nullptr)},
        });
    }
    doc["outputs"] = std::move(outputs);
    return doc;
}

Chain chain_from_json(const Json& doc)
{
    check_format(doc, "ringtrace-chain");
    Chain chain;
    chain.seed = field<std::uint64_t>(doc, "seed", "$");
    const auto& p = doc.at("params");
    chain.params.block_interval = field<Seconds>(p, "block_interval", "$.params");
    chain.params.coinbase_maturity = field<Height>(p, "coinbase_maturity", "$.params");
    chain.params.block_reward = field<Amount>(p, "block_reward", "$.params");
    chain.params.fee = field<Amount>(p, "fee", "$.params");
    chain.params.ring_size = field<std::size_t>(p, "ring_size", "$.params");
    chain.params.decoy.kind = parse_decoy_kind(field<std::string>(p, "decoy_policy", "$.params"));
    chain.params.decoy.recency_shape = field<double>(p, "recency_shape", "$.params");

    const auto& blocks = array_field(doc, "blocks", "$");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string where = "$.blocks[" + std::to_string(i) + "]";
        Block b;
        b.height = field<Height>(blocks[i], "height", where);
        b.timestamp = field<Seconds>(blocks[i], "timestamp", where);
        b.miner = field<AgentId>(blocks[i], "miner", where);
        b.tx_ids = field<std::vector<TxId>>(blocks[i], "tx_ids", where);
        chain.blocks.push_back(std::move(b));
    }
    const auto& txs = array_field(doc, "transactions", "$");
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const std::string where = "$.transactions[" + std::to_string(i) + "]";
        const auto& j = txs[i];
        Transaction tx;
        tx.id = field<TxId>(j, "tx_id", where);
        tx.kind = parse_kind(field<std::string>(j, "kind", where), where);
        tx.timestamp = field<Seconds>(j, "timestamp", where);
        tx.block_height = field<Height>(j, "block_height", where);
        for (const auto& ring : array_field(j, "inputs", where)) {
            tx.inputs.push_back({field<std::vector<OutputId>>(ring, "members", where + ".inputs"),
                                 field<std::size_t>(ring, "real_index", where + ".inputs")});
        }
        tx.outputs = field<std::vector<OutputId>>(j, "outputs", where);
        tx.fee = field<Amount>(j, "fee", where);
        if (!j.contains("sender")) {
            fail(ErrorCode::SchemaError, where + ".sender: missing field");
        }
        if (!j["sender"].is_null()) {
            tx.sender = field<AgentId>(j, "sender", where);
        }
        tx.receiver = field<AgentId>(j, "receiver", where);
        tx.intended_amount = field<Amount>(j, "intended_amount", where);
        tx.request_time = field<Seconds>(j, "request_time", where);
        chain.transactions.push_back(std::move(tx));
    }
    const auto& outputs = array_field(doc, "outputs", "$");
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::string where = "$.outputs[" + std::to_string(i) + "]";
        const auto& j = outputs[i];
        Output o;
        o.id = field<OutputId>(j, "output_id", where);
        o.created_by = field<TxId>(j, "created_by", where);
        o.owner = field<AgentId>(j, "owner", where);
        o.amount = field<Amount>(j, "amount", where);
        o.block_height = field<Height>(j, "block_height", where);
        o.timestamp = field<Seconds>(j, "timestamp", where);
        o.is_coinbase = field<bool>(j, "is_coinbase", where);
        if (j.contains("spent_by") && !j["spent_by"].is_null()) {
            o.spent_by = field<TxId>(j, "spent_by", where);
        }
        chain.outputs.push_back(o);
    }
    return chain;
}

Json to_json(const PublicChain& chain)
{
    Json doc;
    doc["format"] = "ringtrace-public-chain";
    doc["format_version"] = kChainFormatVersion;
    doc["seed"] = chain.seed;
    Json blocks = Json::array();
    for (const auto& b : chain.blocks) {
        blocks.push_back({{"height", b.height}, {"timestamp", b.timestamp}, {"tx_ids", b.tx_ids}});
    }
    doc["blocks"] = std::move(blocks);
    Json txs = Json::array();
    for (const auto& tx : chain.transactions) {
        txs.push_back({
            {"tx_id", tx.id},
            {"kind", kind_name(tx.kind)},
            {"timestamp", tx.timestamp},
            {"block_height", tx.block_height},
            {"fee", tx.fee},
            {"rings", tx.rings},
            {"outputs", tx.outputs},
        });
    }
    doc["transactions"] = std::move(txs);
    return doc;
}

PublicChain public_chain_from_json(const Json& doc)
{
    check_format(doc, "ringtrace-public-chain");
    PublicChain chain;
    chain.seed = field<std::uint64_t>(doc, "seed", "$");
    const auto& blocks = array_field(doc, "blocks", "$");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string where = "$.blocks[" + std::to_string(i) + "]";
        chain.blocks.push_back({field<Height>(blocks[i], "height", where), field<Seconds>(blocks[i], "timestamp", where),
                                field<std::vector<TxId>>(blocks[i], "tx_ids", where)});
    }
    const auto& txs = array_field(doc, "transactions", "$");
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const std::string where = "$.transactions[" + std::to_string(i) + "]";
        const auto& j = txs[i];
        PublicTransaction tx;
        tx.id = field<TxId>(j, "tx_id", where);
        tx.kind = parse_kind(field<std::string>(j, "kind", where), where);
        tx.timestamp = field<Seconds>(j, "timestamp", where);
        tx.block_height = field<Height>(j, "block_height", where);
        tx.fee = field<Amount>(j, "fee", where);
        tx.rings = field<std::vector<std::vector<OutputId>>>(j, "rings", where);
        tx.outputs = field<std::vector<OutputId>>(j, "outputs", where);
        chain.transactions.push_back(std::move(tx));
    }
    return chain;
}

Json to_json(const ValidationReport& report)
{
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"kind", to_string(v.kind)},
                              {"tx_id", v.tx ? Json(*v.tx) : Json(nullptr)},
                              {"detail", v.detail}});
    }
    return {{"valid", report.ok()}, {"violation_count", report.violations.size()}, {"violations", violations}};
}

void write_chain(const std::filesystem::path& path, const Chain& chain)
{
    write_json(path, to_json(chain));
}

Chain read_chain(const std::filesystem::path& path)
{
    return chain_from_json(read_json(path));
}

void write_public_chain(const std::filesystem::path& path, const PublicChain& chain)
{
    write_json(path, to_json(chain));
}

PublicChain read_public_chain(const std::filesystem::path& path)
{
    return public_chain_from_json(read_json(path));
}

}  // namespace ringtrace
