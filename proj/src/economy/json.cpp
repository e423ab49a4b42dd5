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

#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace {

namespace {

Json params_json(const SimParams& p)
{
    return {
        {"block_interval", p.block_interval},
        {"coinbase_maturity", p.coinbase_maturity},
        {"block_reward", p.block_reward},
        {"fee", p.fee},
        {"decoy_policy", to_string(p.decoy.kind)},
        {"recency_shape", p.decoy.recency_shape},
        {"warmup_blocks", p.warmup_blocks},
        {"processing_delay", p.processing_delay},
        {"stall_blocks", p.stall_blocks},
    };
}

SimParams params_from_json(const Json& j)
{
    const std::string where = "$.spec.sim";
    SimParams p;
    p.block_interval = field<Seconds>(j, "block_interval", where);
    p.coinbase_maturity = field<Height>(j, "coinbase_maturity", where);
    p.block_reward = field<Amount>(j, "block_reward", where);
    p.fee = field<Amount>(j, "fee", where);
    p.decoy.kind = parse_decoy_kind(field<std::string>(j, "decoy_policy", where));
    p.decoy.recency_shape = field<double>(j, "recency_shape", where);
    p.warmup_blocks = field<Height>(j, "warmup_blocks", where);
    p.processing_delay = field<Seconds>(j, "processing_delay", where);
    p.stall_blocks = field<Height>(j, "stall_blocks", where);
    return p;
}

}  // namespace

Json to_json(const EconomySpec& spec)
{
    Json agents = Json::array();
    for (const auto& a : spec.agents) {
        Json windows = Json::array();
        for (const auto& w : a.active_windows) {
            windows.push_back({w.start_hour, w.end_hour});
        }
        agents.push_back({{"agent_id", a.id},
                          {"pool_id", a.pool_id},
                          {"wait_lambda", a.wait_lambda},
                          {"amount_lambda", a.amount_lambda},
                          {"active_windows", windows}});
    }
    return {
        {"name", spec.name},
        {"agents", agents},
        {"pools", spec.pools},
        {"target_tx_count", spec.target_tx_count},
        {"ring_size", spec.ring_size},
        {"seed", spec.seed},
        {"reference_blocks", spec.reference_blocks},
        {"sim", params_json(spec.sim)},
    };
}

EconomySpec economy_spec_from_json(const Json& j)
{
    const std::string where = "$.spec";
    EconomySpec spec;
    spec.name = field<std::string>(j, "name", where);
    spec.pools = field<std::vector<std::vector<AgentId>>>(j, "pools", where);
    spec.target_tx_count = field<std::size_t>(j, "target_tx_count", where);
    spec.ring_size = field<std::size_t>(j, "ring_size", where);
    spec.seed = field<std::uint64_t>(j, "seed", where);
    spec.reference_blocks = j.value("reference_blocks", std::size_t{0});
    spec.sim = params_from_json(j.at("sim"));
    const auto agents = j.find("agents");
    if (agents == j.end() || !agents->is_array()) {
        fail(ErrorCode::SchemaError, where + ".agents: expected an array");
    }
    for (std::size_t i = 0; i < agents->size(); ++i) {
        const auto& a = (*agents)[i];
        const std::string at = where + ".agents[" + std::to_string(i) + "]";
        AgentProfile profile;
        profile.id = field<AgentId>(a, "agent_id", at);
        profile.pool_id = field<int>(a, "pool_id", at);
        profile.wait_lambda = field<double>(a, "wait_lambda", at);
        profile.amount_lambda = field<double>(a, "amount_lambda", at);
        for (const auto& w : field<std::vector<std::array<double, 2>>>(a, "active_windows", at)) {
            profile.active_windows.push_back({w[0], w[1]});
        }
        spec.agents.push_back(std::move(profile));
    }
    return spec;
}

Json economy_document(const EconomySpec& spec, const EconomyFiles& files)
{
    Json schedules = Json::array();
    for (const auto& s : files.schedules) {
        Json txs = Json::array();
        for (const auto& tx : s.txs) {
            txs.push_back({tx.wait_seconds, tx.destination, tx.amount});
        }
        schedules.push_back({{"agent_id", s.agent}, {"txs", txs}});
    }
    return {
        {"format", "ringtrace-economy"},
        {"format_version", kEconomyFormatVersion},
        {"spec", to_json(spec)},
        {"schedule_columns", {"wait_seconds", "destination", "amount"}},
        {"schedules", schedules},
        {"warnings", files.warnings},
    };
}

void write_economy(const std::filesystem::path& path, const EconomySpec& spec, const EconomyFiles& files)
{
    write_json(path, economy_document(spec, files));
}

std::pair<EconomySpec, EconomyFiles> read_economy(const std::filesystem::path& path)
{
    const Json doc = read_json(path);
    if (field<std::string>(doc, "format", "$") != "ringtrace-economy") {
        fail(ErrorCode::SchemaError, "$.format: not an economy file");
    }
    if (field<int>(doc, "format_version", "$") != kEconomyFormatVersion) {
        fail(ErrorCode::SchemaError, "$.format_version: unsupported");
    }
    if (!doc.contains("spec")) {
        fail(ErrorCode::SchemaError, "$.spec: missing field");
    }
    EconomySpec spec = economy_spec_from_json(doc["spec"]);
    EconomyFiles files;
    files.warnings = doc.value("warnings", std::vector<std::string>{});
    const auto& schedules = doc.at("schedules");
    for (std::size_t i = 0; i < schedules.size(); ++i) {
        const std::string where = "$.schedules[" + std::to_string(i) + "]";
        AgentSchedule s;
        s.agent = field<AgentId>(schedules[i], "agent_id", where);
        for (const auto& row : field<std::vector<std::array<std::int64_t, 3>>>(schedules[i], "txs", where)) {
            if (row[1] < 0 || row[2] < 1) {
                fail(ErrorCode::SchemaError, where + ".txs: invalid destination or amount");
            }
            s.txs.push_back({row[0], static_cast<AgentId>(row[1]), static_cast<Amount>(row[2])});
        }
        files.schedules.push_back(std::move(s));
    }
    return {std::move(spec), std::move(files)};
}

}  // namespace ringtrace
