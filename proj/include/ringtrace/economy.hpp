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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringtrace/json_io.hpp"
#include "ringtrace/ledger.hpp"

namespace ringtrace {

inline constexpr int kEconomyFormatVersion = 1;
inline constexpr Seconds kSecondsPerDay = 86400;

/// Daily trading window [start_hour, end_hour) on the simulated clock.
struct DailyWindow {
    double start_hour = 0.0;
    double end_hour = 24.0;

    friend bool operator==(const DailyWindow&, const DailyWindow&) = default;
};

struct AgentProfile {
    AgentId id = 0;
    int pool_id = 0;
    double wait_lambda = 45.0;     // Poisson mean, seconds
    double amount_lambda = 100.0;  // Poisson mean, atomic units
    std::vector<DailyWindow> active_windows;  // empty: always active

    friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

struct SimParams {
    Seconds block_interval = 120;
    Height coinbase_maturity = 60;
    Amount block_reward = 1000;
    Amount fee = 1;
    DecoyPolicy decoy;
    Height warmup_blocks = 120;
    Seconds processing_delay = 0;
    Height stall_blocks = 5000;

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

struct EconomySpec {
    std::string name;
    std::vector<AgentProfile> agents;        // agent ids are 0..n-1 in order
    std::vector<std::vector<AgentId>> pools;  // partition of the agent ids
    std::size_t target_tx_count = 0;
    std::size_t ring_size = 11;
    std::uint64_t seed = 0;
    SimParams sim;
    std::size_t reference_blocks = 0;  // block count the preset is calibrated against; 0 if none

    friend bool operator==(const EconomySpec&, const EconomySpec&) = default;
};

const std::vector<std::string>& scenario_names();

/// s03..s07. Throws UnknownScenario otherwise.
EconomySpec scenario_preset(std::string_view name, std::uint64_t seed = 0);

/// Earliest time >= t inside one of the agent's windows.
Seconds next_window_opening(const AgentProfile& agent, Seconds t);
bool in_active_window(const AgentProfile& agent, Seconds t);

struct ScheduledTx {
    Seconds wait_seconds = 0;  // gap after the previous request, window shifts included
    AgentId destination = 0;
    Amount amount = 1;

    friend bool operator==(const ScheduledTx&, const ScheduledTx&) = default;
};

struct AgentSchedule {
    AgentId agent = 0;
    std::vector<ScheduledTx> txs;

    friend bool operator==(const AgentSchedule&, const AgentSchedule&) = default;
};

/// One economy file per agent.
struct EconomyFiles {
    std::vector<AgentSchedule> schedules;
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t total() const noexcept;

    friend bool operator==(const EconomyFiles&, const EconomyFiles&) = default;
};

/// Per-agent transfer counts summing to spec.target_tx_count, share ∝ 1/wait_lambda
/// (largest remainder). Agents without a pool-mate get 0.
std::vector<std::size_t> apportion_transfers(const EconomySpec& spec);

/// Simulated time of the first possible request: the warmup blocks are mined first.
Seconds schedule_start(const SimParams& params);

EconomyFiles gen_economy(const EconomySpec& spec);

struct TransferLabel {
    TxId tx = 0;
    AgentId sender = 0;
    AgentId receiver = 0;
    int receiver_pool = 0;
    Amount value = 0;
    Seconds request_time = 0;
    std::vector<std::size_t> real_indices;  // one per ring, in input order

    friend bool operator==(const TransferLabel&, const TransferLabel&) = default;
};

struct GroundTruth {
    std::vector<TransferLabel> transfers;  // in tx id order
    std::vector<AgentProfile> agents;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

GroundTruth ground_truth(const Chain& chain, const EconomySpec& spec);

struct StallReport {
    Height height = 0;
    std::size_t unfinished = 0;
    std::string detail;
};

struct SimulationResult {
    Chain chain;
    GroundTruth truth;
    std::size_t scheduled = 0;
    std::size_t realized = 0;
    std::optional<StallReport> stall;
};

/// Discrete-event replay of the economy files on a fresh chain. Blocks are
/// mined every params.block_interval by agents in round robin; a due transfer
/// is built against the chain tip and waits while its sender cannot afford it.
SimulationResult run_simulation(const EconomyFiles& files, const EconomySpec& spec, const SimParams& params,
                                std::uint64_t seed);

/// labels.csv and real_inputs.csv in `dir`.
void export_ground_truth(const GroundTruth& truth, const std::filesystem::path& dir);

/// tx id -> real index per ring; the public-side form of the spend labels.
using RealInputMap = std::map<TxId, std::vector<std::size_t>>;

RealInputMap real_input_map(const GroundTruth& truth);
RealInputMap read_real_inputs(const std::filesystem::path& path);

enum class EdgeMode { all, true_only };

struct Edge {
    TxId spender = 0;
    TxId source = 0;  // creator of the referenced output

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// `all`: one edge per ring member. `true_only`: one edge per ring, to the real
/// member, which needs `secrets` (ModeRequiresSecrets otherwise).
std::vector<Edge> graph_edges(const PublicChain& chain, EdgeMode mode, const RealInputMap* secrets = nullptr);
std::vector<Edge> graph_edges(const Chain& chain, EdgeMode mode);

void write_edges(const std::filesystem::path& path, const std::vector<Edge>& edges);

// economy.json
Json to_json(const EconomySpec& spec);
EconomySpec economy_spec_from_json(const Json& doc);
Json economy_document(const EconomySpec& spec, const EconomyFiles& files);
void write_economy(const std::filesystem::path& path, const EconomySpec& spec, const EconomyFiles& files);
std::pair<EconomySpec, EconomyFiles> read_economy(const std::filesystem::path& path);

}  // namespace ringtrace
