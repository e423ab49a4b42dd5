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
#include <cmath>
#include <numeric>

#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace {

namespace {

constexpr double kMinWait = 45.0;
constexpr double kMaxWait = 90000.0;
constexpr double kSharedAmount = 100.0;
constexpr double kMinAmount = 10.0;
constexpr double kMaxAmount = 1000.0;

double log_spaced(double lo, double hi, std::size_t i, std::size_t n)
{
    if (n <= 1) {
        return lo;
    }
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    return lo * std::pow(hi / lo, t);
}

Seconds hour_to_seconds(double hour)
{
    return static_cast<Seconds>(std::llround(hour * 3600.0));
}

// Deterministic span estimate: every wait at its mean, window shifts applied.
Seconds expected_span(const EconomySpec& spec)
{
    const auto counts = apportion_transfers(spec);
    const Seconds start = schedule_start(spec.sim);
    Seconds span = 0;
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
        Seconds t = start;
        const auto wait = static_cast<Seconds>(std::llround(spec.agents[i].wait_lambda));
        for (std::size_t k = 0; k < counts[i]; ++k) {
            t = next_window_opening(spec.agents[i], t + wait);
        }
        span = std::max(span, t - start);
    }
    return span;
}

// Block interval that makes the expected run length match reference_blocks.
// The test networks' mining rate is a free parameter of the replay.
void calibrate_block_interval(EconomySpec& spec)
{
    const Height overhead = spec.sim.warmup_blocks + spec.sim.coinbase_maturity;
    if (spec.reference_blocks <= overhead) {
        return;
    }
    const double blocks = static_cast<double>(spec.reference_blocks - overhead);
    // Warmup length itself depends on the interval; two passes converge.
    for (int pass = 0; pass < 2; ++pass) {
        const double span = static_cast<double>(expected_span(spec));
        spec.sim.block_interval = std::max<Seconds>(1, std::llround(span / blocks));
    }
}

EconomySpec base_spec(std::string name, std::size_t agents, std::size_t target, std::size_t reference_blocks,
                      std::uint64_t seed)
{
    EconomySpec spec;
    spec.name = std::move(name);
    spec.target_tx_count = target;
    spec.reference_blocks = reference_blocks;
    spec.seed = seed;
    spec.ring_size = 11;
    spec.agents.resize(agents);
    for (std::size_t i = 0; i < agents; ++i) {
        spec.agents[i].id = static_cast<AgentId>(i);
        spec.agents[i].amount_lambda = kSharedAmount;
    }
    return spec;
}

// Agent i joins pool i % pools; within each pool members are log-spaced over
// the wait range, so every pool mixes fast and slow traders.
void assign_pools(EconomySpec& spec, std::size_t pools)
{
    spec.pools.assign(pools, {});
    const std::size_t per_pool = spec.agents.size() / pools;
    for (auto& agent : spec.agents) {
        const auto i = static_cast<std::size_t>(agent.id);
        agent.pool_id = static_cast<int>(i % pools);
        agent.wait_lambda = log_spaced(kMinWait, kMaxWait, i / pools, per_pool);
        spec.pools[i % pools].push_back(agent.id);
    }
}

void assign_windows(EconomySpec& spec)
{
    const double width = 24.0 / static_cast<double>(spec.pools.size());
    for (auto& agent : spec.agents) {
        const double start = width * agent.pool_id;
        agent.active_windows = {{start, start + width}};
    }
}

}  // namespace

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = {"s03", "s04", "s05", "s06", "s07"};
    return names;
}

EconomySpec scenario_preset(std::string_view name, std::uint64_t seed)
{
    EconomySpec spec;
    if (name == "s03") {
        spec = base_spec("s03", 10, 4898, 23812, seed);
        assign_pools(spec, 1);
    } else if (name == "s04") {
        spec = base_spec("s04", 10, 4923, 25509, seed);
        assign_pools(spec, 1);
        // Fast traders move small amounts so every agent stays solvent.
        for (auto& agent : spec.agents) {
            agent.amount_lambda = log_spaced(kMinAmount, kMaxAmount, static_cast<std::size_t>(agent.id), 10);
        }
    } else if (name == "s05") {
        spec = base_spec("s05", 10, 4923, 41583, seed);
        assign_pools(spec, 2);
    } else if (name == "s06") {
        spec = base_spec("s06", 50, 24807, 37281, seed);
        assign_pools(spec, 2);
        assign_windows(spec);
    } else if (name == "s07") {
        spec = base_spec("s07", 50, 7070, 58551, seed);
        assign_pools(spec, 5);
        assign_windows(spec);
    } else {
        fail(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(name) + "' (expected s03..s07)");
    }
    calibrate_block_interval(spec);
    return spec;
}

bool in_active_window(const AgentProfile& agent, Seconds t)
{
    return next_window_opening(agent, t) == t;
}

Seconds next_window_opening(const AgentProfile& agent, Seconds t)
{
    if (agent.active_windows.empty()) {
        return t;
    }
    const Seconds tod = ((t % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
    Seconds best = kSecondsPerDay;
    for (const auto& w : agent.active_windows) {
        const Seconds start = hour_to_seconds(w.start_hour);
        const Seconds end = hour_to_seconds(w.end_hour);
        const bool inside = start <= end ? (tod >= start && tod < end) : (tod >= start || tod < end);
        if (inside) {
            return t;
        }
        best = std::min(best, ((start - tod) % kSecondsPerDay + kSecondsPerDay) % kSecondsPerDay);
    }
    return t + best;
}

std::vector<std::size_t> apportion_transfers(const EconomySpec& spec)
{
    const std::size_t n = spec.agents.size();
    std::vector<std::size_t> counts(n, 0);
    std::vector<double> weight(n, 0.0);
    std::vector<std::size_t> pool_size(spec.pools.size(), 0);
    for (const auto& pool : spec.pools) {
        for (AgentId a : pool) {
            if (a >= 0 && static_cast<std::size_t>(a) < n) {
                pool_size[static_cast<std::size_t>(spec.agents[static_cast<std::size_t>(a)].pool_id)] = pool.size();
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto pool = static_cast<std::size_t>(spec.agents[i].pool_id);
        if (pool < pool_size.size() && pool_size[pool] >= 2) {
            weight[i] = 1.0 / spec.agents[i].wait_lambda;
        }
    }
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    if (total <= 0.0) {
        return counts;
    }
    std::vector<double> remainder(n, 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double quota = static_cast<double>(spec.target_tx_count) * weight[i] / total;
        counts[i] = static_cast<std::size_t>(std::floor(quota));
        remainder[i] = quota - std::floor(quota);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < spec.target_tx_count && k < n; ++k) {
        if (weight[order[k]] > 0.0) {
            ++counts[order[k]];
            ++assigned;
        }
    }
    return counts;
}

Seconds schedule_start(const SimParams& params)
{
    return static_cast<Seconds>(params.warmup_blocks) * params.block_interval;
}

}  // namespace ringtrace
