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

#include <numeric>

#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace {

std::size_t EconomyFiles::total() const noexcept
{
    std::size_t n = 0;
    for (const auto& s : schedules) {
        n += s.txs.size();
    }
    return n;
}

EconomyFiles gen_economy(const EconomySpec& spec)
{
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
        if (spec.agents[i].id != static_cast<AgentId>(i)) {
            fail(ErrorCode::InvalidArgument, "agent ids must be 0..n-1 in order");
        }
        if (!(spec.agents[i].wait_lambda > 0.0) || !(spec.agents[i].amount_lambda > 0.0)) {
            fail(ErrorCode::InvalidArgument, "agent " + std::to_string(i) + " has a non-positive Poisson mean");
        }
    }

    std::vector<std::vector<AgentId>> mates(spec.agents.size());
    for (const auto& pool : spec.pools) {
        for (AgentId a : pool) {
            if (a < 0 || static_cast<std::size_t>(a) >= spec.agents.size()) {
                fail(ErrorCode::InvalidArgument, "pool references unknown agent " + std::to_string(a));
            }
            for (AgentId b : pool) {
                if (b != a) {
                    mates[static_cast<std::size_t>(a)].push_back(b);
                }
            }
        }
    }

    EconomyFiles files;
    const auto counts = apportion_transfers(spec);
    const Seconds start = schedule_start(spec.sim);
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
        const auto& agent = spec.agents[i];
        AgentSchedule schedule;
        schedule.agent = agent.id;
        if (mates[i].empty()) {
            files.warnings.push_back("agent " + std::to_string(agent.id) +
                                     " has no pool-mate; no transfers scheduled");
            files.schedules.push_back(std::move(schedule));
            continue;
        }
        Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(i));
        schedule.txs.reserve(counts[i]);
        Seconds t = start;
        for (std::size_t k = 0; k < counts[i]; ++k) {
            const auto wait = static_cast<Seconds>(rng.poisson(agent.wait_lambda));
            const Seconds request = next_window_opening(agent, t + wait);
            ScheduledTx tx;
            tx.wait_seconds = request - t;
            tx.destination = mates[i][rng.uniform_below(mates[i].size())];
            tx.amount = 1 + rng.poisson(agent.amount_lambda);
            schedule.txs.push_back(tx);
            t = request;
        }
        files.schedules.push_back(std::move(schedule));
    }
    return files;
}

}  // namespace ringtrace
