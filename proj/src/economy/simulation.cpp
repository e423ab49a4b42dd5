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

#include <queue>
#include <set>

#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace {

namespace {

struct Due {
    Seconds time;
    AgentId agent;

    bool operator>(const Due& other) const noexcept
    {
        return time != other.time ? time > other.time : agent > other.agent;
    }
};

class Simulator {
public:
    Simulator(const EconomyFiles& files, const EconomySpec& spec, const SimParams& params, std::uint64_t seed)
        : files_(files), spec_(spec), params_(params), rng_(Rng::stream(seed, 0xdec0))
    {
        chain_.seed = seed;
        chain_.params.block_interval = params.block_interval;
        chain_.params.coinbase_maturity = params.coinbase_maturity;
        chain_.params.block_reward = params.block_reward;
        chain_.params.fee = params.fee;
        chain_.params.ring_size = spec.ring_size;
        chain_.params.decoy = params.decoy;

        if (spec.agents.empty()) {
            fail(ErrorCode::InvalidArgument, "economy has no agents");
        }
        if (params.block_interval <= 0) {
            fail(ErrorCode::InvalidArgument, "block interval must be positive");
        }
        wallets_.resize(spec.agents.size());
        next_.assign(spec.agents.size(), 0);
        request_time_.resize(spec.agents.size());
        schedule_of_.assign(spec.agents.size(), nullptr);
        for (const auto& schedule : files.schedules) {
            if (schedule.agent < 0 || static_cast<std::size_t>(schedule.agent) >= spec.agents.size()) {
                fail(ErrorCode::InvalidArgument, "schedule for unknown agent " + std::to_string(schedule.agent));
            }
            const auto a = static_cast<std::size_t>(schedule.agent);
            schedule_of_[a] = &schedule;
            Seconds t = schedule_start(params);
            for (const auto& tx : schedule.txs) {
                t += tx.wait_seconds;
                request_time_[a].push_back(t);
            }
            remaining_ += schedule.txs.size();
            if (!schedule.txs.empty()) {
                queue_.push({request_time_[a][0], schedule.agent});
            }
        }
        scheduled_ = remaining_;
    }

    SimulationResult run()
    {
        Height last_transfer_height = params_.warmup_blocks;
        Height last_progress = 0;
        while (true) {
            const Height height = chain_.next_height();
            const Seconds now = static_cast<Seconds>(height) * params_.block_interval;
            auto drafts = collect(height, now);
            if (!drafts.empty()) {
                last_progress = height;
                last_transfer_height = height;
            }
            const auto miner = static_cast<AgentId>(height % spec_.agents.size());
            const auto& block = apply_block(chain_, drafts, miner, now, params_.block_reward);
            credit(block);

            if (remaining_ == 0) {
                if (chain_.next_height() > last_transfer_height + params_.coinbase_maturity &&
                    chain_.next_height() >= params_.warmup_blocks) {
                    break;
                }
                continue;
            }
            if (height > params_.warmup_blocks && height - std::max(last_progress, params_.warmup_blocks) > params_.stall_blocks) {
                stall_ = StallReport{height, remaining_,
                                     "no transfer could be built for " + std::to_string(params_.stall_blocks) +
                                         " blocks"};
                break;
            }
        }
        SimulationResult result;
        result.truth = ground_truth(chain_, spec_);
        result.chain = std::move(chain_);
        result.scheduled = scheduled_;
        result.realized = scheduled_ - remaining_;
        result.stall = stall_;
        return result;
    }

private:
    std::vector<TxDraft> collect(Height height, Seconds now)
    {
        std::vector<TxDraft> drafts;
        if (queue_.empty() || queue_.top().time + params_.processing_delay > now) {
            return drafts;
        }
        const EligiblePool pool(chain_.outputs, height, params_.coinbase_maturity);
        std::vector<Due> deferred;
        std::vector<Output> wallet;
        while (!queue_.empty() && queue_.top().time + params_.processing_delay <= now) {
            const Due due = queue_.top();
            queue_.pop();
            const auto a = static_cast<std::size_t>(due.agent);
            const ScheduledTx& scheduled = schedule_of_[a]->txs[next_[a]];

            TransferRequest request;
            request.sender = due.agent;
            request.dest = scheduled.destination;
            request.amount = scheduled.amount;
            request.fee = params_.fee;
            request.height = height;
            request.time = due.time;
            request.ring_size = spec_.ring_size;
            request.policy = params_.decoy;

            if (!gather(a, pool, scheduled.amount + params_.fee, wallet)) {
                deferred.push_back(due);
                continue;
            }
            TxDraft draft = build_transaction(wallet, request, pool, rng_);
            for (const auto& ring : draft.inputs) {
                wallets_[a].erase(ring.real());
            }
            drafts.push_back(std::move(draft));
            --remaining_;
            if (++next_[a] < request_time_[a].size()) {
                queue_.push({request_time_[a][next_[a]], due.agent});
            }
        }
        for (const auto& due : deferred) {
            queue_.push(due);
        }
        return drafts;
    }

    // Oldest eligible outputs of agent `a` covering `needed`, or false.
    bool gather(std::size_t a, const EligiblePool& pool, Amount needed, std::vector<Output>& wallet) const
    {
        wallet.clear();
        Amount sum = 0;
        for (OutputId id : wallets_[a]) {
            const Output& out = chain_.outputs[id];
            if (!pool.is_eligible(out)) {
                continue;
            }
            wallet.push_back(out);
            sum += out.amount;
            if (sum >= needed) {
                return true;
            }
        }
        return false;
    }

    void credit(const Block& block)
    {
        for (TxId id : block.tx_ids) {
            for (OutputId o : chain_.transactions[id].outputs) {
                const auto owner = chain_.outputs[o].owner;
                if (owner >= 0 && static_cast<std::size_t>(owner) < wallets_.size()) {
                    wallets_[static_cast<std::size_t>(owner)].insert(o);
                }
            }
        }
    }

    const EconomyFiles& files_;
    const EconomySpec& spec_;
    const SimParams& params_;
    Rng rng_;
    Chain chain_;
    std::vector<std::set<OutputId>> wallets_;
    std::vector<std::size_t> next_;
    std::vector<std::vector<Seconds>> request_time_;
    std::vector<const AgentSchedule*> schedule_of_;
    std::priority_queue<Due, std::vector<Due>, std::greater<>> queue_;
    std::size_t remaining_ = 0;
    std::size_t scheduled_ = 0;
    std::optional<StallReport> stall_;
};

}  // namespace

SimulationResult run_simulation(const EconomyFiles& files, const EconomySpec& spec, const SimParams& params,
                                std::uint64_t seed)
{
    return Simulator(files, spec, params, seed).run();
}

}  // namespace ringtrace
