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

#include <unordered_set>

#include "ringtrace/error.hpp"
#include "ringtrace/ledger.hpp"

namespace ringtrace {

namespace {

void check_drafts(const Chain& chain, std::span<const TxDraft> pending, Height height)
{
    std::unordered_set<OutputId> spent_here;
    for (const auto& draft : pending) {
        if (draft.inputs.empty()) {
            fail(ErrorCode::InvalidRing, "transfer without inputs");
        }
        for (const auto& ring : draft.inputs) {
            if (ring.members.empty() || ring.real_index >= ring.members.size()) {
                fail(ErrorCode::InvalidRing, "ring has no valid real member");
            }
            for (OutputId member : ring.members) {
                if (member >= chain.outputs.size()) {
                    fail(ErrorCode::InvalidRing, "ring member " + std::to_string(member) + " does not exist");
                }
                if (chain.outputs[member].block_height >= height) {
                    fail(ErrorCode::InvalidRing, "ring member " + std::to_string(member) + " is not yet confirmed");
                }
            }
            const OutputId real = ring.real();
            if (chain.outputs[real].spent_by || !spent_here.insert(real).second) {
                fail(ErrorCode::DoubleSpend, "output " + std::to_string(real) + " already spent");
            }
        }
        for (const auto& out : draft.outputs) {
            if (out.amount == 0) {
                fail(ErrorCode::InvalidArgument, "zero-value output");
            }
        }
    }
}

OutputId add_output(Chain& chain, TxId tx, AgentId owner, Amount amount, Height height, Seconds time, bool coinbase)
{
    Output out;
    out.id = chain.outputs.size();
    out.created_by = tx;
    out.owner = owner;
    out.amount = amount;
    out.block_height = height;
    out.timestamp = time;
    out.is_coinbase = coinbase;
    chain.outputs.push_back(out);
    return out.id;
}

}  // namespace

const Block& apply_block(Chain& chain, std::span<const TxDraft> pending, AgentId miner, Seconds time,
                         Amount block_reward)
{
    const Height height = chain.next_height();
    if (block_reward == 0) {
        fail(ErrorCode::InvalidArgument, "block reward must be positive");
    }
    if (!chain.blocks.empty() && time < chain.blocks.back().timestamp) {
        fail(ErrorCode::InvalidArgument, "block timestamp goes backwards");
    }
    check_drafts(chain, pending, height);

    Block block;
    block.height = height;
    block.timestamp = time;
    block.miner = miner;

    Transaction coinbase;
    coinbase.id = chain.transactions.size();
    coinbase.kind = TxKind::coinbase;
    coinbase.timestamp = time;
    coinbase.block_height = height;
    coinbase.receiver = miner;
    coinbase.intended_amount = block_reward;
    coinbase.request_time = time;
    coinbase.outputs.push_back(add_output(chain, coinbase.id, miner, block_reward, height, time, true));
    block.tx_ids.push_back(coinbase.id);
    chain.transactions.push_back(std::move(coinbase));

    for (const auto& draft : pending) {
        Transaction tx;
        tx.id = chain.transactions.size();
        tx.kind = TxKind::transfer;
        tx.timestamp = time;
        tx.block_height = height;
        tx.inputs = draft.inputs;
        tx.fee = draft.fee;
        tx.sender = draft.sender;
        tx.receiver = draft.receiver;
        tx.intended_amount = draft.intended_amount;
        tx.request_time = draft.request_time;
        for (const auto& out : draft.outputs) {
            tx.outputs.push_back(add_output(chain, tx.id, out.owner, out.amount, height, time, false));
        }
        for (const auto& ring : tx.inputs) {
            chain.outputs[ring.real()].spent_by = tx.id;
        }
        block.tx_ids.push_back(tx.id);
        chain.transactions.push_back(std::move(tx));
    }

    chain.blocks.push_back(std::move(block));
    return chain.blocks.back();
}

PublicChain public_view(const Chain& chain)
{
    PublicChain view;
    view.seed = chain.seed;
    view.blocks.reserve(chain.blocks.size());
    for (const auto& b : chain.blocks) {
        view.blocks.push_back({b.height, b.timestamp, b.tx_ids});
    }
    view.transactions.reserve(chain.transactions.size());
    for (const auto& tx : chain.transactions) {
        PublicTransaction pub;
        pub.id = tx.id;
        pub.kind = tx.kind;
        pub.timestamp = tx.timestamp;
        pub.block_height = tx.block_height;
        pub.fee = tx.fee;
        pub.outputs = tx.outputs;
        pub.rings.reserve(tx.inputs.size());
        for (const auto& ring : tx.inputs) {
            pub.rings.push_back(ring.members);
        }
        view.transactions.push_back(std::move(pub));
    }
    return view;
}

}  // namespace ringtrace
