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

#include "ringtrace/csv.hpp"
#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace {

GroundTruth ground_truth(const Chain& chain, const EconomySpec& spec)
{
    GroundTruth truth;
    truth.agents = spec.agents;
    for (const auto& tx : chain.transactions) {
        if (tx.kind != TxKind::transfer) {
            continue;
        }
        TransferLabel label;
        label.tx = tx.id;
        label.sender = tx.sender.value_or(-1);
        label.receiver = tx.receiver;
        if (tx.receiver >= 0 && static_cast<std::size_t>(tx.receiver) < spec.agents.size()) {
            label.receiver_pool = spec.agents[static_cast<std::size_t>(tx.receiver)].pool_id;
        }
        label.value = tx.intended_amount;
        label.request_time = tx.request_time;
        for (const auto& ring : tx.inputs) {
            label.real_indices.push_back(ring.real_index);
        }
        truth.transfers.push_back(std::move(label));
    }
    return truth;
}

void export_ground_truth(const GroundTruth& truth, const std::filesystem::path& dir)
{
    {
        csv::Writer labels(dir / "labels.csv");
        labels.header({"tx_id", "sender", "receiver", "receiver_pool", "value"});
        for (const auto& t : truth.transfers) {
            labels.row(t.tx, t.sender, t.receiver, t.receiver_pool, t.value);
        }
    }
    csv::Writer reals(dir / "real_inputs.csv");
    reals.header({"tx_id", "ring_index_within_tx", "real_index"});
    for (const auto& t : truth.transfers) {
        for (std::size_t r = 0; r < t.real_indices.size(); ++r) {
            reals.row(t.tx, r, t.real_indices[r]);
        }
    }
}

RealInputMap real_input_map(const GroundTruth& truth)
{
    RealInputMap map;
    for (const auto& t : truth.transfers) {
        map[t.tx] = t.real_indices;
    }
    return map;
}

RealInputMap read_real_inputs(const std::filesystem::path& path)
{
    const auto table = csv::read(path);
    const auto tx_col = table.require_column("tx_id");
    const auto ring_col = table.require_column("ring_index_within_tx");
    const auto real_col = table.require_column("real_index");
    RealInputMap map;
    for (const auto& row : table.rows) {
        const auto tx = static_cast<TxId>(csv::parse_int(row[tx_col]));
        const auto ring = static_cast<std::size_t>(csv::parse_int(row[ring_col]));
        auto& slots = map[tx];
        if (slots.size() <= ring) {
            slots.resize(ring + 1, 0);
        }
        slots[ring] = static_cast<std::size_t>(csv::parse_int(row[real_col]));
    }
    return map;
}

}  // namespace ringtrace
