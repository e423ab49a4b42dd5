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
#include <unordered_map>
#include <unordered_set>

#include "ringtrace/ledger.hpp"

namespace ringtrace {

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::BlockHeight: return "block_height";
    case ViolationKind::BlockTimestamp: return "block_timestamp";
    case ViolationKind::Coinbase: return "coinbase";
    case ViolationKind::TxReference: return "tx_reference";
    case ViolationKind::OutputReference: return "output_reference";
    case ViolationKind::RingShape: return "ring_shape";
    case ViolationKind::RingOrdering: return "ring_ordering";
    case ViolationKind::RingReference: return "ring_reference";
    case ViolationKind::RealIndex: return "real_index";
    case ViolationKind::DoubleSpend: return "double_spend";
    case ViolationKind::SpentBy: return "spent_by";
    case ViolationKind::Conservation: return "conservation";
    case ViolationKind::Amount: return "amount";
    }
    return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

namespace {

class Checker {
public:
    explicit Checker(const Chain& chain) : chain_(chain) {}

    ValidationReport run()
    {
        check_blocks();
        check_outputs();
        check_transactions();
        check_spent_markers();
        return std::move(report_);
    }

private:
    void add(ViolationKind kind, std::optional<TxId> tx, std::string detail)
    {
        report_.violations.push_back({kind, tx, std::move(detail)});
    }

    [[nodiscard]] bool has_output(OutputId id) const { return id < chain_.outputs.size(); }

    void check_blocks()
    {
        std::vector<int> seen(chain_.transactions.size(), 0);
        for (std::size_t h = 0; h < chain_.blocks.size(); ++h) {
            const auto& block = chain_.blocks[h];
            if (block.height != h) {
                add(ViolationKind::BlockHeight, std::nullopt,
                    "block at position " + std::to_string(h) + " has height " + std::to_string(block.height));
            }
            if (h > 0 && block.timestamp < chain_.blocks[h - 1].timestamp) {
                add(ViolationKind::BlockTimestamp, std::nullopt, "block " + std::to_string(h) + " goes back in time");
            }
            std::size_t coinbases = 0;
            for (std::size_t i = 0; i < block.tx_ids.size(); ++i) {
                const TxId id = block.tx_ids[i];
                if (id >= chain_.transactions.size()) {
                    add(ViolationKind::TxReference, id, "block " + std::to_string(h) + " lists unknown tx");
                    continue;
                }
                ++seen[id];
                const auto& tx = chain_.transactions[id];
                if (tx.block_height != h) {
                    add(ViolationKind::TxReference, id, "tx height disagrees with its block");
                }
                if (tx.kind == TxKind::coinbase) {
                    ++coinbases;
                    if (i != 0) {
                        add(ViolationKind::Coinbase, id, "coinbase is not the first tx of its block");
                    }
                }
            }
            if (coinbases != 1) {
                add(ViolationKind::Coinbase, std::nullopt,
                    "block " + std::to_string(h) + " has " + std::to_string(coinbases) + " coinbase txs");
            }
        }
        for (std::size_t id = 0; id < seen.size(); ++id) {
            if (seen[id] != 1) {
                add(ViolationKind::TxReference, id, "tx appears in " + std::to_string(seen[id]) + " blocks");
            }
        }
    }

    void check_outputs()
    {
        for (std::size_t i = 0; i < chain_.outputs.size(); ++i) {
            const auto& out = chain_.outputs[i];
            if (out.id != i) {
                add(ViolationKind::OutputReference, std::nullopt, "output id " + std::to_string(out.id) +
                                                                      " stored at " + std::to_string(i));
            }
            if (out.amount == 0) {
                add(ViolationKind::Amount, out.created_by, "output " + std::to_string(i) + " has zero amount");
            }
            if (out.created_by >= chain_.transactions.size()) {
                add(ViolationKind::OutputReference, std::nullopt,
                    "output " + std::to_string(i) + " created by unknown tx");
                continue;
            }
            const auto& creator = chain_.transactions[out.created_by];
            if (std::find(creator.outputs.begin(), creator.outputs.end(), out.id) == creator.outputs.end()) {
                add(ViolationKind::OutputReference, creator.id, "creator does not list output " + std::to_string(i));
            }
            if (creator.block_height != out.block_height) {
                add(ViolationKind::OutputReference, creator.id,
                    "output " + std::to_string(i) + " height disagrees with creator");
            }
        }
    }

    void check_transactions()
    {
        for (std::size_t id = 0; id < chain_.transactions.size(); ++id) {
            const auto& tx = chain_.transactions[id];
            if (tx.id != id) {
                add(ViolationKind::TxReference, tx.id, "tx stored at position " + std::to_string(id));
            }
            for (OutputId o : tx.outputs) {
                if (!has_output(o) || chain_.outputs[o].created_by != tx.id) {
                    add(ViolationKind::OutputReference, tx.id, "lists output " + std::to_string(o) + " it did not create");
                }
            }
            if (tx.kind == TxKind::coinbase) {
                check_coinbase(tx);
            } else {
                check_transfer(tx);
            }
        }
    }

    Amount output_sum(const Transaction& tx) const
    {
        Amount sum = 0;
        for (OutputId o : tx.outputs) {
            if (has_output(o)) {
                sum += chain_.outputs[o].amount;
            }
        }
        return sum;
    }

    void check_coinbase(const Transaction& tx)
    {
        if (!tx.inputs.empty()) {
            add(ViolationKind::Coinbase, tx.id, "coinbase has inputs");
        }
        if (output_sum(tx) != tx.intended_amount) {
            add(ViolationKind::Conservation, tx.id, "coinbase outputs do not sum to the block reward");
        }
    }

    void check_transfer(const Transaction& tx)
    {
        if (tx.inputs.empty()) {
            add(ViolationKind::RingShape, tx.id, "transfer has no inputs");
            return;
        }
        bool rings_ok = true;
        Amount real_sum = 0;
        for (std::size_t r = 0; r < tx.inputs.size(); ++r) {
            const auto& ring = tx.inputs[r];
            const std::string where = "ring " + std::to_string(r);
            if (ring.members.empty()) {
                add(ViolationKind::RingShape, tx.id, where + " is empty");
                rings_ok = false;
                continue;
            }
            std::unordered_set<OutputId> distinct(ring.members.begin(), ring.members.end());
            if (distinct.size() != ring.members.size()) {
                add(ViolationKind::RingShape, tx.id, where + " repeats a member");
            }
            bool members_ok = true;
            for (OutputId m : ring.members) {
                if (!has_output(m)) {
                    add(ViolationKind::RingReference, tx.id, where + " references unknown output " + std::to_string(m));
                    members_ok = false;
                    continue;
                }
                const auto& out = chain_.outputs[m];
                if (out.block_height >= tx.block_height) {
                    add(ViolationKind::RingReference, tx.id, where + " references output " + std::to_string(m) +
                                                                 " from the same or a later block");
                } else if (out.is_coinbase &&
                           out.block_height + chain_.params.coinbase_maturity > tx.block_height) {
                    add(ViolationKind::RingReference, tx.id, where + " references immature coinbase " +
                                                                 std::to_string(m));
                }
            }
            if (members_ok) {
                for (std::size_t i = 1; i < ring.members.size(); ++i) {
                    const auto& a = chain_.outputs[ring.members[i - 1]];
                    const auto& b = chain_.outputs[ring.members[i]];
                    const bool ascending = a.block_height != b.block_height ? a.block_height < b.block_height : a.id < b.id;
                    if (!ascending) {
                        add(ViolationKind::RingOrdering, tx.id, where + " is not ordered oldest first");
                        break;
                    }
                }
            }
            if (ring.real_index >= ring.members.size()) {
                add(ViolationKind::RealIndex, tx.id, where + " real_index " + std::to_string(ring.real_index) +
                                                         " out of range");
                rings_ok = false;
                continue;
            }
            const OutputId real = ring.real();
            if (!has_output(real)) {
                rings_ok = false;
                continue;
            }
            auto [it, inserted] = spender_.emplace(real, tx.id);
            if (!inserted) {
                add(ViolationKind::DoubleSpend, tx.id, "output " + std::to_string(real) + " already spent by tx " +
                                                           std::to_string(it->second));
            }
            real_sum += chain_.outputs[real].amount;
        }
        if (!rings_ok) {
            unresolved_.insert(tx.id);
            return;
        }
        if (real_sum != output_sum(tx) + tx.fee) {
            add(ViolationKind::Conservation, tx.id,
                "inputs " + std::to_string(real_sum) + " != outputs " + std::to_string(output_sum(tx)) + " + fee " +
                    std::to_string(tx.fee));
        }
    }

    void check_spent_markers()
    {
        for (const auto& out : chain_.outputs) {
            const auto it = spender_.find(out.id);
            if (out.spent_by) {
                if (unresolved_.contains(*out.spent_by)) {
                    continue;  // already reported on the spending tx
                }
                if (it == spender_.end() || it->second != *out.spent_by) {
                    add(ViolationKind::SpentBy, out.spent_by, "output " + std::to_string(out.id) +
                                                                  " marked spent by a tx that does not spend it");
                }
            } else if (it != spender_.end()) {
                add(ViolationKind::SpentBy, it->second, "output " + std::to_string(out.id) + " spent but not marked");
            }
        }
    }

    const Chain& chain_;
    ValidationReport report_;
    std::unordered_map<OutputId, TxId> spender_;
    std::unordered_set<TxId> unresolved_;
};

}  // namespace

ValidationReport validate_chain(const Chain& chain)
{
    return Checker(chain).run();
}

}  // namespace ringtrace
