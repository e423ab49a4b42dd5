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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringtrace/rng.hpp"

namespace ringtrace {

using AgentId = std::int32_t;
using TxId = std::uint64_t;
using OutputId = std::uint64_t;
using Height = std::uint64_t;
using Amount = std::uint64_t;
using Seconds = std::int64_t;

inline constexpr int kChainFormatVersion = 1;

// Fields marked SECRET are ground truth only. They never appear in the
// public projection of the chain.

struct Output {
    OutputId id = 0;
    TxId created_by = 0;
    AgentId owner = 0;          // SECRET
    Amount amount = 0;          // SECRET
    Height block_height = 0;
    Seconds timestamp = 0;
    bool is_coinbase = false;
    std::optional<TxId> spent_by;  // SECRET

    friend bool operator==(const Output&, const Output&) = default;
};

/// One ring-confidential input. Members are ordered oldest first by
/// (creating height, output id), so "the i-th oldest member" is members[i].
struct RingInput {
    std::vector<OutputId> members;
    std::size_t real_index = 0;  // SECRET

    [[nodiscard]] std::size_t ring_size() const noexcept { return members.size(); }
    [[nodiscard]] OutputId real() const { return members.at(real_index); }

    friend bool operator==(const RingInput&, const RingInput&) = default;
};

enum class TxKind { coinbase, transfer };

struct Transaction {
    TxId id = 0;
    TxKind kind = TxKind::transfer;
    Seconds timestamp = 0;  // timestamp of the including block
    Height block_height = 0;
    std::vector<RingInput> inputs;
    std::vector<OutputId> outputs;
    Amount fee = 0;
    std::optional<AgentId> sender;  // SECRET; empty for coinbase
    AgentId receiver = 0;           // SECRET
    Amount intended_amount = 0;     // SECRET
    Seconds request_time = 0;       // SECRET; when the wallet asked to send

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Block {
    Height height = 0;
    Seconds timestamp = 0;
    AgentId miner = 0;  // SECRET
    std::vector<TxId> tx_ids;

    friend bool operator==(const Block&, const Block&) = default;
};

struct DecoyPolicy {
    enum class Kind { uniform, recency_weighted };
    Kind kind = Kind::uniform;
    double recency_shape = 1.0;  // only used by recency_weighted

    friend bool operator==(const DecoyPolicy&, const DecoyPolicy&) = default;
};

std::string to_string(DecoyPolicy::Kind kind);
DecoyPolicy::Kind parse_decoy_kind(const std::string& name);

struct ChainParams {
    Seconds block_interval = 120;
    Height coinbase_maturity = 60;
    Amount block_reward = 1000;
    Amount fee = 1;
    std::size_t ring_size = 11;
    DecoyPolicy decoy;

    friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

/// Ground-truth ledger. Transaction and output ids equal their vector index.
struct Chain {
    std::uint64_t seed = 0;
    ChainParams params;
    std::vector<Block> blocks;
    std::vector<Transaction> transactions;
    std::vector<Output> outputs;

    /// Height of the next block to be appended.
    [[nodiscard]] Height next_height() const noexcept { return blocks.size(); }

    friend bool operator==(const Chain&, const Chain&) = default;
};

// --- public projection -----------------------------------------------------

struct PublicTransaction {
    TxId id = 0;
    TxKind kind = TxKind::transfer;
    Seconds timestamp = 0;
    Height block_height = 0;
    Amount fee = 0;
    std::vector<std::vector<OutputId>> rings;
    std::vector<OutputId> outputs;

    friend bool operator==(const PublicTransaction&, const PublicTransaction&) = default;
};

struct PublicBlock {
    Height height = 0;
    Seconds timestamp = 0;
    std::vector<TxId> tx_ids;

    friend bool operator==(const PublicBlock&, const PublicBlock&) = default;
};

struct PublicChain {
    std::uint64_t seed = 0;
    std::vector<PublicBlock> blocks;
    std::vector<PublicTransaction> transactions;

    friend bool operator==(const PublicChain&, const PublicChain&) = default;
};

PublicChain public_view(const Chain& chain);
/// The projection is idempotent.
inline PublicChain public_view(const PublicChain& chain) { return chain; }

// --- decoy selection -------------------------------------------------------

/// Outputs that may appear in a ring spent at `spend_height`: created at a
/// lower height and, for coinbase outputs, mature. Indexed oldest first.
///
/// `outputs` must be sorted by (block_height, id). Immature coinbase outputs
/// can only sit in the last `coinbase_maturity` heights, so the eligible set is
/// a contiguous head plus a short filtered tail.
class EligiblePool {
public:
    EligiblePool(std::span<const Output> outputs, Height spend_height, Height coinbase_maturity);

    [[nodiscard]] std::size_t size() const noexcept { return head_.size() + tail_.size(); }
    [[nodiscard]] const Output& at(std::size_t i) const { return i < head_.size() ? head_[i] : *tail_[i - head_.size()]; }
    [[nodiscard]] bool is_eligible(const Output& out) const noexcept;
    [[nodiscard]] bool contains(const Output& out) const noexcept;
    [[nodiscard]] Height spend_height() const noexcept { return spend_height_; }

private:
    std::span<const Output> head_;
    std::vector<const Output*> tail_;
    Height spend_height_;
    Height maturity_;
};

RingInput select_decoys(const EligiblePool& pool, const Output& real, std::size_t ring_size,
                        const DecoyPolicy& policy, Rng& rng);

// --- transaction building ---------------------------------------------------

struct OutputDraft {
    AgentId owner = 0;
    Amount amount = 0;

    friend bool operator==(const OutputDraft&, const OutputDraft&) = default;
};

/// A transfer built by a wallet but not yet included in a block; output ids
/// are assigned by apply_block.
struct TxDraft {
    AgentId sender = 0;
    AgentId receiver = 0;
    Amount intended_amount = 0;
    Amount fee = 0;
    Seconds request_time = 0;
    std::vector<RingInput> inputs;
    std::vector<OutputDraft> outputs;  // payment first, then change if any
};

struct TransferRequest {
    AgentId sender = 0;
    AgentId dest = 0;
    Amount amount = 0;
    Amount fee = 1;
    Height height = 0;  // height of the block the transfer is built for
    Seconds time = 0;
    std::size_t ring_size = 11;
    DecoyPolicy policy;
};

/// Oldest-first coin selection over `wallet` (unspent outputs of the sender,
/// ordered oldest first), one ring per selected real input.
TxDraft build_transaction(std::span<const Output> wallet, const TransferRequest& request,
                          const EligiblePool& pool, Rng& rng);

// --- chain state machine ----------------------------------------------------

/// Appends a block at chain.next_height() whose first transaction is a
/// coinbase paying `block_reward` to `miner`, followed by `pending` in order.
/// Throws DoubleSpend or InvalidRing without modifying the chain.
const Block& apply_block(Chain& chain, std::span<const TxDraft> pending, AgentId miner, Seconds time,
                         Amount block_reward);

// --- validation -------------------------------------------------------------

enum class ViolationKind {
    BlockHeight,
    BlockTimestamp,
    Coinbase,
    TxReference,
    OutputReference,
    RingShape,
    RingOrdering,
    RingReference,
    RealIndex,
    DoubleSpend,
    SpentBy,
    Conservation,
    Amount,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::optional<TxId> tx;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] std::size_t count(ViolationKind kind) const;
};

ValidationReport validate_chain(const Chain& chain);

}  // namespace ringtrace
