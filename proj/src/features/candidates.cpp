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
#include <optional>
#include <unordered_map>

#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/parallel.hpp"

namespace ringtrace {

namespace {

void fill_candidate(std::span<double> out, const PublicTransaction& spender, const PublicTransaction* source,
                    std::size_t age_rank, const OneHopVector* source_hop)
{
    std::fill(out.begin(), out.end(), 0.0);
    if (source != nullptr) {
        const auto z = zero_hop(*source);
        std::copy(z.begin(), z.end(), out.begin());
        out[kZeroHopWidth] = static_cast<double>(spender.timestamp - source->timestamp);
    }
    out[kZeroHopWidth + 1] = static_cast<double>(age_rank);
    if (source_hop != nullptr) {
        std::copy(source_hop->begin(), source_hop->end(), out.begin() + kZeroHopWidth + 2);
    }
}

}  // namespace

std::vector<std::vector<double>> candidate_features(const PublicTransaction& tx, std::size_t ring_index,
                                                    const ChainIndex& index)
{
    if (ring_index >= tx.rings.size()) {
        fail(ErrorCode::InvalidArgument, "tx " + std::to_string(tx.id) + " has no ring " + std::to_string(ring_index));
    }
    const auto& ring = tx.rings[ring_index];
    std::vector<std::vector<double>> out;
    out.reserve(ring.size());
    for (std::size_t k = 0; k < ring.size(); ++k) {
        const PublicTransaction* source = index.creator(ring[k]);
        std::optional<OneHopVector> hop;
        if (source != nullptr && !source->rings.empty()) {
            hop = one_hop(*source, index);
        }
        std::vector<double> v(kCandidateWidth);
        fill_candidate(v, tx, source, k, hop ? &*hop : nullptr);
        out.push_back(std::move(v));
    }
    return out;
}

CandidateTable candidate_table(const PublicChain& chain, std::size_t jobs)
{
    const ChainIndex index(chain);

    // One-hop vectors of every transaction with rings, computed once.
    std::vector<std::optional<OneHopVector>> hops(chain.transactions.size());
    parallel_for(chain.transactions.size(), jobs, [&](std::size_t i) {
        if (!chain.transactions[i].rings.empty()) {
            hops[i] = one_hop(chain.transactions[i], index);
        }
    });
    std::unordered_map<TxId, std::size_t> position;
    for (std::size_t i = 0; i < chain.transactions.size(); ++i) {
        position.emplace(chain.transactions[i].id, i);
    }

    CandidateTable table;
    std::size_t rows = 0;
    for (const auto& tx : chain.transactions) {
        for (const auto& ring : tx.rings) {
            rows += ring.size();
        }
    }
    table.features = Matrix(rows, kCandidateWidth);
    table.tx_ids.reserve(rows);
    table.ring_index.reserve(rows);
    table.candidate_index.reserve(rows);
    std::size_t r = 0;
    for (const auto& tx : chain.transactions) {
        for (std::size_t ring = 0; ring < tx.rings.size(); ++ring) {
            for (std::size_t k = 0; k < tx.rings[ring].size(); ++k) {
                const PublicTransaction* source = index.creator(tx.rings[ring][k]);
                const OneHopVector* hop = nullptr;
                if (source != nullptr) {
                    const auto& cached = hops[position.at(source->id)];
                    hop = cached ? &*cached : nullptr;
                }
                fill_candidate(table.features.row(r), tx, source, k, hop);
                table.tx_ids.push_back(tx.id);
                table.ring_index.push_back(ring);
                table.candidate_index.push_back(k);
                ++r;
            }
        }
    }
    return table;
}

}  // namespace ringtrace
