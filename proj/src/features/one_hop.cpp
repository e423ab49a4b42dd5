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

#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"

namespace ringtrace {

ChainIndex::ChainIndex(const PublicChain& chain) : chain_(&chain)
{
    for (std::size_t i = 0; i < chain.transactions.size(); ++i) {
        for (OutputId o : chain.transactions[i].outputs) {
            creator_.emplace(o, i);
        }
    }
}

const PublicTransaction* ChainIndex::creator(OutputId output) const
{
    const auto it = creator_.find(output);
    return it == creator_.end() ? nullptr : &chain_->transactions[it->second];
}

namespace {

using RingStats = std::array<std::array<double, kRingStatCount>, kZeroHopWidth>;

RingStats reduce_ring(const std::vector<ZeroHopVector>& members)
{
    RingStats stats{};
    const auto n = static_cast<double>(members.size());
    for (std::size_t f = 0; f < kZeroHopWidth; ++f) {
        double lo = members[0][f];
        double hi = members[0][f];
        double sum = 0.0;
        for (const auto& m : members) {
            lo = std::min(lo, m[f]);
            hi = std::max(hi, m[f]);
            sum += m[f];
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& m : members) {
            ss += (m[f] - mean) * (m[f] - mean);
        }
        stats[f] = {lo, hi, mean, std::sqrt(ss / n), sum};
    }
    return stats;
}

std::array<double, kCrossStatCount> reduce_across(std::vector<double> values)
{
    const auto n = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    std::sort(values.begin(), values.end());
    const double median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    return {values.front(), values.back(), sum / static_cast<double>(n), median, sum};
}

}  // namespace

OneHopResult one_hop_with_coverage(const PublicTransaction& tx, const ChainIndex& index)
{
    if (tx.rings.empty()) {
        fail(ErrorCode::NoRings, "tx " + std::to_string(tx.id) + " has no rings");
    }
    OneHopResult result;
    std::vector<RingStats> per_ring;
    per_ring.reserve(tx.rings.size());
    std::vector<ZeroHopVector> members;
    for (const auto& ring : tx.rings) {
        if (ring.empty()) {
            fail(ErrorCode::NoRings, "tx " + std::to_string(tx.id) + " has an empty ring");
        }
        members.clear();
        for (OutputId o : ring) {
            ++result.members;
            if (const auto* source = index.creator(o)) {
                members.push_back(zero_hop(*source));
                ++result.resolved;
            } else {
                members.push_back(ZeroHopVector{});
            }
        }
        per_ring.push_back(reduce_ring(members));
    }

    std::vector<double> column(per_ring.size());
    for (std::size_t f = 0; f < kZeroHopWidth; ++f) {
        for (std::size_t s = 0; s < kRingStatCount; ++s) {
            for (std::size_t r = 0; r < per_ring.size(); ++r) {
                column[r] = per_ring[r][f][s];
            }
            const auto across = reduce_across(column);
            for (std::size_t c = 0; c < kCrossStatCount; ++c) {
                result.values[(f * kRingStatCount + s) * kCrossStatCount + c] = across[c];
            }
        }
    }
    return result;
}

OneHopVector one_hop(const PublicTransaction& tx, const ChainIndex& index)
{
    return one_hop_with_coverage(tx, index).values;
}

}  // namespace ringtrace
