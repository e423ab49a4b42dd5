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

namespace {

// Streaming co-moments (Welford) so large epoch values do not cancel.
struct CoMoments {
    std::size_t n = 0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double m2_x = 0.0;
    double m2_y = 0.0;
    double c_xy = 0.0;

    void add(double x, double y)
    {
        ++n;
        const double dx = x - mean_x;
        mean_x += dx / static_cast<double>(n);
        const double dy = y - mean_y;
        mean_y += dy / static_cast<double>(n);
        m2_x += dx * (x - mean_x);
        m2_y += dy * (y - mean_y);
        c_xy += dx * (y - mean_y);
    }

    [[nodiscard]] std::optional<double> pearson() const
    {
        if (n < 2 || m2_x <= 0.0 || m2_y <= 0.0) {
            return std::nullopt;
        }
        return std::clamp(c_xy / std::sqrt(m2_x * m2_y), -1.0, 1.0);
    }
};

std::size_t hour_bin(Seconds t, std::size_t bins)
{
    const Seconds hour = (((t % 86400) + 86400) % 86400) / 3600;
    return static_cast<std::size_t>(hour) * bins / 24;
}

}  // namespace

CorrelationBinning parse_binning(const std::string& name)
{
    if (name == "by_hour_of_day" || name == "hour") {
        return CorrelationBinning::by_hour_of_day;
    }
    if (name == "by_rank" || name == "rank") {
        return CorrelationBinning::by_rank;
    }
    fail(ErrorCode::InvalidArgument, "unknown correlation binning '" + name + "'");
}

std::string to_string(CorrelationBinning binning)
{
    return binning == CorrelationBinning::by_rank ? "by_rank" : "by_hour_of_day";
}

RingCorrelationMatrix ring_pair_correlation(const PublicChain& chain, CorrelationBinning binning, std::size_t bins)
{
    if (bins == 0) {
        fail(ErrorCode::InvalidArgument, "bins must be positive");
    }
    const ChainIndex index(chain);
    std::vector<CoMoments> cells(bins * bins);
    std::size_t two_ring = 0;
    std::vector<Seconds> first;
    std::vector<Seconds> second;
    auto timestamps = [&](const std::vector<OutputId>& ring, std::vector<Seconds>& out) {
        out.clear();
        for (OutputId o : ring) {
            const auto* source = index.creator(o);
            out.push_back(source != nullptr ? source->timestamp : -1);
        }
    };
    for (const auto& tx : chain.transactions) {
        if (tx.rings.size() != 2) {
            continue;
        }
        ++two_ring;
        timestamps(tx.rings[0], first);
        timestamps(tx.rings[1], second);
        for (std::size_t i = 0; i < first.size(); ++i) {
            for (std::size_t j = 0; j < second.size(); ++j) {
                if (first[i] < 0 || second[j] < 0) {
                    continue;  // unresolved member
                }
                std::size_t bi = 0;
                std::size_t bj = 0;
                if (binning == CorrelationBinning::by_rank) {
                    bi = i * bins / first.size();
                    bj = j * bins / second.size();
                } else {
                    bi = hour_bin(first[i], bins);
                    bj = hour_bin(second[j], bins);
                }
                cells[bi * bins + bj].add(static_cast<double>(first[i]), static_cast<double>(second[j]));
            }
        }
    }
    if (two_ring == 0) {
        fail(ErrorCode::NoTwoRingTxs, "chain has no transaction with exactly two rings");
    }
    RingCorrelationMatrix out;
    out.binning = binning;
    out.bins = bins;
    out.values.reserve(cells.size());
    out.support.reserve(cells.size());
    for (const auto& cell : cells) {
        out.values.push_back(cell.pearson());
        out.support.push_back(cell.n);
    }
    return out;
}

}  // namespace ringtrace
