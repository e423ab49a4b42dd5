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

// Brute-force re-derivation of the per-transaction features, shared by the
// unit tests and the acceptance run.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "ringtrace/ledger.hpp"

namespace ringtrace::testing {

// Independent re-derivation of the time fields by calendar arithmetic on
// non-negative timestamps.
inline std::array<double, 7> oracle_zero_hop(const PublicTransaction& tx)
{
    const auto t = tx.timestamp;
    double members = 0;
    for (const auto& r : tx.rings) {
        members += static_cast<double>(r.size());
    }
    const double rings = static_cast<double>(tx.rings.size());
    return {static_cast<double>(t),
            rings,
            tx.rings.empty() ? 0.0 : members / rings,
            static_cast<double>((t / 86400) % 7),
            static_cast<double>((t % 86400) / 3600),
            static_cast<double>((t % 3600) / 60),
            static_cast<double>(t % 60)};
}

inline double oracle_ring_stat(const std::vector<double>& v, std::size_t stat)
{
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    const double mean = sum / static_cast<double>(v.size());
    switch (stat) {
    case 0: return *std::min_element(v.begin(), v.end());
    case 1: return *std::max_element(v.begin(), v.end());
    case 2: return mean;
    case 3: {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        return std::sqrt(ss / static_cast<double>(v.size()));
    }
    default: return sum;
    }
}

inline double oracle_cross_stat(std::vector<double> v, std::size_t stat)
{
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    switch (stat) {
    case 0: return v.front();
    case 1: return v.back();
    case 2: return sum / static_cast<double>(n);
    case 3: return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    default: return sum;
    }
}

// Brute force: locate every member's creator by scanning the whole chain.
inline std::vector<double> oracle_one_hop(const PublicTransaction& tx, const PublicChain& chain)
{
    std::vector<double> out;
    for (std::size_t f = 0; f < 7; ++f) {
        for (std::size_t s = 0; s < 5; ++s) {
            std::vector<double> per_ring;
            for (const auto& ring : tx.rings) {
                std::vector<double> values;
                for (OutputId m : ring) {
                    double v = 0.0;
                    for (const auto& cand : chain.transactions) {
                        if (std::find(cand.outputs.begin(), cand.outputs.end(), m) != cand.outputs.end()) {
                            v = oracle_zero_hop(cand)[f];
                        }
                    }
                    values.push_back(v);
                }
                per_ring.push_back(oracle_ring_stat(values, s));
            }
            for (std::size_t c = 0; c < 5; ++c) {
                out.push_back(oracle_cross_stat(per_ring, c));
            }
        }
    }
    return out;
}

}  // namespace ringtrace::testing
