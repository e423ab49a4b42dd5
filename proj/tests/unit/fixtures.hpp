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
#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "ringtrace/ledger.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::testing {

inline constexpr Seconds kBlockSeconds = 120;

/// `blocks` coinbase-only blocks mined round robin by `agents` agents.
inline Chain coinbase_chain(std::size_t blocks, AgentId agents = 2)
{
    Chain chain;
    for (std::size_t h = 0; h < blocks; ++h) {
        apply_block(chain, {}, static_cast<AgentId>(h % static_cast<std::size_t>(agents)),
                    static_cast<Seconds>(h) * kBlockSeconds, 1000);
    }
    return chain;
}

/// Loose outputs with one output per height, ids 0..n-1; coinbase flag is off.
inline std::vector<Output> plain_outputs(std::size_t n)
{
    std::vector<Output> outs(n);
    for (std::size_t i = 0; i < n; ++i) {
        outs[i].id = i;
        outs[i].created_by = i;
        outs[i].block_height = i;
        outs[i].timestamp = static_cast<Seconds>(i) * kBlockSeconds;
        outs[i].amount = 10;
    }
    return outs;
}

/// Public chain of `n_tx` single-tx blocks. The first few are coinbases; the
/// rest spend 1..3 rings of 1..6 earlier outputs at irregular timestamps.
inline PublicChain random_public_chain(std::uint64_t seed, std::size_t n_tx)
{
    Rng rng(seed);
    PublicChain chain;
    chain.seed = seed;
    OutputId next_output = 0;
    Seconds t = 1'600'000'000;
    for (std::size_t i = 0; i < n_tx; ++i) {
        t += rng.uniform_int(1, 20'000);
        PublicTransaction tx;
        tx.id = i;
        tx.block_height = i;
        tx.timestamp = t;
        tx.kind = i < 4 ? TxKind::coinbase : TxKind::transfer;
        if (tx.kind == TxKind::transfer) {
            tx.fee = 1;
            const auto rings = rng.uniform_int(1, 3);
            for (std::int64_t r = 0; r < rings; ++r) {
                const auto size = std::min<std::uint64_t>(next_output, rng.uniform_int(1, 6));
                std::vector<OutputId> ring;
                while (ring.size() < size) {
                    const OutputId o = rng.uniform_below(next_output);
                    if (std::find(ring.begin(), ring.end(), o) == ring.end()) {
                        ring.push_back(o);
                    }
                }
                std::sort(ring.begin(), ring.end());
                tx.rings.push_back(ring);
            }
        }
        const auto outputs = rng.uniform_int(1, 3);
        for (std::int64_t o = 0; o < outputs; ++o) {
            tx.outputs.push_back(next_output++);
        }
        chain.blocks.push_back({i, t, {i}});
        chain.transactions.push_back(std::move(tx));
    }
    return chain;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("ringtrace_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace ringtrace::testing
