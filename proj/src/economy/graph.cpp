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

#include <unordered_map>

#include "ringtrace/csv.hpp"
#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace {

std::vector<Edge> graph_edges(const PublicChain& chain, EdgeMode mode, const RealInputMap* secrets)
{
    if (mode == EdgeMode::true_only && secrets == nullptr) {
        fail(ErrorCode::ModeRequiresSecrets, "true edges need the real input labels");
    }
    std::unordered_map<OutputId, TxId> creator;
    for (const auto& tx : chain.transactions) {
        for (OutputId o : tx.outputs) {
            creator.emplace(o, tx.id);
        }
    }
    auto source_of = [&](OutputId o) {
        const auto it = creator.find(o);
        if (it == creator.end()) {
            fail(ErrorCode::InvalidRing, "ring member " + std::to_string(o) + " has no creating tx");
        }
        return it->second;
    };

    std::vector<Edge> edges;
    for (const auto& tx : chain.transactions) {
        if (mode == EdgeMode::all) {
            for (const auto& ring : tx.rings) {
                for (OutputId m : ring) {
                    edges.push_back({tx.id, source_of(m)});
                }
            }
            continue;
        }
        if (tx.rings.empty()) {
            continue;
        }
        const auto it = secrets->find(tx.id);
        if (it == secrets->end() || it->second.size() != tx.rings.size()) {
            fail(ErrorCode::InvalidArgument, "no real input labels for tx " + std::to_string(tx.id));
        }
        for (std::size_t r = 0; r < tx.rings.size(); ++r) {
            const auto real = it->second[r];
            if (real >= tx.rings[r].size()) {
                fail(ErrorCode::InvalidArgument, "real index out of range for tx " + std::to_string(tx.id));
            }
            edges.push_back({tx.id, source_of(tx.rings[r][real])});
        }
    }
    return edges;
}

std::vector<Edge> graph_edges(const Chain& chain, EdgeMode mode)
{
    RealInputMap secrets;
    for (const auto& tx : chain.transactions) {
        if (tx.inputs.empty()) {
            continue;
        }
        auto& slots = secrets[tx.id];
        for (const auto& ring : tx.inputs) {
            slots.push_back(ring.real_index);
        }
    }
    return graph_edges(public_view(chain), mode, &secrets);
}

void write_edges(const std::filesystem::path& path, const std::vector<Edge>& edges)
{
    csv::Writer out(path);
    out.header({"src_tx", "dst_tx"});
    for (const auto& e : edges) {
        out.row(e.spender, e.source);
    }
}

}  // namespace ringtrace
