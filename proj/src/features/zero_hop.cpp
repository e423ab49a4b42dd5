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

#include "ringtrace/features.hpp"

namespace ringtrace {

namespace {

Seconds floor_mod(Seconds a, Seconds b)
{
    return ((a % b) + b) % b;
}

Seconds floor_div(Seconds a, Seconds b)
{
    return (a - floor_mod(a, b)) / b;
}

}  // namespace

const std::array<std::string, kZeroHopWidth>& zero_hop_names()
{
    static const std::array<std::string, kZeroHopWidth> names = {
        "epoch_time", "num_rings", "ring_size", "day_of_week", "hour_of_day", "minute_of_hour", "second_of_minute",
    };
    return names;
}

const std::vector<std::string>& feature_names()
{
    static const std::vector<std::string> names = [] {
        static const std::array<const char*, kRingStatCount> ring = {"min", "max", "mean", "std", "sum"};
        static const std::array<const char*, kCrossStatCount> cross = {"min", "max", "mean", "median", "sum"};
        std::vector<std::string> out(zero_hop_names().begin(), zero_hop_names().end());
        for (const auto& base : zero_hop_names()) {
            for (const char* r : ring) {
                for (const char* c : cross) {
                    out.push_back("in_" + base + "_ring" + r + "_tx" + c);
                }
            }
        }
        return out;
    }();
    return names;
}

const std::vector<std::string>& candidate_feature_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& base : zero_hop_names()) {
            out.push_back("member_" + base);
        }
        out.emplace_back("delta_time");
        out.emplace_back("age_rank");
        const auto& all = feature_names();
        for (std::size_t i = kZeroHopWidth; i < all.size(); ++i) {
            out.push_back("member_" + all[i]);
        }
        return out;
    }();
    return names;
}

ZeroHopVector zero_hop(const PublicTransaction& tx)
{
    const Seconds t = tx.timestamp;
    double ring_size = 0.0;
    if (!tx.rings.empty()) {
        std::size_t members = 0;
        for (const auto& ring : tx.rings) {
            members += ring.size();
        }
        ring_size = static_cast<double>(members) / static_cast<double>(tx.rings.size());
    }
    return {
        static_cast<double>(t),
        static_cast<double>(tx.rings.size()),
        ring_size,
        static_cast<double>(floor_mod(floor_div(t, 86400), 7)),
        static_cast<double>(floor_mod(t, 86400) / 3600),
        static_cast<double>(floor_mod(t, 3600) / 60),
        static_cast<double>(floor_mod(t, 60)),
    };
}

}  // namespace ringtrace
