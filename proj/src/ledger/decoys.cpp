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
#include "ringtrace/ledger.hpp"

namespace ringtrace {

std::string to_string(DecoyPolicy::Kind kind)
{
    return kind == DecoyPolicy::Kind::uniform ? "uniform" : "recency_weighted";
}

DecoyPolicy::Kind parse_decoy_kind(const std::string& name)
{
    if (name == "uniform") {
        return DecoyPolicy::Kind::uniform;
    }
    if (name == "recency_weighted") {
        return DecoyPolicy::Kind::recency_weighted;
    }
    fail(ErrorCode::InvalidArgument, "unknown decoy policy '" + name + "'");
}

namespace {

bool older(const Output& a, const Output& b) noexcept
{
    return a.block_height != b.block_height ? a.block_height < b.block_height : a.id < b.id;
}

// Mass of x^-shape over [r, r+1).
double cell_mass(double r, double shape)
{
    if (std::abs(shape - 1.0) < 1e-12) {
        return std::log((r + 1.0) / r);
    }
    const double a = 1.0 - shape;
    return (std::pow(r + 1.0, a) - std::pow(r, a)) / a;
}

// Exact draw of rank r in [1, n] with P(r) proportional to r^-shape. Proposal
// is the continuous power law on [1, n+1) floored; acceptance corrects the
// per-cell mass to the point weight.
std::size_t sample_recency_rank(std::size_t n, double shape, Rng& rng)
{
    if (n == 1 || shape == 0.0) {
        return 1 + static_cast<std::size_t>(rng.uniform_below(n));
    }
    const double top = static_cast<double>(n) + 1.0;
    const double first_cell = cell_mass(1.0, shape);
    while (true) {
        const double u = rng.uniform01();
        double x = 0.0;
        if (std::abs(shape - 1.0) < 1e-12) {
            x = std::exp(u * std::log(top));
        } else {
            const double a = 1.0 - shape;
            x = std::pow(1.0 + u * (std::pow(top, a) - 1.0), 1.0 / a);
        }
        auto r = static_cast<std::size_t>(std::floor(x));
        r = std::clamp<std::size_t>(r, 1, n);
        const double rd = static_cast<double>(r);
        const double accept = std::pow(rd, -shape) * first_cell / cell_mass(rd, shape);
        if (rng.uniform01() < accept) {
            return r;
        }
    }
}

}  // namespace

EligiblePool::EligiblePool(std::span<const Output> outputs, Height spend_height, Height coinbase_maturity)
    : spend_height_(spend_height), maturity_(coinbase_maturity)
{
    const auto below_spend = std::partition_point(outputs.begin(), outputs.end(), [&](const Output& o) {
        return o.block_height < spend_height;
    });
    auto head_end = outputs.begin();
    if (spend_height >= coinbase_maturity) {
        const Height last_mature = spend_height - coinbase_maturity;
        head_end = std::partition_point(outputs.begin(), below_spend, [&](const Output& o) {
            return o.block_height <= last_mature;
        });
    }
    head_ = outputs.subspan(0, static_cast<std::size_t>(head_end - outputs.begin()));
    for (auto it = head_end; it != below_spend; ++it) {
        if (is_eligible(*it)) {
            tail_.push_back(&*it);
        }
    }
}

bool EligiblePool::is_eligible(const Output& out) const noexcept
{
    if (out.block_height >= spend_height_) {
        return false;
    }
    return !out.is_coinbase || out.block_height + maturity_ <= spend_height_;
}

bool EligiblePool::contains(const Output& out) const noexcept
{
    if (!is_eligible(out)) {
        return false;
    }
    const auto it = std::lower_bound(head_.begin(), head_.end(), out, older);
    if (it != head_.end() && it->id == out.id) {
        return true;
    }
    return std::any_of(tail_.begin(), tail_.end(), [&](const Output* o) { return o->id == out.id; });
}

RingInput select_decoys(const EligiblePool& pool, const Output& real, std::size_t ring_size,
                        const DecoyPolicy& policy, Rng& rng)
{
    if (ring_size == 0) {
        fail(ErrorCode::InvalidArgument, "ring_size must be at least 1");
    }
    const std::size_t available = pool.size() - (pool.contains(real) ? 1 : 0);
    if (available < ring_size - 1) {
        fail(ErrorCode::PoolTooSmall, "need " + std::to_string(ring_size - 1) + " decoys, pool has " +
                                          std::to_string(available));
    }

    std::vector<const Output*> members;
    members.reserve(ring_size);
    members.push_back(&real);
    const std::size_t n = pool.size();
    while (members.size() < ring_size) {
        std::size_t index = 0;
        if (policy.kind == DecoyPolicy::Kind::uniform) {
            index = static_cast<std::size_t>(rng.uniform_below(n));
        } else {
            index = n - sample_recency_rank(n, policy.recency_shape, rng);
        }
        const Output* candidate = &pool.at(index);
        const bool taken = std::any_of(members.begin(), members.end(),
                                       [&](const Output* m) { return m->id == candidate->id; });
        if (!taken) {
            members.push_back(candidate);
        }
    }

    std::sort(members.begin(), members.end(), [](const Output* a, const Output* b) { return older(*a, *b); });
    RingInput ring;
    ring.members.reserve(ring_size);
    for (std::size_t i = 0; i < members.size(); ++i) {
        ring.members.push_back(members[i]->id);
        if (members[i]->id == real.id) {
            ring.real_index = i;
        }
    }
    return ring;
}

}  // namespace ringtrace
