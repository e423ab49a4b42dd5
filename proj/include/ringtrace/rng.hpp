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
#include <random>
#include <span>
#include <utility>

namespace ringtrace {

/// Seeded random stream with platform-independent sampling.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The <random> distributions are not, so every sampler used by the
/// simulator and the learners is implemented here on top of raw 64-bit draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream for work unit `index` (a tree, a fold, an agent).
    /// Depends only on (seed, index), never on call order.
    [[nodiscard]] static Rng stream(std::uint64_t seed, std::uint64_t index);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();

    /// Uniform integer on [0, bound). bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform integer on [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    double uniform(double lo, double hi);

    /// exp(uniform(log lo, log hi)).
    double log_uniform(double lo, double hi);

    /// Poisson(mean) by sequential inversion. Large means are split into
    /// chunks whose sum is again Poisson, which keeps exp(-mean) representable.
    std::uint64_t poisson(double mean);

    double normal();

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t poisson_small(double mean);

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace ringtrace
