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

#include "ringtrace/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace ringtrace {

namespace {

constexpr double kPoissonChunk = 500.0;

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index)
{
    return Rng(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t Rng::next_u64()
{
    return engine_();
}

double Rng::uniform01()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound)
{
    assert(bound > 0);
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) {
        x = next_u64();
    }
    return x % bound;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    assert(lo <= hi);
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {
        return static_cast<std::int64_t>(next_u64());
    }
    return lo + static_cast<std::int64_t>(uniform_below(span));
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

double Rng::log_uniform(double lo, double hi)
{
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::uint64_t Rng::poisson_small(double mean)
{
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    // The cap only matters when rounding keeps cdf below u near 1.
    const auto cap = static_cast<std::uint64_t>(mean * 20.0 + 100.0);
    while (u >= cdf && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p == 0.0 && static_cast<double>(k) > mean) {
            break;
        }
    }
    return k;
}

std::uint64_t Rng::poisson(double mean)
{
    if (!(mean > 0.0)) {
        return 0;
    }
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = std::min(remaining, kPoissonChunk);
        total += poisson_small(chunk);
        remaining -= chunk;
    }
    return total;
}

double Rng::normal()
{
    // Box-Muller; the second variate is discarded to keep the stream stateless.
    double u1 = uniform01();
    while (u1 <= 0.0) {
        u1 = uniform01();
    }
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ringtrace
