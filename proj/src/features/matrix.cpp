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
#include "ringtrace/parallel.hpp"

namespace ringtrace {

NormStats fit_norm(const Matrix& m)
{
    NormStats stats;
    stats.mean.assign(m.cols, 0.0);
    stats.stddev.assign(m.cols, 0.0);
    if (m.rows == 0) {
        return stats;
    }
    const auto n = static_cast<double>(m.rows);
    for (std::size_t c = 0; c < m.cols; ++c) {
        double sum = 0.0;
        double lo = m(0, c);
        double hi = m(0, c);
        for (std::size_t r = 0; r < m.rows; ++r) {
            sum += m(r, c);
            lo = std::min(lo, m(r, c));
            hi = std::max(hi, m(r, c));
        }
        const double mean = sum / n;
        stats.mean[c] = mean;
        if (lo == hi) {
            stats.mean[c] = lo;
            continue;
        }
        double ss = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            ss += (m(r, c) - mean) * (m(r, c) - mean);
        }
        stats.stddev[c] = std::sqrt(ss / n);
    }
    return stats;
}

void apply_norm(Matrix& m, const NormStats& stats)
{
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            row[c] = stats.stddev[c] > 0.0 ? (row[c] - stats.mean[c]) / stats.stddev[c] : 0.0;
        }
    }
}

void invert_norm(Matrix& m, const NormStats& stats)
{
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            row[c] = row[c] * stats.stddev[c] + stats.mean[c];
        }
    }
}

FeatureMatrix featurize_chain(const PublicChain& chain, const FeaturizeOptions& options)
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < chain.transactions.size(); ++i) {
        if (options.include_coinbase || !chain.transactions[i].rings.empty()) {
            rows.push_back(i);
        }
    }
    if (rows.empty()) {
        fail(ErrorCode::EmptyChain, "no transactions to featurize");
    }

    const ChainIndex index(chain);
    FeatureMatrix fm;
    fm.columns = feature_names();
    fm.raw = Matrix(rows.size(), kFeatureWidth);
    fm.coverage.assign(rows.size(), 1.0);
    fm.tx_ids.reserve(rows.size());
    for (std::size_t i : rows) {
        fm.tx_ids.push_back(chain.transactions[i].id);
    }
    parallel_for(rows.size(), options.jobs, [&](std::size_t r) {
        const auto& tx = chain.transactions[rows[r]];
        auto out = fm.raw.row(r);
        const auto z = zero_hop(tx);
        std::copy(z.begin(), z.end(), out.begin());
        if (tx.rings.empty()) {
            return;  // coinbase rows keep a zero one-hop block
        }
        const auto hop = one_hop_with_coverage(tx, index);
        std::copy(hop.values.begin(), hop.values.end(), out.begin() + kZeroHopWidth);
        fm.coverage[r] = hop.coverage();
    });

    fm.norm = fit_norm(fm.raw);
    fm.normalized = fm.raw;
    apply_norm(fm.normalized, fm.norm);
    return fm;
}

}  // namespace ringtrace
