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

#include "binning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringtrace/error.hpp"

namespace ringtrace::ml::detail {

namespace {

double midpoint(double a, double b)
{
    const double m = a + (b - a) / 2.0;
    return m >= b ? a : m;  // adjacent doubles: keep b strictly above the cut
}

}  // namespace

std::vector<double> column_cuts(std::vector<double> values, std::size_t max_bins)
{
    std::sort(values.begin(), values.end());
    std::vector<double> uniq;
    std::vector<std::size_t> counts;
    for (double v : values) {
        if (uniq.empty() || v != uniq.back()) {
            uniq.push_back(v);
            counts.push_back(0);
        }
        ++counts.back();
    }
    std::vector<double> cuts;
    if (uniq.size() <= max_bins) {
        for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
            cuts.push_back(midpoint(uniq[i], uniq[i + 1]));
        }
        return cuts;
    }
    // Close a bin after the distinct value where the running count first
    // reaches the next quantile target.
    const auto n = static_cast<double>(values.size());
    std::size_t seen = 0;
    std::size_t next = 1;
    for (std::size_t i = 0; i + 1 < uniq.size() && next < max_bins; ++i) {
        seen += counts[i];
        if (static_cast<double>(seen) >= n * static_cast<double>(next) / static_cast<double>(max_bins)) {
            cuts.push_back(midpoint(uniq[i], uniq[i + 1]));
            while (next < max_bins &&
                   static_cast<double>(seen) >= n * static_cast<double>(next) / static_cast<double>(max_bins)) {
                ++next;
            }
        }
    }
    return cuts;
}

BinnedColumns bin_columns(const Matrix& x, std::size_t max_bins)
{
    if (max_bins < 2 || max_bins > 256) {
        fail(ErrorCode::InvalidArgument, "max_bins must be in [2, 256]");
    }
    BinnedColumns out;
    out.rows = x.rows;
    out.cols = x.cols;
    out.codes.resize(x.rows * x.cols);
    out.cuts.resize(x.cols);
    std::vector<double> column(x.rows);
    for (std::size_t c = 0; c < x.cols; ++c) {
        for (std::size_t r = 0; r < x.rows; ++r) {
            column[r] = x(r, c);
            if (!std::isfinite(column[r])) {
                fail(ErrorCode::InvalidArgument, "feature matrix has a non-finite value in column " +
                                                     std::to_string(c));
            }
        }
        out.cuts[c] = column_cuts(column, max_bins);
        const auto& cuts = out.cuts[c];
        for (std::size_t r = 0; r < x.rows; ++r) {
            const auto code = std::lower_bound(cuts.begin(), cuts.end(), column[r]) - cuts.begin();
            out.codes[c * x.rows + r] = static_cast<std::uint8_t>(code);
        }
    }
    return out;
}

}  // namespace ringtrace::ml::detail
