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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ringtrace/matrix.hpp"

namespace ringtrace::ml::detail {

/// Per-column quantization used by tree growth. Code c of a value x is the
/// number of cuts strictly below x, so "code <= b" is the same as "x <= cuts[b]".
struct BinnedColumns {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> codes;  // column-major
    std::vector<std::vector<double>> cuts;

    [[nodiscard]] std::span<const std::uint8_t> column(std::size_t c) const { return {codes.data() + c * rows, rows}; }
    [[nodiscard]] std::size_t bins(std::size_t c) const { return cuts[c].size() + 1; }
};

/// Cuts sit halfway between neighbouring distinct values. Columns with more
/// than max_bins distinct values are cut at weighted quantiles instead.
std::vector<double> column_cuts(std::vector<double> values, std::size_t max_bins);

BinnedColumns bin_columns(const Matrix& x, std::size_t max_bins);

}  // namespace ringtrace::ml::detail
