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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ringtrace/ledger.hpp"
#include "ringtrace/matrix.hpp"

namespace ringtrace {

// Base per-transaction quantities, in column order.
enum class BaseFeature : std::size_t {
    epoch_time,
    num_rings,
    ring_size,
    day_of_week,
    hour_of_day,
    minute_of_hour,
    second_of_minute,
};

// Reduction of a base feature over the members of one ring.
enum class RingStat : std::size_t { min, max, mean, std, sum };
// Reduction of a per-ring statistic across the rings of a transaction.
enum class CrossStat : std::size_t { min, max, mean, median, sum };

inline constexpr std::size_t kZeroHopWidth = 7;
inline constexpr std::size_t kRingStatCount = 5;
inline constexpr std::size_t kCrossStatCount = 5;
inline constexpr std::size_t kOneHopWidth = kZeroHopWidth * kRingStatCount * kCrossStatCount;  // 175
inline constexpr std::size_t kFeatureWidth = kZeroHopWidth + kOneHopWidth;                     // 182
// member zero-hop, delta_time, age_rank, member one-hop
inline constexpr std::size_t kCandidateWidth = kZeroHopWidth + 2 + kOneHopWidth;  // 184

using ZeroHopVector = std::array<double, kZeroHopWidth>;
using OneHopVector = std::array<double, kOneHopWidth>;

/// Column of (base, ring stat, cross stat) inside the one-hop block.
constexpr std::size_t one_hop_column(BaseFeature base, RingStat ring, CrossStat cross)
{
    return (static_cast<std::size_t>(base) * kRingStatCount + static_cast<std::size_t>(ring)) * kCrossStatCount +
           static_cast<std::size_t>(cross);
}

const std::array<std::string, kZeroHopWidth>& zero_hop_names();
/// "epoch_time", ..., then "in_<base>_ring<stat>_tx<stat>" for the 175 one-hop columns.
const std::vector<std::string>& feature_names();
const std::vector<std::string>& candidate_feature_names();

/// Timestamp decomposition uses the chain clock: day 0 starts at t = 0.
ZeroHopVector zero_hop(const PublicTransaction& tx);

/// Output id -> creating transaction. Outputs created outside the chain
/// (partial dumps) are unresolved.
class ChainIndex {
public:
    explicit ChainIndex(const PublicChain& chain);

    [[nodiscard]] const PublicChain& chain() const noexcept { return *chain_; }
    [[nodiscard]] const PublicTransaction* creator(OutputId output) const;

private:
    const PublicChain* chain_;
    std::unordered_map<OutputId, std::size_t> creator_;
};

struct OneHopResult {
    OneHopVector values{};
    std::size_t members = 0;
    std::size_t resolved = 0;

    [[nodiscard]] double coverage() const noexcept
    {
        return members == 0 ? 1.0 : static_cast<double>(resolved) / static_cast<double>(members);
    }
};

/// Ring-neighborhood statistics: per ring, the members' creating transactions'
/// zero-hop vectors are reduced with RingStat, then across rings with
/// CrossStat. Unresolved members contribute a zero vector. Throws NoRings.
OneHopVector one_hop(const PublicTransaction& tx, const ChainIndex& index);
OneHopResult one_hop_with_coverage(const PublicTransaction& tx, const ChainIndex& index);

struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;  // population; 0 marks a constant column
};

NormStats fit_norm(const Matrix& m);
/// Z-normalizes in place; constant columns become 0.
void apply_norm(Matrix& m, const NormStats& stats);
/// Inverse of apply_norm for non-constant columns; constant columns get their mean.
void invert_norm(Matrix& m, const NormStats& stats);

struct FeatureMatrix {
    std::vector<TxId> tx_ids;
    std::vector<std::string> columns;
    Matrix raw;
    Matrix normalized;
    NormStats norm;
    std::vector<double> coverage;  // fraction of resolved ring members per row
};

struct FeaturizeOptions {
    bool include_coinbase = false;
    std::size_t jobs = 1;
};

/// zero_hop ∥ one_hop per transaction (transfers only unless include_coinbase),
/// then Z-normalized. Throws EmptyChain when no row qualifies.
FeatureMatrix featurize_chain(const PublicChain& chain, const FeaturizeOptions& options = {});

/// One vector per ring member of ring `ring_index` of tx, oldest first.
std::vector<std::vector<double>> candidate_features(const PublicTransaction& tx, std::size_t ring_index,
                                                    const ChainIndex& index);

struct CandidateTable {
    std::vector<TxId> tx_ids;
    std::vector<std::size_t> ring_index;
    std::vector<std::size_t> candidate_index;
    Matrix features;  // kCandidateWidth columns
};

/// Candidates for every ring of every transfer, rows grouped by (tx, ring).
CandidateTable candidate_table(const PublicChain& chain, std::size_t jobs = 1);

enum class CorrelationBinning { by_hour_of_day, by_rank };

struct RingCorrelationMatrix {
    CorrelationBinning binning = CorrelationBinning::by_rank;
    std::size_t bins = 0;
    std::vector<std::optional<double>> values;  // row-major bins x bins; empty where undefined
    std::vector<std::size_t> support;

    [[nodiscard]] const std::optional<double>& at(std::size_t i, std::size_t j) const { return values[i * bins + j]; }
    [[nodiscard]] std::size_t support_at(std::size_t i, std::size_t j) const { return support[i * bins + j]; }
};

/// Pearson correlation between member timestamps of the first and second
/// ring of every transaction with exactly two rings. by_rank bins the
/// members' age ranks; by_hour_of_day bins their hours. Throws NoTwoRingTxs.
RingCorrelationMatrix ring_pair_correlation(const PublicChain& chain, CorrelationBinning binning, std::size_t bins);

CorrelationBinning parse_binning(const std::string& name);
std::string to_string(CorrelationBinning binning);

// --- files -------------------------------------------------------------------

void write_features_csv(const std::filesystem::path& path, const std::vector<TxId>& tx_ids, const Matrix& values,
                        const std::vector<std::string>& columns);
void write_norm_stats(const std::filesystem::path& path, const FeatureMatrix& features);
void write_candidates_csv(const std::filesystem::path& path, const CandidateTable& table);
void write_correlation_csv(const std::filesystem::path& path, const RingCorrelationMatrix& matrix);

struct FeatureTable {
    std::vector<TxId> tx_ids;
    std::vector<std::string> columns;
    Matrix values;
};

FeatureTable read_features_csv(const std::filesystem::path& path);
CandidateTable read_candidates_csv(const std::filesystem::path& path);

}  // namespace ringtrace
