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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringtrace/economy.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/ml/cv.hpp"

namespace ringtrace::ml {

enum class TaskKind { spoof, group, value, external_label };

std::string to_string(TaskKind task);
TaskKind parse_task(const std::string& name);

/// Metric optimised by the search for each task: top1, accuracy, r2, recall_1.
std::string default_metric(TaskKind task);
/// Reasonable starting model for each task (forest; balanced for the
/// imbalanced tasks, variance criterion for value).
ModelSpec default_spec(TaskKind task);

struct ModelReport {
    TaskKind task = TaskKind::spoof;
    std::string metric;
    std::vector<std::string> columns;
    std::size_t samples = 0;
    SearchResult search;
    std::optional<double> baseline;          // spoof: 1 / ring size
    std::map<std::string, double> extras;    // task-specific scalars
    std::vector<std::string> warnings;

    [[nodiscard]] const Trial& best() const { return search.best_trial(); }
};

/// One row per ring member; label 1 on the real member, groups are rings.
Dataset spoof_dataset(const CandidateTable& candidates, const RealInputMap& real);

ModelReport spoof_task(const CandidateTable& candidates, const RealInputMap& real, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs = 1);

/// Rows whose tx has no label are dropped. Throws DegenerateLabels with fewer than two classes.
ModelReport group_task(const FeatureTable& features, const std::map<TxId, int>& labels, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs = 1);

/// Throws ConstantTarget when every target is equal.
ModelReport value_task(const FeatureTable& features, const std::map<TxId, double>& targets, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs = 1);

/// Binary labels, rows missing from `labels` are negative.
ModelReport external_task(const FeatureTable& features, const std::map<TxId, int>& labels, const ModelSpec& model,
                          const SearchSpec& search, std::size_t jobs = 1);

FeatureTable to_table(const FeatureMatrix& features);
std::map<TxId, int> group_labels(const GroundTruth& truth);
std::map<TxId, double> value_targets(const GroundTruth& truth);

/// Labels straight from labels.csv as written by the simulator.
std::map<TxId, int> read_group_labels(const std::filesystem::path& labels_csv);
std::map<TxId, double> read_value_targets(const std::filesystem::path& labels_csv);

/// Importance ranking: (column, weight) sorted by weight, lowest column first on ties.
std::vector<std::pair<std::size_t, double>> importance_ranking(const FeatureImportance& importance);

Json to_json(const ModelReport& report);
/// report.json, importance.csv (forest only; header written regardless), trials.csv.
void write_report(const std::filesystem::path& dir, const ModelReport& report);

}  // namespace ringtrace::ml
