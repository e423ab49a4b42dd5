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

#include "ringtrace/ml/tasks.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ringtrace/csv.hpp"
#include "ringtrace/error.hpp"

namespace ringtrace::ml {

std::string to_string(TaskKind task)
{
    switch (task) {
    case TaskKind::spoof: return "spoof";
    case TaskKind::group: return "group";
    case TaskKind::value: return "value";
    case TaskKind::external_label: return "external_label";
    }
    return "spoof";
}

TaskKind parse_task(const std::string& name)
{
    if (name == "spoof") {
        return TaskKind::spoof;
    }
    if (name == "group") {
        return TaskKind::group;
    }
    if (name == "value") {
        return TaskKind::value;
    }
    if (name == "external_label" || name == "external") {
        return TaskKind::external_label;
    }
    fail(ErrorCode::InvalidArgument, "unknown task '" + name + "' (spoof, group, value, external_label)");
}

std::string default_metric(TaskKind task)
{
    switch (task) {
    case TaskKind::spoof: return "top1";
    case TaskKind::group: return "accuracy";
    case TaskKind::value: return "r2";
    case TaskKind::external_label: return "recall_1";
    }
    return "accuracy";
}

ModelSpec default_spec(TaskKind task)
{
    ModelSpec spec;
    spec.kind = ModelKind::forest;
    spec.forest.n_trees = 100;
    switch (task) {
    case TaskKind::spoof:
    case TaskKind::external_label: spec.forest.balanced_class_weight = true; break;
    case TaskKind::value:
        spec.forest.criterion = Criterion::variance;
        spec.forest.max_features = {MaxFeatures::Kind::fraction, 1.0 / 3.0};
        break;
    case TaskKind::group: break;
    }
    return spec;
}

namespace {

SearchSpec with_metric(SearchSpec search, TaskKind task)
{
    if (search.metric.empty()) {
        search.metric = default_metric(task);
    }
    return search;
}

void require_classes(std::span<const double> y, std::size_t minimum, const std::string& what)
{
    const std::set<double> distinct(y.begin(), y.end());
    if (distinct.size() < minimum) {
        fail(ErrorCode::DegenerateLabels, what + ": need at least " + std::to_string(minimum) + " classes, found " +
                                              std::to_string(distinct.size()));
    }
}

// Rows of `features` whose tx appears in `labels`, in table order.
template <typename Label>
Dataset labelled_rows(const FeatureTable& features, const std::map<TxId, Label>& labels, Objective objective)
{
    std::vector<std::size_t> rows;
    Dataset data;
    data.objective = objective;
    data.columns = features.columns;
    for (std::size_t r = 0; r < features.tx_ids.size(); ++r) {
        const auto it = labels.find(features.tx_ids[r]);
        if (it != labels.end()) {
            rows.push_back(r);
            data.y.push_back(static_cast<double>(it->second));
        }
    }
    data.x = features.values.select_rows(rows);
    return data;
}

ModelReport finish(TaskKind task, Dataset data, const ModelSpec& model, const SearchSpec& search, std::size_t jobs,
                   const Scorer& scorer)
{
    ModelReport report;
    report.task = task;
    report.metric = search.metric;
    report.columns = data.columns;
    report.samples = data.y.size();
    report.search = random_search(model, data, search, scorer, jobs);
    report.warnings = report.best().cv.warnings;
    return report;
}

}  // namespace

Dataset spoof_dataset(const CandidateTable& candidates, const RealInputMap& real)
{
    Dataset data;
    data.objective = Objective::classify;
    data.columns = candidate_feature_names();
    std::vector<std::size_t> rows;
    std::size_t group = 0;
    for (std::size_t r = 0; r < candidates.tx_ids.size(); ++r) {
        const auto it = real.find(candidates.tx_ids[r]);
        if (it == real.end()) {
            continue;
        }
        const std::size_t ring = candidates.ring_index[r];
        if (ring >= it->second.size()) {
            fail(ErrorCode::SchemaError, "no real index for tx " + std::to_string(candidates.tx_ids[r]) + " ring " +
                                             std::to_string(ring));
        }
        if (!rows.empty() && candidates.candidate_index[r] == 0) {
            ++group;
        }
        rows.push_back(r);
        data.groups.push_back(group);
        data.y.push_back(candidates.candidate_index[r] == it->second[ring] ? 1.0 : 0.0);
    }
    data.x = candidates.features.select_rows(rows);
    return data;
}

ModelReport spoof_task(const CandidateTable& candidates, const RealInputMap& real, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs)
{
    auto data = spoof_dataset(candidates, real);
    require_classes(data.y, 2, "spoof task");
    const auto spec = with_metric(search, TaskKind::spoof);

    // Chance control and baseline over every ring.
    std::map<std::size_t, std::size_t> ring_sizes;
    for (std::size_t g : data.groups) {
        ++ring_sizes[g];
    }
    double baseline = 0.0;
    for (const auto& [g, size] : ring_sizes) {
        baseline += 1.0 / static_cast<double>(size);
    }
    baseline /= static_cast<double>(ring_sizes.size());
    Rng rng = Rng::stream(spec.seed, 0xc4a2ce);
    std::vector<double> random_scores(data.y.size());
    for (double& s : random_scores) {
        s = rng.uniform01();
    }
    const double chance = top1_accuracy(random_scores, data.groups, data.y);

    auto report = finish(TaskKind::spoof, std::move(data), model, spec, jobs, ring_top1_metrics);
    report.baseline = baseline;
    report.extras["rings"] = static_cast<double>(ring_sizes.size());
    report.extras["chance_top1"] = chance;
    return report;
}

ModelReport group_task(const FeatureTable& features, const std::map<TxId, int>& labels, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs)
{
    auto data = labelled_rows(features, labels, Objective::classify);
    require_classes(data.y, 2, "group task");
    const std::set<double> classes(data.y.begin(), data.y.end());
    auto report = finish(TaskKind::group, std::move(data), model, with_metric(search, TaskKind::group), jobs,
                         classification_metrics);
    report.extras["classes"] = static_cast<double>(classes.size());
    return report;
}

ModelReport value_task(const FeatureTable& features, const std::map<TxId, double>& targets, const ModelSpec& model,
                       const SearchSpec& search, std::size_t jobs)
{
    auto data = labelled_rows(features, targets, Objective::regress);
    if (data.y.empty() || std::all_of(data.y.begin(), data.y.end(), [&](double v) { return v == data.y[0]; })) {
        fail(ErrorCode::ConstantTarget, "value task: every target is equal");
    }
    return finish(TaskKind::value, std::move(data), model, with_metric(search, TaskKind::value), jobs,
                  regression_metrics);
}

ModelReport external_task(const FeatureTable& features, const std::map<TxId, int>& labels, const ModelSpec& model,
                          const SearchSpec& search, std::size_t jobs)
{
    Dataset data;
    data.objective = Objective::classify;
    data.columns = features.columns;
    data.x = features.values;
    std::size_t positives = 0;
    for (TxId id : features.tx_ids) {
        const auto it = labels.find(id);
        const int label = it == labels.end() ? 0 : it->second;
        positives += label == 1 ? 1 : 0;
        data.y.push_back(static_cast<double>(label));
    }
    require_classes(data.y, 2, "external task");
    const double rate = static_cast<double>(positives) / static_cast<double>(data.y.size());
    auto report = finish(TaskKind::external_label, std::move(data), model, with_metric(search, TaskKind::external_label),
                         jobs, classification_metrics);
    report.extras["positive_rate"] = rate;
    return report;
}

FeatureTable to_table(const FeatureMatrix& features)
{
    return {features.tx_ids, features.columns, features.raw};
}

std::map<TxId, int> group_labels(const GroundTruth& truth)
{
    std::map<TxId, int> out;
    for (const auto& t : truth.transfers) {
        out[t.tx] = t.receiver_pool;
    }
    return out;
}

std::map<TxId, double> value_targets(const GroundTruth& truth)
{
    std::map<TxId, double> out;
    for (const auto& t : truth.transfers) {
        out[t.tx] = static_cast<double>(t.value);
    }
    return out;
}

namespace {

template <typename T>
std::map<TxId, T> read_label_column(const std::filesystem::path& path, const char* column)
{
    const auto table = csv::read(path);
    const auto id_col = table.require_column("tx_id");
    const auto value_col = table.require_column(column);
    std::map<TxId, T> out;
    for (const auto& row : table.rows) {
        const auto id = static_cast<TxId>(csv::parse_int(row[id_col]));
        if constexpr (std::is_same_v<T, int>) {
            out[id] = static_cast<int>(csv::parse_int(row[value_col]));
        } else {
            out[id] = csv::parse_double(row[value_col]);
        }
    }
    return out;
}

}  // namespace

std::map<TxId, int> read_group_labels(const std::filesystem::path& labels_csv)
{
    return read_label_column<int>(labels_csv, "receiver_pool");
}

std::map<TxId, double> read_value_targets(const std::filesystem::path& labels_csv)
{
    return read_label_column<double>(labels_csv, "value");
}

}  // namespace ringtrace::ml
