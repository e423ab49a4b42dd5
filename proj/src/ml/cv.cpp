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

#include "ringtrace/ml/cv.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"

namespace ringtrace::ml {

namespace {

void check_folds(std::size_t units, std::size_t folds, const char* what)
{
    if (folds < 2) {
        fail(ErrorCode::InvalidArgument, "folds must be >= 2");
    }
    if (units < folds) {
        fail(ErrorCode::TooFewSamples, std::to_string(units) + " " + what + " cannot fill " + std::to_string(folds) +
                                           " folds");
    }
}

}  // namespace

std::vector<std::size_t> stratified_folds(std::span<const double> labels, std::size_t folds, std::uint64_t seed)
{
    check_folds(labels.size(), folds, "samples");
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    Rng rng(seed);
    std::vector<std::size_t> out(labels.size());
    std::size_t counter = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start;
        while (stop < order.size() && labels[order[stop]] == labels[order[start]]) {
            ++stop;
        }
        rng.shuffle(std::span<std::size_t>(order.data() + start, stop - start));
        for (std::size_t i = start; i < stop; ++i) {
            out[order[i]] = counter++ % folds;
        }
        start = stop;
    }
    return out;
}

std::vector<std::size_t> shuffled_folds(std::size_t n, std::size_t folds, std::uint64_t seed)
{
    check_folds(n, folds, "samples");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::size_t> out(n);
    for (std::size_t p = 0; p < n; ++p) {
        out[order[p]] = p * folds / n;
    }
    return out;
}

std::vector<std::size_t> grouped_folds(std::span<const std::size_t> groups, std::size_t folds, std::uint64_t seed)
{
    const std::set<std::size_t> distinct(groups.begin(), groups.end());
    check_folds(distinct.size(), folds, "groups");
    std::vector<std::size_t> ids(distinct.begin(), distinct.end());
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(ids));
    std::unordered_map<std::size_t, std::size_t> fold_of;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        fold_of.emplace(ids[i], i % folds);
    }
    std::vector<std::size_t> out(groups.size());
    for (std::size_t r = 0; r < groups.size(); ++r) {
        out[r] = fold_of.at(groups[r]);
    }
    return out;
}

std::vector<std::size_t> assign_folds(const Dataset& data, std::size_t folds, std::uint64_t seed)
{
    if (data.x.rows != data.y.size()) {
        fail(ErrorCode::InvalidArgument, "dataset rows and targets differ in length");
    }
    if (!data.groups.empty()) {
        if (data.groups.size() != data.y.size()) {
            fail(ErrorCode::InvalidArgument, "dataset groups and targets differ in length");
        }
        return grouped_folds(data.groups, folds, seed);
    }
    if (data.objective == Objective::classify) {
        return stratified_folds(data.y, folds, seed);
    }
    return shuffled_folds(data.y.size(), folds, seed);
}

namespace {

std::vector<int> to_ints(std::span<const double> values)
{
    std::vector<int> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](double v) { return static_cast<int>(v); });
    return out;
}

std::vector<int> dataset_classes(const Dataset& data)
{
    const std::set<int> labels(data.y.begin(), data.y.end());
    return {labels.begin(), labels.end()};
}

std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> rows)
{
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i] = values[rows[i]];
    }
    return out;
}

}  // namespace

MetricMap classification_metrics(const Dataset& data, const FoldPrediction& fold)
{
    const auto truth = to_ints(gather(data.y, fold.test_rows));
    const auto predicted = to_ints(fold.predicted);
    const auto classes = dataset_classes(data);
    MetricMap out;
    out["accuracy"] = accuracy(truth, predicted);
    for (const auto& m : precision_recall(truth, predicted, classes)) {
        out["precision_" + std::to_string(m.label)] = m.precision;
        out["recall_" + std::to_string(m.label)] = m.recall;
    }
    return out;
}

MetricMap regression_metrics(const Dataset& data, const FoldPrediction& fold)
{
    const auto y_test = gather(data.y, fold.test_rows);
    const auto y_train = gather(data.y, fold.train_rows);
    const double train_mean = std::accumulate(y_train.begin(), y_train.end(), 0.0) /
                              static_cast<double>(y_train.size());
    auto safe_r2 = [](std::span<const double> y, std::span<const double> y_hat) -> std::optional<double> {
        try {
            return r_squared(y, y_hat);
        } catch (const Error&) {
            return std::nullopt;  // constant fold target or a single row
        }
    };
    MetricMap out;
    out["r2"] = safe_r2(y_test, fold.predicted);
    out["baseline_r2"] = safe_r2(y_test, std::vector<double>(y_test.size(), train_mean));
    out["baseline_train_r2"] = safe_r2(y_train, std::vector<double>(y_train.size(), train_mean));
    return out;
}

double top1_accuracy(std::span<const double> scores, std::span<const std::size_t> groups,
                     std::span<const double> labels)
{
    if (scores.size() != groups.size() || labels.size() != groups.size()) {
        fail(ErrorCode::InvalidArgument, "top1_accuracy: size mismatch");
    }
    // Group -> (best score, label of best row); first row wins ties.
    std::unordered_map<std::size_t, std::pair<double, double>> best;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto [it, inserted] = best.try_emplace(groups[i], scores[i], labels[i]);
        if (inserted) {
            order.push_back(groups[i]);
        } else if (scores[i] > it->second.first) {
            it->second = {scores[i], labels[i]};
        }
    }
    if (order.empty()) {
        fail(ErrorCode::InvalidArgument, "top1_accuracy: no groups");
    }
    std::size_t hits = 0;
    for (std::size_t g : order) {
        hits += best.at(g).second == 1.0 ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(order.size());
}

MetricMap ring_top1_metrics(const Dataset& data, const FoldPrediction& fold)
{
    auto out = classification_metrics(data, fold);
    const auto positive = std::find(fold.classes.begin(), fold.classes.end(), 1);
    std::vector<double> scores(fold.test_rows.size(), 0.0);
    if (positive != fold.classes.end()) {
        const auto col = static_cast<std::size_t>(positive - fold.classes.begin());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            scores[i] = fold.proba(i, col);
        }
    }
    std::vector<std::size_t> groups(fold.test_rows.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        groups[i] = data.groups.at(fold.test_rows[i]);
    }
    out["top1"] = top1_accuracy(scores, groups, gather(data.y, fold.test_rows));
    return out;
}

CvResult kfold_eval(const ModelSpec& spec, const Dataset& data, std::size_t folds, std::uint64_t seed,
                    const Scorer& scorer, std::size_t jobs)
{
    const auto assignment = assign_folds(data, folds, seed);
    CvResult result;
    std::vector<double> importance_sum(data.x.cols, 0.0);
    std::size_t importance_folds = 0;
    bool any_importance = false;
    std::set<std::string> seen_warnings;
    for (std::size_t f = 0; f < folds; ++f) {
        FoldPrediction fold;
        fold.fold = f;
        for (std::size_t r = 0; r < assignment.size(); ++r) {
            (assignment[r] == f ? fold.test_rows : fold.train_rows).push_back(r);
        }
        Matrix train = data.x.select_rows(fold.train_rows);
        Matrix test = data.x.select_rows(fold.test_rows);
        // Statistics come from the training fold only.
        const auto norm = fit_norm(train);
        apply_norm(train, norm);
        apply_norm(test, norm);
        const auto y_train = gather(data.y, fold.train_rows);
        const auto model = Model::fit(spec, data.objective, train, y_train, jobs);
        if (data.objective == Objective::classify) {
            fold.classes = model.classes();
            fold.proba = model.predict_proba(test);
        }
        fold.predicted = model.predict(test);
        result.folds.push_back(scorer(data, fold));
        for (const auto& w : model.warnings()) {
            if (seen_warnings.insert(w).second) {
                result.warnings.push_back(w);
            }
        }
        if (const auto imp = model.importance()) {
            any_importance = true;
            if (imp->has_splits) {
                ++importance_folds;
                for (std::size_t c = 0; c < importance_sum.size(); ++c) {
                    importance_sum[c] += imp->weights[c];
                }
            }
        }
    }
    std::set<std::string> names;
    for (const auto& fold : result.folds) {
        for (const auto& [name, value] : fold) {
            names.insert(name);
        }
    }
    for (const auto& name : names) {
        std::vector<std::optional<double>> values;
        for (const auto& fold : result.folds) {
            const auto it = fold.find(name);
            values.push_back(it == fold.end() ? std::nullopt : it->second);
        }
        result.summary[name] = summarize(values);
    }
    if (any_importance) {
        FeatureImportance imp;
        imp.weights.assign(data.x.cols, 0.0);
        const double total = std::accumulate(importance_sum.begin(), importance_sum.end(), 0.0);
        if (importance_folds > 0 && total > 0.0) {
            imp.has_splits = true;
            for (std::size_t c = 0; c < imp.weights.size(); ++c) {
                imp.weights[c] = importance_sum[c] / total;
            }
        }
        result.importance = std::move(imp);
    }
    return result;
}

}  // namespace ringtrace::ml
