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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringtrace/matrix.hpp"
#include "ringtrace/ml/metrics.hpp"
#include "ringtrace/ml/model.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::ml {

struct Dataset {
    Matrix x;                  // raw, un-normalized features
    std::vector<double> y;     // class labels or regression targets
    Objective objective = Objective::classify;
    std::vector<std::size_t> groups;  // optional: rows sharing a group never split across folds
    std::vector<std::string> columns;
};

/// Fold id per sample.
/// Stratified: each class is shuffled, then dealt round robin across folds.
std::vector<std::size_t> stratified_folds(std::span<const double> labels, std::size_t folds, std::uint64_t seed);
/// Shuffled, then cut into contiguous near-equal chunks.
std::vector<std::size_t> shuffled_folds(std::size_t n, std::size_t folds, std::uint64_t seed);
/// Groups shuffled and dealt round robin; every row follows its group.
std::vector<std::size_t> grouped_folds(std::span<const std::size_t> groups, std::size_t folds, std::uint64_t seed);

/// Picks the scheme above that fits the dataset. Throws TooFewSamples.
std::vector<std::size_t> assign_folds(const Dataset& data, std::size_t folds, std::uint64_t seed);

struct FoldPrediction {
    std::size_t fold = 0;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::vector<int> classes;           // classification only
    Matrix proba;                       // classification only, rows follow test_rows
    std::vector<double> predicted;      // labels or values for test_rows
};

using MetricMap = std::map<std::string, std::optional<double>>;
using Scorer = std::function<MetricMap(const Dataset&, const FoldPrediction&)>;

/// accuracy plus precision_<label> / recall_<label>.
MetricMap classification_metrics(const Dataset& data, const FoldPrediction& fold);
/// r2, baseline_r2 (train-fold mean on the test fold) and baseline_train_r2.
MetricMap regression_metrics(const Dataset& data, const FoldPrediction& fold);
/// top1: per group, the row with the highest positive-class probability
/// (lowest row on ties) is the guess; label 1 marks the real row.
MetricMap ring_top1_metrics(const Dataset& data, const FoldPrediction& fold);

/// Fraction of groups whose top-scored row (first on ties) has label 1.
double top1_accuracy(std::span<const double> scores, std::span<const std::size_t> groups,
                     std::span<const double> labels);

struct CvResult {
    std::vector<MetricMap> folds;
    std::map<std::string, Summary> summary;
    std::optional<FeatureImportance> importance;  // fold-averaged, forest only
    std::vector<std::string> warnings;
};

/// Z-normalization is fit on each training fold and applied to its test fold.
CvResult kfold_eval(const ModelSpec& spec, const Dataset& data, std::size_t folds, std::uint64_t seed,
                    const Scorer& scorer, std::size_t jobs = 1);

struct SearchSpec {
    std::size_t budget = 1;
    std::size_t folds = 5;
    std::string metric;  // empty: the task default
    std::uint64_t seed = 0;
};

struct Trial {
    std::size_t index = 0;
    ModelSpec spec;
    CvResult cv;
    double score = 0.0;  // mean of the search metric over folds
    std::optional<std::string> error;  // set when training failed (e.g. diverged)
};

struct SearchResult {
    std::vector<Trial> trials;
    std::size_t best = 0;

    [[nodiscard]] const Trial& best_trial() const { return trials.at(best); }
};

/// Draws a configuration of base.kind: learning rates log-uniform in
/// [1e-4, 1e-1], trees in [50, 500], depth in [3, 20] or unlimited,
/// hidden units in [10, 30].
ModelSpec sample_spec(const ModelSpec& base, Rng& rng);

/// Trial 0 evaluates `base` as given; later trials are sampled. All trials
/// share one fold assignment. Highest score wins, lowest index on ties.
/// A trial whose training diverges is logged with its error and never wins;
/// if every trial fails the first error is rethrown.
SearchResult random_search(const ModelSpec& base, const Dataset& data, const SearchSpec& spec, const Scorer& scorer,
                           std::size_t jobs = 1);

}  // namespace ringtrace::ml
