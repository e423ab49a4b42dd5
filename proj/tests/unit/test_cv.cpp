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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ringtrace/error.hpp"
#include "ringtrace/ml/cv.hpp"
#include "ringtrace/rng.hpp"

using namespace ringtrace;
using namespace ringtrace::ml;

namespace {

std::map<std::size_t, std::size_t> fold_sizes(const std::vector<std::size_t>& folds)
{
    std::map<std::size_t, std::size_t> out;
    for (std::size_t f : folds) {
        ++out[f];
    }
    return out;
}

// Two informative columns plus noise; labels follow column 0.
Dataset signal_data(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    Dataset data;
    data.x = Matrix(n, 4);
    for (std::size_t r = 0; r < n; ++r) {
        const double label = static_cast<double>(r % 2);
        data.x(r, 0) = 3.0 * label + rng.normal();
        data.x(r, 1) = rng.normal() * 100.0 + 1000.0;
        data.x(r, 2) = rng.normal();
        data.x(r, 3) = label - rng.normal();
        data.y.push_back(label);
    }
    return data;
}

ModelSpec small_forest()
{
    ModelSpec spec;
    spec.forest.n_trees = 25;
    return spec;
}

}  // namespace

TEST_CASE("fold assignment sizes and determinism")
{
    std::vector<double> labels(100);
    for (std::size_t i = 0; i < 100; ++i) {
        labels[i] = i < 30 ? 1.0 : 0.0;
    }
    const auto strat = stratified_folds(labels, 5, 3);
    for (const auto& [fold, size] : fold_sizes(strat)) {
        CHECK(size == 20);
        std::size_t ones = 0;
        for (std::size_t i = 0; i < 100; ++i) {
            ones += strat[i] == fold && labels[i] == 1.0 ? 1 : 0;
        }
        CHECK(ones == 6);
    }
    CHECK(stratified_folds(labels, 5, 3) == strat);
    CHECK(stratified_folds(labels, 5, 4) != strat);

    const auto shuffled = shuffled_folds(100, 5, 1);
    for (const auto& [fold, size] : fold_sizes(shuffled)) {
        CHECK(size == 20);
    }
    CHECK(shuffled_folds(100, 5, 1) == shuffled);

    std::vector<std::size_t> groups;
    for (std::size_t g = 0; g < 40; ++g) {
        groups.insert(groups.end(), 1 + g % 3, g);
    }
    const auto grouped = grouped_folds(groups, 4, 2);
    std::map<std::size_t, std::set<std::size_t>> folds_of_group;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        folds_of_group[groups[i]].insert(grouped[i]);
    }
    for (const auto& [g, folds] : folds_of_group) {
        CHECK(folds.size() == 1);
    }
    CHECK(fold_sizes(grouped).size() == 4);

    try {
        (void)shuffled_folds(3, 5, 0);
        FAIL("expected TooFewSamples");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
    CHECK_THROWS_AS(shuffled_folds(10, 1, 0), Error);
}

TEST_CASE("kfold_eval reports each fold and a summary")
{
    const auto data = signal_data(100, 1);
    std::vector<std::size_t> test_sizes;
    const Scorer spy = [&](const Dataset& d, const FoldPrediction& f) {
        test_sizes.push_back(f.test_rows.size());
        CHECK(f.train_rows.size() + f.test_rows.size() == 100);
        return classification_metrics(d, f);
    };
    const auto cv = kfold_eval(small_forest(), data, 5, 7, spy);
    CHECK(test_sizes == std::vector<std::size_t>(5, 20));
    REQUIRE(cv.folds.size() == 5);
    const auto& acc = cv.summary.at("accuracy");
    double mean = 0.0;
    for (const auto& f : cv.folds) {
        mean += *f.at("accuracy") / 5.0;
    }
    CHECK(acc.mean == doctest::Approx(mean));
    CHECK(acc.mean > 0.9);
    REQUIRE(cv.importance.has_value());
    CHECK(cv.importance->has_splits);
    CHECK(cv.summary.count("precision_1") == 1);
    CHECK(cv.summary.count("recall_0") == 1);

    const auto again = kfold_eval(small_forest(), data, 5, 7, classification_metrics, 3);
    CHECK(again.folds == cv.folds);
}

TEST_CASE("shuffled labels fall to chance")
{
    auto data = signal_data(1000, 2);
    Rng rng(77);
    rng.shuffle(std::span(data.y));
    const auto cv = kfold_eval(small_forest(), data, 5, 3, classification_metrics);
    CHECK(std::abs(cv.summary.at("accuracy").mean - 0.5) <= 0.05);
}

TEST_CASE("normalization statistics never see the test fold")
{
    // Corrupt one test row of fold 0. With train-only statistics every other
    // fold-0 prediction is unchanged; leaked statistics would move them.
    const auto data = signal_data(200, 3);
    ModelSpec spec;
    spec.kind = ModelKind::mlp;
    spec.mlp.epochs = 5;
    const auto folds = assign_folds(data, 5, 11);
    const auto victim = static_cast<std::size_t>(std::find(folds.begin(), folds.end(), 0) - folds.begin());

    auto capture = [&](const Dataset& d) {
        std::map<std::size_t, double> out;
        const Scorer grab = [&](const Dataset& dd, const FoldPrediction& f) {
            if (f.fold == 0) {
                for (std::size_t i = 0; i < f.test_rows.size(); ++i) {
                    out[f.test_rows[i]] = f.proba(i, 1);
                }
            }
            return classification_metrics(dd, f);
        };
        (void)kfold_eval(spec, d, 5, 11, grab);
        return out;
    };
    const auto clean = capture(data);
    auto mutated = data;
    for (std::size_t c = 0; c < mutated.x.cols; ++c) {
        mutated.x(victim, c) = 1e9;
    }
    const auto dirty = capture(mutated);
    REQUIRE(clean.size() == dirty.size());
    for (const auto& [row, p] : clean) {
        if (row != victim) {
            CHECK(dirty.at(row) == p);
        }
    }
    CHECK(dirty.at(victim) != clean.at(victim));
}

TEST_CASE("regression metrics report a zero train baseline")
{
    Rng rng(4);
    Dataset data;
    data.objective = Objective::regress;
    data.x = Matrix(150, 3);
    for (std::size_t r = 0; r < 150; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            data.x(r, c) = rng.normal();
        }
        data.y.push_back(5.0 * data.x(r, 0) + rng.normal());
    }
    ModelSpec spec;
    spec.forest.criterion = Criterion::variance;
    spec.forest.n_trees = 30;
    const auto cv = kfold_eval(spec, data, 5, 1, regression_metrics);
    for (const auto& f : cv.folds) {
        CHECK(std::abs(*f.at("baseline_train_r2")) < 1e-12);
        CHECK(*f.at("baseline_r2") <= 0.0);
    }
    CHECK(cv.summary.at("r2").mean > 0.8);
}

TEST_CASE("top-1 accuracy and its tie-break")
{
    const std::vector<std::size_t> groups{0, 0, 0, 1, 1, 1};
    const std::vector<double> tied(6, 0.5);
    CHECK(top1_accuracy(tied, groups, std::vector<double>{1, 0, 0, 1, 0, 0}) == 1.0);
    CHECK(top1_accuracy(tied, groups, std::vector<double>{0, 1, 0, 0, 0, 1}) == 0.0);
    const std::vector<double> scores{0.1, 0.9, 0.9, 0.3, 0.2, 0.1};
    CHECK(top1_accuracy(scores, groups, std::vector<double>{0, 1, 0, 0, 1, 0}) == 0.5);

    // Uniform random scores over many rings of 11 converge to 1/11.
    Rng rng(12);
    std::vector<double> s;
    std::vector<std::size_t> g;
    std::vector<double> y;
    for (std::size_t ring = 0; ring < 20'000; ++ring) {
        const auto real = rng.uniform_below(11);
        for (std::size_t k = 0; k < 11; ++k) {
            s.push_back(rng.uniform01());
            g.push_back(ring);
            y.push_back(k == real ? 1.0 : 0.0);
        }
    }
    const double acc = top1_accuracy(s, g, y);
    const auto band = wilson_interval(static_cast<std::size_t>(std::lround(acc * 20'000)), 20'000);
    CHECK(band.low <= 1.0 / 11.0);
    CHECK(band.high >= 1.0 / 11.0);
}

TEST_CASE("random search")
{
    const auto data = signal_data(120, 5);
    SearchSpec search;
    search.metric = "accuracy";
    search.folds = 3;
    search.seed = 4;

    SUBCASE("budget one is a single kfold_eval of the base spec")
    {
        const auto result = random_search(small_forest(), data, search, classification_metrics);
        REQUIRE(result.trials.size() == 1);
        CHECK(result.best == 0);
        CHECK(result.trials[0].spec == small_forest());
        const auto cv = kfold_eval(small_forest(), data, 3, 4, classification_metrics);
        CHECK(result.trials[0].score == cv.summary.at("accuracy").mean);
    }
    SUBCASE("the best trial dominates the log")
    {
        search.budget = 4;
        auto base = small_forest();
        base.forest.n_trees = 10;
        const auto result = random_search(base, data, search, classification_metrics);
        REQUIRE(result.trials.size() == 4);
        for (const auto& t : result.trials) {
            CHECK(result.best_trial().score >= t.score);
            CHECK(t.spec.forest.n_trees >= 10);
        }
    }
    SUBCASE("diverged trials are logged and never win")
    {
        Dataset reg = data;
        reg.objective = Objective::regress;
        for (std::size_t r = 0; r < reg.y.size(); ++r) {
            reg.y[r] = reg.x(r, 0) + reg.x(r, 2);
        }
        search.budget = 3;
        search.metric = "r2";
        ModelSpec base;
        base.kind = ModelKind::mlp;
        base.mlp.learning_rate = 1e3;
        base.mlp.epochs = 3;
        const auto result = random_search(base, reg, search, regression_metrics);
        REQUIRE(result.trials[0].error.has_value());
        CHECK(result.trials[0].error->find("Diverged") != std::string::npos);
        CHECK(result.best != 0);
        CHECK_FALSE(result.best_trial().error.has_value());
    }
    SUBCASE("invalid settings")
    {
        search.budget = 0;
        CHECK_THROWS_AS(random_search(small_forest(), data, search, classification_metrics), Error);
        search.budget = 1;
        search.metric = "auc";
        CHECK_THROWS_AS(random_search(small_forest(), data, search, classification_metrics), Error);
    }
}

TEST_CASE("sampled hyperparameters stay in range")
{
    ModelSpec mlp;
    mlp.kind = ModelKind::mlp;
    ModelSpec forest;
    ModelSpec linear;
    linear.kind = ModelKind::linear;
    Rng rng(1);
    std::set<std::size_t> hidden;
    bool unlimited = false;
    for (int i = 0; i < 500; ++i) {
        const auto m = sample_spec(mlp, rng);
        CHECK(m.kind == ModelKind::mlp);
        CHECK(m.mlp.hidden_units >= 10);
        CHECK(m.mlp.hidden_units <= 30);
        hidden.insert(m.mlp.hidden_units);
        CHECK(m.mlp.learning_rate >= 1e-4);
        CHECK(m.mlp.learning_rate <= 1e-1);

        const auto f = sample_spec(forest, rng);
        CHECK(f.forest.n_trees >= 50);
        CHECK(f.forest.n_trees <= 500);
        if (f.forest.max_depth) {
            CHECK(*f.forest.max_depth >= 3);
            CHECK(*f.forest.max_depth <= 20);
        } else {
            unlimited = true;
        }
        CHECK(f.forest.min_samples_split >= 2);
        CHECK(f.forest.criterion != Criterion::variance);

        const auto l = sample_spec(linear, rng);
        CHECK(l.linear.epsilon > 0.0);
        CHECK(l.linear.l2 > 0.0);
    }
    CHECK(hidden.size() == 21);
    CHECK(unlimited);

    ModelSpec reg;
    reg.forest.criterion = Criterion::variance;
    CHECK(sample_spec(reg, rng).forest.criterion == Criterion::variance);
}

TEST_CASE("model spec json round trip")
{
    ModelSpec spec;
    spec.forest.max_depth = 7;
    spec.forest.max_features = {MaxFeatures::Kind::fraction, 0.25};
    CHECK(model_spec_from_json(to_json(spec)) == spec);
    spec.kind = ModelKind::mlp;
    spec.mlp.hidden_units = 13;
    CHECK(model_spec_from_json(to_json(spec)).mlp == spec.mlp);
    CHECK(parse_model_kind("svr") == ModelKind::linear);
}
