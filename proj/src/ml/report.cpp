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
#include <string>

#include "ringtrace/csv.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/ml/tasks.hpp"

namespace ringtrace::ml {

std::vector<std::pair<std::size_t, double>> importance_ranking(const FeatureImportance& importance)
{
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t c = 0; c < importance.weights.size(); ++c) {
        out.emplace_back(c, importance.weights[c]);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

namespace {

Json optional_number(const std::optional<double>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json summary_json(const Summary& s)
{
    return {{"mean", s.n > 0 ? Json(s.mean) : Json(nullptr)}, {"sd", s.n > 0 ? Json(s.sd) : Json(nullptr)}, {"n", s.n}};
}

// Metric x statistic rows with one column per class, the layout of a
// precision/recall summary table.
Json class_table(const std::map<std::string, Summary>& summary)
{
    Json rows = Json::array();
    for (const std::string metric : {"precision", "recall"}) {
        for (const std::string stat : {"mean", "sd"}) {
            Json classes = Json::object();
            for (const auto& [name, s] : summary) {
                if (name.rfind(metric + "_", 0) == 0) {
                    const auto label = name.substr(metric.size() + 1);
                    classes[label] = s.n > 0 ? Json(stat == "mean" ? s.mean : s.sd) : Json(nullptr);
                }
            }
            rows.push_back({{"metric", metric}, {"statistic", stat}, {"classes", classes}});
        }
    }
    return rows;
}

std::string clean_cell(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

Json to_json(const ModelReport& report)
{
    const auto& best = report.best();
    Json folds = Json::array();
    for (std::size_t f = 0; f < best.cv.folds.size(); ++f) {
        Json row{{"fold", f}};
        for (const auto& [name, value] : best.cv.folds[f]) {
            row[name] = optional_number(value);
        }
        folds.push_back(row);
    }
    Json summary = Json::object();
    for (const auto& [name, s] : best.cv.summary) {
        summary[name] = summary_json(s);
    }
    Json out{{"format", "ringtrace-report"},
             {"format_version", 1},
             {"task", to_string(report.task)},
             {"metric", report.metric},
             {"samples", report.samples},
             {"feature_count", report.columns.size()},
             {"trials", report.search.trials.size()},
             {"best_trial", report.search.best},
             {"best_score", best.score},
             {"best_params", to_json(best.spec)},
             {"folds", folds},
             {"summary", summary},
             {"baseline", optional_number(report.baseline)},
             {"extras", report.extras},
             {"warnings", report.warnings}};
    if (report.task != TaskKind::value) {
        out["table"] = class_table(best.cv.summary);
    } else {
        Json rows = Json::array();
        for (const std::string name : {"r2", "baseline_r2", "baseline_train_r2"}) {
            const auto it = best.cv.summary.find(name);
            if (it != best.cv.summary.end()) {
                rows.push_back({{"metric", name}, {"mean", summary_json(it->second)["mean"]},
                                {"sd", summary_json(it->second)["sd"]}});
            }
        }
        out["table"] = rows;
    }
    if (best.cv.importance) {
        Json top = Json::array();
        const auto ranking = importance_ranking(*best.cv.importance);
        for (std::size_t i = 0; i < std::min<std::size_t>(10, ranking.size()); ++i) {
            top.push_back({{"rank", i + 1},
                           {"feature", report.columns.at(ranking[i].first)},
                           {"weight", ranking[i].second}});
        }
        out["importance"] = {{"has_splits", best.cv.importance->has_splits}, {"top", top}};
    }
    return out;
}

void write_report(const std::filesystem::path& dir, const ModelReport& report)
{
    std::filesystem::create_directories(dir);
    write_json(dir / "report.json", to_json(report), true);

    csv::Writer imp(dir / "importance.csv");
    imp.header({"rank", "feature", "weight"});
    if (const auto& importance = report.best().cv.importance; importance && importance->has_splits) {
        const auto ranking = importance_ranking(*importance);
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            imp.row(i + 1, report.columns.at(ranking[i].first), ranking[i].second);
        }
    }

    csv::Writer trials(dir / "trials.csv");
    trials.header({"trial", "model", "n_trees", "max_depth", "max_features", "min_samples_split", "criterion",
                   "hidden_units", "learning_rate", "batch_size", "epsilon", "l2", "metric", "score_mean",
                   "score_sd", "error"});
    for (const auto& t : report.search.trials) {
        const auto& s = t.spec;
        const bool forest = s.kind == ModelKind::forest;
        const bool mlp = s.kind == ModelKind::mlp;
        const bool linear = s.kind == ModelKind::linear;
        auto num = [](bool on, double v) { return on ? csv::format_double(v) : std::string{}; };
        auto count = [](bool on, std::size_t v) { return on ? std::to_string(v) : std::string{}; };
        const auto metric = t.cv.summary.find(report.metric);
        const bool scored = !t.error && metric != t.cv.summary.end() && metric->second.n > 0;
        trials.row(t.index, to_string(s.kind), count(forest, s.forest.n_trees),
                   forest ? (s.forest.max_depth ? std::to_string(*s.forest.max_depth) : std::string("none"))
                          : std::string{},
                   forest ? to_string(s.forest.max_features) : std::string{},
                   count(forest, s.forest.min_samples_split),
                   forest ? to_string(s.forest.criterion) : std::string{}, count(mlp, s.mlp.hidden_units),
                   mlp ? csv::format_double(s.mlp.learning_rate) : num(linear, s.linear.learning_rate),
                   mlp ? std::to_string(s.mlp.batch_size) : count(linear, s.linear.batch_size),
                   num(linear, s.linear.epsilon), num(linear, s.linear.l2), report.metric,
                   scored ? csv::format_double(metric->second.mean) : std::string{},
                   scored ? csv::format_double(metric->second.sd) : std::string{},
                   clean_cell(t.error.value_or("")));
    }
}

}  // namespace ringtrace::ml
