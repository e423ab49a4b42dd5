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

#include "ringtrace/ml/model.hpp"

#include <cmath>
#include <string>

#include "ringtrace/error.hpp"

namespace ringtrace::ml {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::forest: return "forest";
    case ModelKind::mlp: return "mlp";
    case ModelKind::linear: return "linear";
    }
    return "forest";
}

ModelKind parse_model_kind(const std::string& name)
{
    if (name == "forest") {
        return ModelKind::forest;
    }
    if (name == "mlp") {
        return ModelKind::mlp;
    }
    if (name == "linear" || name == "svr") {
        return ModelKind::linear;
    }
    fail(ErrorCode::InvalidArgument, "unknown model '" + name + "' (forest, mlp, linear)");
}

ModelSpec with_seed(ModelSpec spec, std::uint64_t seed)
{
    spec.forest.seed = seed;
    spec.mlp.seed = seed;
    spec.linear.seed = seed;
    return spec;
}

Json to_json(const ModelSpec& spec)
{
    Json out{{"model", to_string(spec.kind)}};
    switch (spec.kind) {
    case ModelKind::forest: {
        const auto& f = spec.forest;
        out["n_trees"] = f.n_trees;
        out["max_depth"] = f.max_depth ? Json(*f.max_depth) : Json(nullptr);
        out["max_features"] = to_string(f.max_features);
        out["min_samples_split"] = f.min_samples_split;
        out["criterion"] = to_string(f.criterion);
        out["balanced_class_weight"] = f.balanced_class_weight;
        out["bootstrap"] = f.bootstrap;
        out["max_bins"] = f.max_bins;
        out["seed"] = f.seed;
        break;
    }
    case ModelKind::mlp: {
        const auto& m = spec.mlp;
        out["hidden_units"] = m.hidden_units;
        out["learning_rate"] = m.learning_rate;
        out["epochs"] = m.epochs;
        out["batch_size"] = m.batch_size;
        out["balanced_class_weight"] = m.balanced_class_weight;
        out["seed"] = m.seed;
        break;
    }
    case ModelKind::linear: {
        const auto& l = spec.linear;
        out["epsilon"] = l.epsilon;
        out["learning_rate"] = l.learning_rate;
        out["l2"] = l.l2;
        out["epochs"] = l.epochs;
        out["batch_size"] = l.batch_size;
        out["seed"] = l.seed;
        break;
    }
    }
    return out;
}

namespace {

template <typename T>
void optional_field(const Json& json, const char* key, T& target)
{
    if (json.contains(key)) {
        target = field<T>(json, key, "model");
    }
}

}  // namespace

ModelSpec model_spec_from_json(const Json& json)
{
    ModelSpec spec;
    spec.kind = parse_model_kind(field<std::string>(json, "model", "model"));
    switch (spec.kind) {
    case ModelKind::forest: {
        auto& f = spec.forest;
        optional_field(json, "n_trees", f.n_trees);
        if (json.contains("max_depth") && !json["max_depth"].is_null()) {
            f.max_depth = field<std::size_t>(json, "max_depth", "model");
        }
        if (json.contains("max_features")) {
            f.max_features = parse_max_features(field<std::string>(json, "max_features", "model"));
        }
        optional_field(json, "min_samples_split", f.min_samples_split);
        if (json.contains("criterion")) {
            f.criterion = parse_criterion(field<std::string>(json, "criterion", "model"));
        }
        optional_field(json, "balanced_class_weight", f.balanced_class_weight);
        optional_field(json, "bootstrap", f.bootstrap);
        optional_field(json, "max_bins", f.max_bins);
        optional_field(json, "seed", f.seed);
        check(f);
        break;
    }
    case ModelKind::mlp: {
        auto& m = spec.mlp;
        optional_field(json, "hidden_units", m.hidden_units);
        optional_field(json, "learning_rate", m.learning_rate);
        optional_field(json, "epochs", m.epochs);
        optional_field(json, "batch_size", m.batch_size);
        optional_field(json, "balanced_class_weight", m.balanced_class_weight);
        optional_field(json, "seed", m.seed);
        check(m);
        break;
    }
    case ModelKind::linear: {
        auto& l = spec.linear;
        optional_field(json, "epsilon", l.epsilon);
        optional_field(json, "learning_rate", l.learning_rate);
        optional_field(json, "l2", l.l2);
        optional_field(json, "epochs", l.epochs);
        optional_field(json, "batch_size", l.batch_size);
        optional_field(json, "seed", l.seed);
        check(l);
        break;
    }
    }
    return spec;
}

namespace {

std::vector<int> as_labels(std::span<const double> y)
{
    std::vector<int> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != std::floor(y[i])) {
            fail(ErrorCode::InvalidArgument, "classification labels must be integers");
        }
        out[i] = static_cast<int>(y[i]);
    }
    return out;
}

}  // namespace

Model Model::fit(const ModelSpec& spec, Objective objective, const Matrix& x, std::span<const double> y,
                 std::size_t jobs)
{
    Model model;
    model.objective_ = objective;
    const bool classify = objective == Objective::classify;
    switch (spec.kind) {
    case ModelKind::forest:
        if (classify) {
            const auto labels = as_labels(y);
            model.impl_ = train_forest_classifier(x, labels, spec.forest, jobs);
        } else {
            model.impl_ = train_forest_regressor(x, y, spec.forest, jobs);
        }
        break;
    case ModelKind::mlp:
        if (classify) {
            const auto labels = as_labels(y);
            model.impl_ = train_mlp_classifier(x, labels, spec.mlp);
        } else {
            model.impl_ = train_mlp_regressor(x, y, spec.mlp);
        }
        break;
    case ModelKind::linear:
        if (classify) {
            fail(ErrorCode::InvalidArgument, "the linear model is a regressor");
        }
        model.impl_ = train_linear(x, y, spec.linear);
        break;
    }
    return model;
}

const std::vector<int>& Model::classes() const
{
    static const std::vector<int> none;
    if (const auto* f = std::get_if<ForestModel>(&impl_)) {
        return f->classes();
    }
    if (const auto* m = std::get_if<MlpModel>(&impl_)) {
        return m->classes();
    }
    return none;
}

Matrix Model::predict_proba(const Matrix& x) const
{
    if (const auto* f = std::get_if<ForestModel>(&impl_)) {
        return f->predict_proba(x);
    }
    if (const auto* m = std::get_if<MlpModel>(&impl_)) {
        return m->predict_proba(x);
    }
    fail(ErrorCode::InvalidArgument, "predict_proba needs a classifier");
}

std::vector<double> Model::predict(const Matrix& x) const
{
    return std::visit([&](const auto& m) { return m.predict(x); }, impl_);
}

std::optional<FeatureImportance> Model::importance() const
{
    if (const auto* f = std::get_if<ForestModel>(&impl_)) {
        return f->importance();
    }
    return std::nullopt;
}

std::vector<std::string> Model::warnings() const
{
    if (const auto* f = std::get_if<ForestModel>(&impl_)) {
        return f->warnings();
    }
    return {};
}

}  // namespace ringtrace::ml
