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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ringtrace/json_io.hpp"
#include "ringtrace/matrix.hpp"
#include "ringtrace/ml/forest.hpp"
#include "ringtrace/ml/linear.hpp"
#include "ringtrace/ml/mlp.hpp"

namespace ringtrace::ml {

enum class ModelKind { forest, mlp, linear };
enum class Objective { classify, regress };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// One model family plus its hyperparameters. Only the block matching
/// `kind` is used; the others keep their defaults.
struct ModelSpec {
    ModelKind kind = ModelKind::forest;
    ForestHyperParams forest;
    MlpHyperParams mlp;
    LinearHyperParams linear;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Same spec with every seed replaced by `seed`.
ModelSpec with_seed(ModelSpec spec, std::uint64_t seed);

/// Only the active family's parameters are written.
Json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const Json& json);

class Model {
public:
    /// Classification labels are read as integers from `y`.
    static Model fit(const ModelSpec& spec, Objective objective, const Matrix& x, std::span<const double> y,
                     std::size_t jobs = 1);

    [[nodiscard]] Objective objective() const noexcept { return objective_; }
    [[nodiscard]] const std::vector<int>& classes() const;

    /// Classification only: rows x classes() probabilities.
    [[nodiscard]] Matrix predict_proba(const Matrix& x) const;
    /// Labels for classification, values for regression.
    [[nodiscard]] std::vector<double> predict(const Matrix& x) const;

    /// Forest models only.
    [[nodiscard]] std::optional<FeatureImportance> importance() const;
    [[nodiscard]] std::vector<std::string> warnings() const;

private:
    Objective objective_ = Objective::classify;
    std::variant<ForestModel, MlpModel, LinearModel> impl_;
};

}  // namespace ringtrace::ml
