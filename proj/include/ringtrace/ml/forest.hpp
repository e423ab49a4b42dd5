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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringtrace/matrix.hpp"

namespace ringtrace::ml {

enum class Criterion { gini, entropy, variance };

std::string to_string(Criterion criterion);
Criterion parse_criterion(const std::string& name);

struct MaxFeatures {
    enum class Kind { sqrt, fraction };
    Kind kind = Kind::sqrt;
    double fraction = 1.0;

    /// Features examined per node for `p` columns; at least 1.
    [[nodiscard]] std::size_t resolve(std::size_t p) const;

    friend bool operator==(const MaxFeatures&, const MaxFeatures&) = default;
};

std::string to_string(const MaxFeatures& mf);
MaxFeatures parse_max_features(const std::string& text);

struct ForestHyperParams {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_depth;  // nullopt: grow until pure
    MaxFeatures max_features;
    std::size_t min_samples_split = 2;
    Criterion criterion = Criterion::gini;
    std::uint64_t seed = 0;
    bool balanced_class_weight = false;
    bool bootstrap = true;
    std::size_t max_bins = 256;

    friend bool operator==(const ForestHyperParams&, const ForestHyperParams&) = default;
};

/// Throws InvalidArgument when a field is out of range.
void check(const ForestHyperParams& hp);

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // x <= threshold goes left
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t value = 0;  // offset into Tree::values for leaves
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<double> values;  // class distribution (classification) or mean (regression) per leaf
    std::vector<double> gain;    // impurity decrease per feature
};

struct FeatureImportance {
    std::vector<double> weights;  // non-negative, sums to 1 when has_splits
    bool has_splits = false;
};

class ForestModel {
public:
    [[nodiscard]] bool is_classifier() const noexcept { return !classes_.empty(); }
    [[nodiscard]] const std::vector<int>& classes() const noexcept { return classes_; }
    [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
    [[nodiscard]] const std::vector<Tree>& trees() const noexcept { return trees_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// rows x classes().size() averaged leaf distributions.
    [[nodiscard]] Matrix predict_proba(const Matrix& x) const;
    /// Class labels (argmax, lowest index on ties) or regression means.
    [[nodiscard]] std::vector<double> predict(const Matrix& x) const;

    [[nodiscard]] FeatureImportance importance() const;

private:
    friend ForestModel train_forest_classifier(const Matrix&, std::span<const int>, const ForestHyperParams&,
                                               std::size_t);
    friend ForestModel train_forest_regressor(const Matrix&, std::span<const double>, const ForestHyperParams&,
                                              std::size_t);

    std::vector<int> classes_;
    std::size_t n_features_ = 0;
    std::vector<Tree> trees_;
    std::vector<std::string> warnings_;
};

/// Single-class labels produce a constant model and a warning.
ForestModel train_forest_classifier(const Matrix& x, std::span<const int> y, const ForestHyperParams& hp,
                                    std::size_t jobs = 1);
ForestModel train_forest_regressor(const Matrix& x, std::span<const double> y, const ForestHyperParams& hp,
                                   std::size_t jobs = 1);

/// Mean impurity decrease per feature. A model without any split returns
/// a zero vector with has_splits == false rather than throwing.
FeatureImportance feature_importance(const ForestModel& model);

}  // namespace ringtrace::ml
