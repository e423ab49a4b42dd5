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
#include <span>
#include <vector>

#include "ringtrace/matrix.hpp"

namespace ringtrace::ml {

struct MlpHyperParams {
    std::size_t hidden_units = 20;
    double learning_rate = 0.01;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    bool balanced_class_weight = false;

    friend bool operator==(const MlpHyperParams&, const MlpHyperParams&) = default;
};

void check(const MlpHyperParams& hp);

/// input -> ReLU(hidden) -> softmax (outputs > 1 classes) or linear (regression).
/// All weights live in one flat vector: W1 (hidden x inputs), b1, W2 (outputs x hidden), b2.
struct MlpNetwork {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;
    bool classify = false;
    std::vector<double> params;

    MlpNetwork() = default;
    MlpNetwork(std::size_t in, std::size_t hid, std::size_t out, bool classification);

    [[nodiscard]] std::size_t param_count() const noexcept { return hidden * inputs + hidden + outputs * hidden + outputs; }

    /// He-style initialisation from `seed`.
    void initialize(std::uint64_t seed);

    /// Raw outputs (logits or regression value) for each row.
    [[nodiscard]] Matrix forward(const Matrix& x) const;

    /// Weighted mean loss over `rows` of x. Targets are class indices
    /// (classification) or values (regression). Adds d loss / d params into
    /// `grad` when it is non-null (grad is resized and zeroed first).
    double loss(const Matrix& x, std::span<const double> targets, std::span<const double> weights,
                std::span<const std::size_t> rows, std::vector<double>* grad) const;
};

class MlpModel {
public:
    [[nodiscard]] bool is_classifier() const noexcept { return !classes_.empty(); }
    [[nodiscard]] const std::vector<int>& classes() const noexcept { return classes_; }
    [[nodiscard]] const MlpNetwork& network() const noexcept { return net_; }
    [[nodiscard]] const std::vector<double>& loss_curve() const noexcept { return loss_curve_; }

    [[nodiscard]] Matrix predict_proba(const Matrix& x) const;
    [[nodiscard]] std::vector<double> predict(const Matrix& x) const;

private:
    friend MlpModel train_mlp_classifier(const Matrix&, std::span<const int>, const MlpHyperParams&);
    friend MlpModel train_mlp_regressor(const Matrix&, std::span<const double>, const MlpHyperParams&);

    MlpNetwork net_;
    std::vector<int> classes_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    std::vector<double> loss_curve_;
};

/// Minibatch SGD. Throws Diverged naming the learning rate if the loss
/// becomes non-finite.
MlpModel train_mlp_classifier(const Matrix& x, std::span<const int> y, const MlpHyperParams& hp);
MlpModel train_mlp_regressor(const Matrix& x, std::span<const double> y, const MlpHyperParams& hp);

}  // namespace ringtrace::ml
