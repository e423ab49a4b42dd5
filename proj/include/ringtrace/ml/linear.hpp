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

/// Linear regressor with epsilon-insensitive loss, fit by minibatch
/// subgradient descent on standardized targets.
struct LinearHyperParams {
    double epsilon = 0.1;  // in target standard deviations
    double learning_rate = 0.01;
    double l2 = 1e-4;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;

    friend bool operator==(const LinearHyperParams&, const LinearHyperParams&) = default;
};

void check(const LinearHyperParams& hp);

class LinearModel {
public:
    [[nodiscard]] std::vector<double> predict(const Matrix& x) const;
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return w_; }
    [[nodiscard]] double bias() const noexcept { return b_; }

private:
    friend LinearModel train_linear(const Matrix&, std::span<const double>, const LinearHyperParams&);

    std::vector<double> w_;
    double b_ = 0.0;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
};

/// Throws ConstantTarget when y has no spread, Diverged on a non-finite loss.
LinearModel train_linear(const Matrix& x, std::span<const double> y, const LinearHyperParams& hp);

}  // namespace ringtrace::ml
