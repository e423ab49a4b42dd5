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
#include <optional>
#include <span>
#include <vector>

namespace ringtrace::ml {

/// 1 - SS_res / SS_tot with the mean of `y` as reference.
/// Throws ConstantTarget when y has no spread, InvalidArgument on bad sizes.
double r_squared(std::span<const double> y, std::span<const double> y_hat);

struct ClassMetrics {
    int label = 0;
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    std::size_t support = 0;           // occurrences in y_true
    std::optional<double> precision;  // missing when the class is never predicted
    std::optional<double> recall;     // missing when the class never occurs
};

/// Per-class precision/recall over the sorted union of labels seen in either vector.
std::vector<ClassMetrics> precision_recall(std::span<const int> y_true, std::span<const int> y_pred);

/// Same, restricted to an explicit class list (labels outside it count as other).
std::vector<ClassMetrics> precision_recall(std::span<const int> y_true, std::span<const int> y_pred,
                                           std::span<const int> classes);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// Index of the first maximum. Empty input throws InvalidArgument.
std::size_t argmax(std::span<const double> values);

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation; 0 for a single value
    std::size_t n = 0;
};

/// Skips missing entries. An all-missing input yields n == 0.
Summary summarize(std::span<const std::optional<double>> values);
Summary summarize(std::span<const double> values);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

}  // namespace ringtrace::ml
