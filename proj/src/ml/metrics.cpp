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

#include "ringtrace/ml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ringtrace/error.hpp"

namespace ringtrace::ml {

double r_squared(std::span<const double> y, std::span<const double> y_hat)
{
    if (y.size() != y_hat.size()) {
        fail(ErrorCode::InvalidArgument, "r_squared: size mismatch");
    }
    if (y.size() < 2) {
        fail(ErrorCode::TooFewSamples, "r_squared needs at least two targets");
    }
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) {
        fail(ErrorCode::ConstantTarget, "r_squared: target is constant");
    }
    return 1.0 - ss_res / ss_tot;
}

std::vector<ClassMetrics> precision_recall(std::span<const int> y_true, std::span<const int> y_pred,
                                           std::span<const int> classes)
{
    if (y_true.size() != y_pred.size()) {
        fail(ErrorCode::InvalidArgument, "precision_recall: size mismatch");
    }
    std::vector<ClassMetrics> out;
    out.reserve(classes.size());
    for (int label : classes) {
        ClassMetrics m;
        m.label = label;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            const bool actual = y_true[i] == label;
            const bool predicted = y_pred[i] == label;
            m.support += actual ? 1 : 0;
            m.true_positive += (actual && predicted) ? 1 : 0;
            m.false_positive += (!actual && predicted) ? 1 : 0;
            m.false_negative += (actual && !predicted) ? 1 : 0;
        }
        if (m.true_positive + m.false_positive > 0) {
            m.precision = static_cast<double>(m.true_positive) /
                          static_cast<double>(m.true_positive + m.false_positive);
        }
        if (m.support > 0) {
            m.recall = static_cast<double>(m.true_positive) / static_cast<double>(m.support);
        }
        out.push_back(m);
    }
    return out;
}

std::vector<ClassMetrics> precision_recall(std::span<const int> y_true, std::span<const int> y_pred)
{
    std::set<int> labels(y_true.begin(), y_true.end());
    labels.insert(y_pred.begin(), y_pred.end());
    const std::vector<int> classes(labels.begin(), labels.end());
    return precision_recall(y_true, y_pred, classes);
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred)
{
    if (y_true.size() != y_pred.size() || y_true.empty()) {
        fail(ErrorCode::InvalidArgument, "accuracy: sizes must match and be non-zero");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        hits += y_true[i] == y_pred[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

std::size_t argmax(std::span<const double> values)
{
    if (values.empty()) {
        fail(ErrorCode::InvalidArgument, "argmax of an empty range");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.n = values.size();
    if (s.n == 0) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

Summary summarize(std::span<const std::optional<double>> values)
{
    std::vector<double> present;
    for (const auto& v : values) {
        if (v) {
            present.push_back(*v);
        }
    }
    return summarize(std::span<const double>(present));
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z)
{
    if (trials == 0 || successes > trials) {
        fail(ErrorCode::InvalidArgument, "wilson_interval: need 0 <= successes <= trials, trials > 0");
    }
    const auto n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace ringtrace::ml
