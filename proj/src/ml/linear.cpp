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

#include "ringtrace/ml/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ringtrace/csv.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::ml {

void check(const LinearHyperParams& hp)
{
    if (!(hp.epsilon >= 0.0) || !(hp.learning_rate > 0.0) || !(hp.l2 >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "linear model needs epsilon >= 0, learning_rate > 0, l2 >= 0");
    }
    if (hp.epochs < 1 || hp.batch_size < 1) {
        fail(ErrorCode::InvalidArgument, "epochs and batch_size must be >= 1");
    }
}

LinearModel train_linear(const Matrix& x, std::span<const double> y, const LinearHyperParams& hp)
{
    check(hp);
    if (x.rows != y.size() || x.rows < 2) {
        fail(ErrorCode::InvalidArgument, "linear model needs matching rows and at least two samples");
    }
    LinearModel model;
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) {
        ss += (v - mean) * (v - mean);
    }
    if (ss == 0.0) {
        fail(ErrorCode::ConstantTarget, "linear model: target is constant");
    }
    model.y_mean_ = mean;
    model.y_scale_ = std::sqrt(ss / static_cast<double>(y.size()));
    model.w_.assign(x.cols, 0.0);

    Rng rng = Rng::stream(hp.seed, 2);
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad(x.cols);
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
            const std::size_t stop = std::min(order.size(), start + hp.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            double loss = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const auto row = x.row(order[k]);
                const double target = (y[order[k]] - model.y_mean_) / model.y_scale_;
                const double e = std::inner_product(row.begin(), row.end(), model.w_.begin(), model.b_) - target;
                if (std::abs(e) <= hp.epsilon) {
                    continue;
                }
                loss += std::abs(e) - hp.epsilon;
                const double s = e > 0.0 ? 1.0 : -1.0;
                for (std::size_t c = 0; c < x.cols; ++c) {
                    grad[c] += s * row[c];
                }
                grad_b += s;
            }
            if (!std::isfinite(loss)) {
                fail(ErrorCode::Diverged, "linear model loss became non-finite at learning_rate " +
                                              csv::format_double(hp.learning_rate));
            }
            const double n = static_cast<double>(stop - start);
            for (std::size_t c = 0; c < x.cols; ++c) {
                model.w_[c] -= hp.learning_rate * (grad[c] / n + hp.l2 * model.w_[c]);
            }
            model.b_ -= hp.learning_rate * grad_b / n;
        }
    }
    return model;
}

std::vector<double> LinearModel::predict(const Matrix& x) const
{
    if (x.cols != w_.size()) {
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(w_.size()) + " feature columns");
    }
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        out[r] = std::inner_product(row.begin(), row.end(), w_.begin(), b_) * y_scale_ + y_mean_;
    }
    return out;
}

}  // namespace ringtrace::ml
