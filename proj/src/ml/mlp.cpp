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

#include "ringtrace/ml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "ringtrace/csv.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::ml {

void check(const MlpHyperParams& hp)
{
    if (hp.hidden_units < 1) {
        fail(ErrorCode::InvalidArgument, "hidden_units must be >= 1");
    }
    if (!(hp.learning_rate > 0.0) || !std::isfinite(hp.learning_rate)) {
        fail(ErrorCode::InvalidArgument, "learning_rate must be positive");
    }
    if (hp.epochs < 1 || hp.batch_size < 1) {
        fail(ErrorCode::InvalidArgument, "epochs and batch_size must be >= 1");
    }
}

MlpNetwork::MlpNetwork(std::size_t in, std::size_t hid, std::size_t out, bool classification)
    : inputs(in), hidden(hid), outputs(out), classify(classification), params(param_count(), 0.0)
{
}

void MlpNetwork::initialize(std::uint64_t seed)
{
    Rng rng(seed);
    params.assign(param_count(), 0.0);
    const double s1 = std::sqrt(2.0 / static_cast<double>(inputs));
    const double s2 = std::sqrt(1.0 / static_cast<double>(hidden));
    for (std::size_t i = 0; i < hidden * inputs; ++i) {
        params[i] = rng.normal() * s1;
    }
    const std::size_t w2 = hidden * inputs + hidden;
    for (std::size_t i = 0; i < outputs * hidden; ++i) {
        params[w2 + i] = rng.normal() * s2;
    }
}

namespace {

struct Layout {
    std::size_t w1;
    std::size_t b1;
    std::size_t w2;
    std::size_t b2;
};

Layout layout(const MlpNetwork& net)
{
    const std::size_t b1 = net.hidden * net.inputs;
    const std::size_t w2 = b1 + net.hidden;
    return {0, b1, w2, w2 + net.outputs * net.hidden};
}

// Hidden activations and raw outputs for one row.
void forward_row(const MlpNetwork& net, std::span<const double> x, std::vector<double>& h, std::vector<double>& z)
{
    const auto at = layout(net);
    const double* p = net.params.data();
    h.resize(net.hidden);
    z.resize(net.outputs);
    for (std::size_t j = 0; j < net.hidden; ++j) {
        const double* w = p + at.w1 + j * net.inputs;
        double a = p[at.b1 + j];
        for (std::size_t i = 0; i < net.inputs; ++i) {
            a += w[i] * x[i];
        }
        h[j] = a > 0.0 ? a : 0.0;
    }
    for (std::size_t o = 0; o < net.outputs; ++o) {
        const double* w = p + at.w2 + o * net.hidden;
        double a = p[at.b2 + o];
        for (std::size_t j = 0; j < net.hidden; ++j) {
            a += w[j] * h[j];
        }
        z[o] = a;
    }
}

void softmax(std::vector<double>& z)
{
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : z) {
        v /= sum;
    }
}

}  // namespace

Matrix MlpNetwork::forward(const Matrix& x) const
{
    if (x.cols != inputs) {
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(inputs) + " input columns");
    }
    Matrix out(x.rows, outputs);
    std::vector<double> h;
    std::vector<double> z;
    for (std::size_t r = 0; r < x.rows; ++r) {
        forward_row(*this, x.row(r), h, z);
        std::copy(z.begin(), z.end(), out.row(r).begin());
    }
    return out;
}

double MlpNetwork::loss(const Matrix& x, std::span<const double> targets, std::span<const double> weights,
                        std::span<const std::size_t> rows, std::vector<double>* grad) const
{
    const auto at = layout(*this);
    if (grad != nullptr) {
        grad->assign(param_count(), 0.0);
    }
    std::vector<double> h;
    std::vector<double> z;
    std::vector<double> dz(outputs);
    std::vector<double> dh(hidden);
    double total = 0.0;
    double weight_sum = 0.0;
    for (std::size_t r : rows) {
        const auto xr = x.row(r);
        const double w = weights.empty() ? 1.0 : weights[r];
        forward_row(*this, xr, h, z);
        if (classify) {
            const auto target = static_cast<std::size_t>(targets[r]);
            const double m = *std::max_element(z.begin(), z.end());
            double sum = 0.0;
            for (double v : z) {
                sum += std::exp(v - m);
            }
            total += w * (m + std::log(sum) - z[target]);
            softmax(z);
            for (std::size_t o = 0; o < outputs; ++o) {
                dz[o] = w * (z[o] - (o == target ? 1.0 : 0.0));
            }
        } else {
            const double e = z[0] - targets[r];
            total += w * 0.5 * e * e;
            dz[0] = w * e;
        }
        weight_sum += w;
        if (grad == nullptr) {
            continue;
        }
        double* g = grad->data();
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t o = 0; o < outputs; ++o) {
            const double* w2 = params.data() + at.w2 + o * hidden;
            double* g2 = g + at.w2 + o * hidden;
            for (std::size_t j = 0; j < hidden; ++j) {
                g2[j] += dz[o] * h[j];
                dh[j] += dz[o] * w2[j];
            }
            g[at.b2 + o] += dz[o];
        }
        for (std::size_t j = 0; j < hidden; ++j) {
            if (h[j] <= 0.0) {
                continue;
            }
            double* g1 = g + at.w1 + j * inputs;
            for (std::size_t i = 0; i < inputs; ++i) {
                g1[i] += dh[j] * xr[i];
            }
            g[at.b1 + j] += dh[j];
        }
    }
    if (weight_sum <= 0.0) {
        return 0.0;
    }
    if (grad != nullptr) {
        for (double& v : *grad) {
            v /= weight_sum;
        }
    }
    return total / weight_sum;
}

namespace {

std::vector<double> sgd(MlpNetwork& net, const Matrix& x, std::span<const double> targets,
                        std::span<const double> weights, const MlpHyperParams& hp)
{
    Rng rng = Rng::stream(hp.seed, 1);
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> grad;
    std::vector<double> curve;
    auto diverged = [&]() {
        fail(ErrorCode::Diverged, "training loss became non-finite at learning_rate " +
                                      csv::format_double(hp.learning_rate));
    };
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
            const std::size_t stop = std::min(order.size(), start + hp.batch_size);
            const double batch_loss =
                net.loss(x, targets, weights, std::span<const std::size_t>(order).subspan(start, stop - start), &grad);
            if (!std::isfinite(batch_loss)) {
                diverged();
            }
            for (std::size_t i = 0; i < grad.size(); ++i) {
                net.params[i] -= hp.learning_rate * grad[i];
            }
        }
        const double epoch_loss = net.loss(x, targets, weights, order, nullptr);
        if (!std::isfinite(epoch_loss)) {
            diverged();
        }
        curve.push_back(epoch_loss);
    }
    return curve;
}

void check_rows(const Matrix& x, std::size_t n)
{
    if (x.rows != n) {
        fail(ErrorCode::InvalidArgument, "feature rows and labels differ in length");
    }
    if (x.rows < 2 || x.cols == 0) {
        fail(ErrorCode::TooFewSamples, "MLP training needs at least two samples and one feature");
    }
}

}  // namespace

MlpModel train_mlp_classifier(const Matrix& x, std::span<const int> y, const MlpHyperParams& hp)
{
    check(hp);
    check_rows(x, y.size());
    MlpModel model;
    std::map<int, std::size_t> freq;
    for (int label : y) {
        ++freq[label];
    }
    for (const auto& [label, n] : freq) {
        model.classes_.push_back(label);
    }
    const std::size_t k = model.classes_.size();
    std::vector<double> targets(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        targets[i] = static_cast<double>(std::lower_bound(model.classes_.begin(), model.classes_.end(), y[i]) -
                                         model.classes_.begin());
    }
    std::vector<double> weights;
    if (hp.balanced_class_weight) {
        weights.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            weights[i] = static_cast<double>(y.size()) / (static_cast<double>(k) * static_cast<double>(freq[y[i]]));
        }
    }
    // A single class still gets a two-logit head so predict_proba has a shape.
    model.net_ = MlpNetwork(x.cols, hp.hidden_units, std::max<std::size_t>(k, 2), true);
    model.net_.initialize(hp.seed);
    model.loss_curve_ = sgd(model.net_, x, targets, weights, hp);
    return model;
}

MlpModel train_mlp_regressor(const Matrix& x, std::span<const double> y, const MlpHyperParams& hp)
{
    check(hp);
    check_rows(x, y.size());
    MlpModel model;
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(y.size()));
    model.y_mean_ = mean;
    model.y_scale_ = sd > 0.0 ? sd : 1.0;
    std::vector<double> targets(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        targets[i] = (y[i] - model.y_mean_) / model.y_scale_;
    }
    model.net_ = MlpNetwork(x.cols, hp.hidden_units, 1, false);
    model.net_.initialize(hp.seed);
    model.loss_curve_ = sgd(model.net_, x, targets, {}, hp);
    return model;
}

Matrix MlpModel::predict_proba(const Matrix& x) const
{
    if (!is_classifier()) {
        fail(ErrorCode::InvalidArgument, "predict_proba needs a classification MLP");
    }
    Matrix logits = net_.forward(x);
    Matrix out(x.rows, classes_.size());
    std::vector<double> z(net_.outputs);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = logits.row(r);
        z.assign(row.begin(), row.end());
        softmax(z);
        std::copy_n(z.begin(), classes_.size(), out.row(r).begin());
    }
    return out;
}

std::vector<double> MlpModel::predict(const Matrix& x) const
{
    std::vector<double> out(x.rows);
    if (is_classifier()) {
        const auto proba = predict_proba(x);
        for (std::size_t r = 0; r < x.rows; ++r) {
            const auto row = proba.row(r);
            out[r] = classes_[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())];
        }
        return out;
    }
    const auto z = net_.forward(x);
    for (std::size_t r = 0; r < x.rows; ++r) {
        out[r] = z(r, 0) * y_scale_ + y_mean_;
    }
    return out;
}

}  // namespace ringtrace::ml
