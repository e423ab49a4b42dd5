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

#include "ringtrace/ml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>

#include "binning.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/parallel.hpp"
#include "ringtrace/rng.hpp"

namespace ringtrace::ml {

std::string to_string(Criterion criterion)
{
    switch (criterion) {
    case Criterion::gini: return "gini";
    case Criterion::entropy: return "entropy";
    case Criterion::variance: return "variance";
    }
    return "gini";
}

Criterion parse_criterion(const std::string& name)
{
    if (name == "gini") {
        return Criterion::gini;
    }
    if (name == "entropy") {
        return Criterion::entropy;
    }
    if (name == "variance") {
        return Criterion::variance;
    }
    fail(ErrorCode::InvalidArgument, "unknown split criterion '" + name + "'");
}

std::size_t MaxFeatures::resolve(std::size_t p) const
{
    if (p == 0) {
        return 0;
    }
    std::size_t m = 0;
    if (kind == Kind::sqrt) {
        m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p))));
    } else {
        m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(p) - 1e-9));
    }
    return std::clamp<std::size_t>(m, 1, p);
}

std::string to_string(const MaxFeatures& mf)
{
    if (mf.kind == MaxFeatures::Kind::sqrt) {
        return "sqrt";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", mf.fraction);
    return buf;
}

MaxFeatures parse_max_features(const std::string& text)
{
    if (text == "sqrt") {
        return {};
    }
    MaxFeatures mf;
    mf.kind = MaxFeatures::Kind::fraction;
    try {
        std::size_t used = 0;
        mf.fraction = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "max_features must be 'sqrt' or a fraction, got '" + text + "'");
    }
    if (!(mf.fraction > 0.0 && mf.fraction <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "max_features fraction must be in (0, 1]");
    }
    return mf;
}

void check(const ForestHyperParams& hp)
{
    if (hp.n_trees < 1) {
        fail(ErrorCode::InvalidArgument, "n_trees must be >= 1");
    }
    if (hp.max_depth && *hp.max_depth < 1) {
        fail(ErrorCode::InvalidArgument, "max_depth must be >= 1");
    }
    if (hp.max_features.kind == MaxFeatures::Kind::fraction &&
        !(hp.max_features.fraction > 0.0 && hp.max_features.fraction <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "max_features fraction must be in (0, 1]");
    }
    if (hp.min_samples_split < 2) {
        fail(ErrorCode::InvalidArgument, "min_samples_split must be >= 2");
    }
    if (hp.max_bins < 2 || hp.max_bins > 256) {
        fail(ErrorCode::InvalidArgument, "max_bins must be in [2, 256]");
    }
}

namespace {

struct Sample {
    std::uint32_t row;
    std::uint32_t count;  // bootstrap multiplicity
    double weight;        // count times class weight
};

// Weighted impurity times node weight, so gains add up across nodes.
double class_impurity(const double* w, std::size_t k, double total, Criterion criterion)
{
    if (total <= 0.0) {
        return 0.0;
    }
    if (criterion == Criterion::entropy) {
        double h = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            if (w[i] > 0.0) {
                const double p = w[i] / total;
                h -= p * std::log2(p);
            }
        }
        return h * total;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s += w[i] * w[i];
    }
    return total - s / total;
}

double sse(double w, double wy, double wy2)
{
    if (w <= 0.0) {
        return 0.0;
    }
    return std::max(0.0, wy2 - wy * wy / w);
}

struct Split {
    bool found = false;
    std::size_t feature = 0;
    std::size_t bin = 0;
    double gain = 0.0;
};

class TreeGrower {
public:
    TreeGrower(const detail::BinnedColumns& bins, std::span<const int> cls, std::span<const double> y,
               std::size_t n_classes, const ForestHyperParams& hp)
        : bins_(bins), cls_(cls), y_(y), k_(n_classes), hp_(hp), mtry_(hp.max_features.resolve(bins.cols))
    {
        order_.resize(bins.cols);
        hist_.assign(256 * std::max<std::size_t>(k_, 3), 0.0);
        hist_w_.assign(256, 0.0);
    }

    Tree grow(std::vector<Sample> samples, Rng& rng)
    {
        Tree tree;
        tree.gain.assign(bins_.cols, 0.0);
        struct Work {
            std::uint32_t node;
            std::size_t begin;
            std::size_t end;
            std::size_t depth;
        };
        tree.nodes.emplace_back();
        std::vector<Work> stack{{0, 0, samples.size(), 0}};
        while (!stack.empty()) {
            const Work work = stack.back();
            stack.pop_back();
            const std::span<Sample> node(samples.data() + work.begin, work.end - work.begin);

            Split split;
            if (can_split(node, work.depth)) {
                split = best_split(node, rng);
            }
            if (!split.found) {
                tree.nodes[work.node].value = static_cast<std::uint32_t>(tree.values.size());
                append_leaf_value(node, tree.values);
                continue;
            }
            const auto codes = bins_.column(split.feature);
            const auto mid = std::partition(node.begin(), node.end(), [&](const Sample& s) {
                return codes[s.row] <= split.bin;
            });
            const std::size_t cut = work.begin + static_cast<std::size_t>(mid - node.begin());
            tree.gain[split.feature] += std::max(0.0, split.gain);

            const auto left = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& parent = tree.nodes[work.node];
            parent.feature = static_cast<std::int32_t>(split.feature);
            parent.threshold = bins_.cuts[split.feature][split.bin];
            parent.left = left;
            parent.right = left + 1;
            // Right first so the left subtree is expanded first.
            stack.push_back({left + 1, cut, work.end, work.depth + 1});
            stack.push_back({left, work.begin, cut, work.depth + 1});
        }
        return tree;
    }

private:
    bool can_split(std::span<const Sample> node, std::size_t depth) const
    {
        if (hp_.max_depth && depth >= *hp_.max_depth) {
            return false;
        }
        std::size_t n = 0;
        for (const auto& s : node) {
            n += s.count;
        }
        if (n < hp_.min_samples_split || node.size() < 2) {
            return false;
        }
        // Pure nodes stay leaves.
        for (const auto& s : node) {
            if (k_ > 0 ? cls_[s.row] != cls_[node[0].row] : y_[s.row] != y_[node[0].row]) {
                return true;
            }
        }
        return false;
    }

    Split best_split(std::span<const Sample> node, Rng& rng)
    {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order_));
        Split best;
        // Examine mtry features at a time, in ascending column order within a
        // batch; fall through to the next batch only when nothing splits.
        for (std::size_t start = 0; start < order_.size() && !best.found; start += mtry_) {
            const std::size_t stop = std::min(order_.size(), start + mtry_);
            std::sort(order_.begin() + static_cast<std::ptrdiff_t>(start),
                      order_.begin() + static_cast<std::ptrdiff_t>(stop));
            for (std::size_t i = start; i < stop; ++i) {
                evaluate(node, order_[i], best);
            }
        }
        return best;
    }

    void evaluate(std::span<const Sample> node, std::size_t feature, Split& best)
    {
        const auto codes = bins_.column(feature);
        const std::size_t width = k_ > 0 ? k_ : 3;
        touched_.clear();
        for (const auto& s : node) {
            const std::size_t b = codes[s.row];
            if (hist_w_[b] == 0.0) {
                touched_.push_back(b);
            }
            hist_w_[b] += s.weight;
            double* h = &hist_[b * width];
            if (k_ > 0) {
                h[cls_[s.row]] += s.weight;
            } else {
                h[0] += s.weight;
                h[1] += s.weight * y_[s.row];
                h[2] += s.weight * y_[s.row] * y_[s.row];
            }
        }
        if (touched_.size() > 1) {
            std::sort(touched_.begin(), touched_.end());
            scan(feature, width, best);
        }
        for (std::size_t b : touched_) {
            hist_w_[b] = 0.0;
            std::fill_n(&hist_[b * width], width, 0.0);
        }
    }

    void scan(std::size_t feature, std::size_t width, Split& best)
    {
        total_.assign(width, 0.0);
        double total_w = 0.0;
        for (std::size_t b : touched_) {
            total_w += hist_w_[b];
            for (std::size_t j = 0; j < width; ++j) {
                total_[j] += hist_[b * width + j];
            }
        }
        const double parent = impurity(total_.data(), total_w);
        // Gains that differ only by summation order count as ties, so the
        // earlier feature (lower column within a batch) and lower bin win.
        const double tie = 1e-10 * std::abs(parent);
        left_.assign(width, 0.0);
        right_.resize(width);
        double left_w = 0.0;
        for (std::size_t t = 0; t + 1 < touched_.size(); ++t) {
            const std::size_t b = touched_[t];
            left_w += hist_w_[b];
            for (std::size_t j = 0; j < width; ++j) {
                left_[j] += hist_[b * width + j];
                right_[j] = total_[j] - left_[j];
            }
            const double right_w = total_w - left_w;
            const double gain = parent - impurity(left_.data(), left_w) - impurity(right_.data(), right_w);
            if (!best.found || gain > best.gain + tie) {
                best = {true, feature, b, gain};
            }
        }
    }

    double impurity(const double* h, double w) const
    {
        if (k_ > 0) {
            return class_impurity(h, k_, w, hp_.criterion);
        }
        return sse(h[0], h[1], h[2]);
    }

    void append_leaf_value(std::span<const Sample> node, std::vector<double>& values) const
    {
        if (k_ > 0) {
            std::vector<double> dist(k_, 0.0);
            double total = 0.0;
            for (const auto& s : node) {
                dist[cls_[s.row]] += s.weight;
                total += s.weight;
            }
            for (double& d : dist) {
                d = total > 0.0 ? d / total : 1.0 / static_cast<double>(k_);
            }
            values.insert(values.end(), dist.begin(), dist.end());
            return;
        }
        double w = 0.0;
        double wy = 0.0;
        for (const auto& s : node) {
            w += s.weight;
            wy += s.weight * y_[s.row];
        }
        values.push_back(w > 0.0 ? wy / w : 0.0);
    }

    const detail::BinnedColumns& bins_;
    std::span<const int> cls_;
    std::span<const double> y_;
    std::size_t k_;
    const ForestHyperParams& hp_;
    std::size_t mtry_;
    std::vector<std::size_t> order_;
    std::vector<double> hist_;
    std::vector<double> hist_w_;
    std::vector<std::size_t> touched_;
    std::vector<double> total_;
    std::vector<double> left_;
    std::vector<double> right_;
};

std::vector<Sample> draw_samples(std::size_t n, bool bootstrap, std::span<const double> class_weight,
                                 std::span<const int> cls, Rng& rng)
{
    std::vector<std::uint32_t> counts(n, bootstrap ? 0 : 1);
    if (bootstrap) {
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[rng.uniform_below(n)];
        }
    }
    std::vector<Sample> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (counts[r] == 0) {
            continue;
        }
        const double cw = class_weight.empty() ? 1.0 : class_weight[static_cast<std::size_t>(cls[r])];
        out.push_back({static_cast<std::uint32_t>(r), counts[r], counts[r] * cw});
    }
    return out;
}

void check_shape(const Matrix& x, std::size_t labels)
{
    if (x.rows != labels) {
        fail(ErrorCode::InvalidArgument, "feature rows and labels differ in length");
    }
    if (x.rows < 2) {
        fail(ErrorCode::TooFewSamples, "forest training needs at least two samples");
    }
    if (x.cols == 0) {
        fail(ErrorCode::InvalidArgument, "forest training needs at least one feature");
    }
}

std::vector<Tree> grow_forest(const Matrix& x, std::span<const int> cls, std::span<const double> y,
                              std::size_t n_classes, std::span<const double> class_weight,
                              const ForestHyperParams& hp, std::size_t jobs)
{
    const auto bins = detail::bin_columns(x, hp.max_bins);
    std::vector<Tree> trees(hp.n_trees);
    parallel_for(hp.n_trees, jobs, [&](std::size_t t) {
        Rng rng = Rng::stream(hp.seed, t);
        auto samples = draw_samples(x.rows, hp.bootstrap, class_weight, cls, rng);
        TreeGrower grower(bins, cls, y, n_classes, hp);
        trees[t] = grower.grow(std::move(samples), rng);
    });
    return trees;
}

const TreeNode& find_leaf(const Tree& tree, std::span<const double> row)
{
    const TreeNode* node = &tree.nodes[0];
    while (node->feature >= 0) {
        node = &tree.nodes[row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
    }
    return *node;
}

}  // namespace

ForestModel train_forest_classifier(const Matrix& x, std::span<const int> y, const ForestHyperParams& hp,
                                    std::size_t jobs)
{
    check(hp);
    check_shape(x, y.size());
    if (hp.criterion == Criterion::variance) {
        fail(ErrorCode::InvalidArgument, "variance criterion is for regression forests");
    }
    ForestModel model;
    model.n_features_ = x.cols;
    std::map<int, std::size_t> freq;
    for (int label : y) {
        ++freq[label];
    }
    for (const auto& [label, n] : freq) {
        model.classes_.push_back(label);
    }
    if (model.classes_.size() < 2) {
        model.warnings_.push_back("DegenerateLabels: single class " + std::to_string(model.classes_.front()) +
                                  ", constant model");
        Tree leaf;
        leaf.nodes.emplace_back();
        leaf.values = {1.0};
        leaf.gain.assign(x.cols, 0.0);
        model.trees_.push_back(std::move(leaf));
        return model;
    }
    std::vector<int> cls(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        cls[i] = static_cast<int>(std::lower_bound(model.classes_.begin(), model.classes_.end(), y[i]) -
                                  model.classes_.begin());
    }
    std::vector<double> class_weight;
    if (hp.balanced_class_weight) {
        // n / (k * n_c): every class carries the same total weight.
        const auto k = static_cast<double>(model.classes_.size());
        for (int label : model.classes_) {
            class_weight.push_back(static_cast<double>(y.size()) / (k * static_cast<double>(freq[label])));
        }
    }
    model.trees_ = grow_forest(x, cls, {}, model.classes_.size(), class_weight, hp, jobs);
    return model;
}

ForestModel train_forest_regressor(const Matrix& x, std::span<const double> y, const ForestHyperParams& hp,
                                   std::size_t jobs)
{
    check(hp);
    check_shape(x, y.size());
    if (hp.criterion != Criterion::variance) {
        fail(ErrorCode::InvalidArgument, "regression forests use the variance criterion");
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            fail(ErrorCode::InvalidArgument, "regression target has a non-finite value");
        }
    }
    ForestModel model;
    model.n_features_ = x.cols;
    model.trees_ = grow_forest(x, {}, y, 0, {}, hp, jobs);
    return model;
}

Matrix ForestModel::predict_proba(const Matrix& x) const
{
    if (!is_classifier()) {
        fail(ErrorCode::InvalidArgument, "predict_proba needs a classification forest");
    }
    if (x.cols != n_features_) {
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(n_features_) + " feature columns");
    }
    const std::size_t k = classes_.size();
    Matrix out(x.rows, k);
    const double scale = 1.0 / static_cast<double>(trees_.size());
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        auto dst = out.row(r);
        for (const auto& tree : trees_) {
            const auto& leaf = find_leaf(tree, row);
            for (std::size_t c = 0; c < k; ++c) {
                dst[c] += tree.values[leaf.value + c];
            }
        }
        for (double& v : dst) {
            v *= scale;
        }
    }
    return out;
}

std::vector<double> ForestModel::predict(const Matrix& x) const
{
    std::vector<double> out(x.rows, 0.0);
    if (is_classifier()) {
        const auto proba = predict_proba(x);
        for (std::size_t r = 0; r < x.rows; ++r) {
            const auto row = proba.row(r);
            const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
            out[r] = classes_[best];
        }
        return out;
    }
    if (x.cols != n_features_) {
        fail(ErrorCode::InvalidArgument, "expected " + std::to_string(n_features_) + " feature columns");
    }
    for (std::size_t r = 0; r < x.rows; ++r) {
        double sum = 0.0;
        for (const auto& tree : trees_) {
            sum += tree.values[find_leaf(tree, x.row(r)).value];
        }
        out[r] = sum / static_cast<double>(trees_.size());
    }
    return out;
}

FeatureImportance ForestModel::importance() const
{
    FeatureImportance out;
    out.weights.assign(n_features_, 0.0);
    std::size_t contributing = 0;
    for (const auto& tree : trees_) {
        const double total = std::accumulate(tree.gain.begin(), tree.gain.end(), 0.0);
        if (tree.nodes.size() > 1) {
            out.has_splits = true;
        }
        if (total <= 0.0) {
            continue;
        }
        ++contributing;
        for (std::size_t f = 0; f < n_features_; ++f) {
            out.weights[f] += tree.gain[f] / total;
        }
    }
    const double sum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    if (contributing == 0 || sum <= 0.0) {
        // Only zero-gain splits: nothing to rank, report as no splits.
        out.weights.assign(n_features_, 0.0);
        out.has_splits = false;
        return out;
    }
    for (double& w : out.weights) {
        w /= sum;
    }
    return out;
}

FeatureImportance feature_importance(const ForestModel& model)
{
    return model.importance();
}

}  // namespace ringtrace::ml
