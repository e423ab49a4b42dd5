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

#include <limits>
#include <string>

#include "ringtrace/error.hpp"
#include "ringtrace/ml/cv.hpp"

namespace ringtrace::ml {

ModelSpec sample_spec(const ModelSpec& base, Rng& rng)
{
    ModelSpec spec = base;
    switch (base.kind) {
    case ModelKind::forest: {
        auto& f = spec.forest;
        f.n_trees = static_cast<std::size_t>(rng.uniform_int(50, 500));
        // 21 stands for "unlimited", giving it the same mass as each depth.
        const auto depth = rng.uniform_int(3, 21);
        f.max_depth = depth == 21 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(depth));
        if (rng.uniform01() < 0.5) {
            f.max_features = {};
        } else {
            f.max_features = {MaxFeatures::Kind::fraction, rng.log_uniform(0.05, 1.0)};
        }
        f.min_samples_split = static_cast<std::size_t>(rng.uniform_int(2, 20));
        if (f.criterion != Criterion::variance) {
            f.criterion = rng.uniform01() < 0.5 ? Criterion::gini : Criterion::entropy;
        }
        break;
    }
    case ModelKind::mlp: {
        auto& m = spec.mlp;
        m.hidden_units = static_cast<std::size_t>(rng.uniform_int(10, 30));
        m.learning_rate = rng.log_uniform(1e-4, 1e-1);
        constexpr std::size_t kBatches[] = {16, 32, 64, 128};
        m.batch_size = kBatches[rng.uniform_below(4)];
        break;
    }
    case ModelKind::linear: {
        auto& l = spec.linear;
        l.learning_rate = rng.log_uniform(1e-4, 1e-1);
        l.epsilon = rng.log_uniform(0.01, 1.0);
        l.l2 = rng.log_uniform(1e-6, 1e-2);
        break;
    }
    }
    return spec;
}

SearchResult random_search(const ModelSpec& base, const Dataset& data, const SearchSpec& spec, const Scorer& scorer,
                           std::size_t jobs)
{
    if (spec.budget < 1) {
        fail(ErrorCode::InvalidArgument, "search budget must be >= 1");
    }
    if (spec.metric.empty()) {
        fail(ErrorCode::InvalidArgument, "search metric is not set");
    }
    SearchResult result;
    std::optional<Error> first_error;
    bool have_best = false;
    for (std::size_t t = 0; t < spec.budget; ++t) {
        Trial trial;
        trial.index = t;
        if (t == 0) {
            trial.spec = base;
        } else {
            Rng rng = Rng::stream(spec.seed ^ 0x5ea7c4ULL, t);
            trial.spec = sample_spec(base, rng);
        }
        try {
            trial.cv = kfold_eval(trial.spec, data, spec.folds, spec.seed, scorer, jobs);
            const auto it = trial.cv.summary.find(spec.metric);
            if (it == trial.cv.summary.end()) {
                fail(ErrorCode::InvalidArgument, "scorer does not produce metric '" + spec.metric + "'");
            }
            trial.score = it->second.n > 0 ? it->second.mean : -std::numeric_limits<double>::infinity();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Diverged) {
                throw;
            }
            trial.error = e.what();
            trial.score = -std::numeric_limits<double>::infinity();
            if (!first_error) {
                first_error = e;
            }
        }
        if (!trial.error && (!have_best || trial.score > result.trials[result.best].score)) {
            result.best = t;
            have_best = true;
        }
        result.trials.push_back(std::move(trial));
    }
    if (!have_best) {
        throw *first_error;
    }
    return result;
}

}  // namespace ringtrace::ml
