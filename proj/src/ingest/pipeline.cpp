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

#include <string>

#include "ringtrace/ingest.hpp"

namespace ringtrace::ingest {

PipelineResult external_pipeline(const Dump& dump, const LabelSet& labels, const ml::ModelSpec& model,
                                 const ml::SearchSpec& search, const PipelineOptions& options)
{
    PipelineResult out;
    out.chain = to_public_chain(dump);
    out.features = featurize_chain(out.chain, {options.include_coinbase, options.jobs});
    out.join = join_labels(dump, labels);

    FeatureTable table;
    table.columns = out.features.columns;
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < out.features.tx_ids.size(); ++r) {
        if (out.features.coverage[r] >= options.min_coverage) {
            keep.push_back(r);
            table.tx_ids.push_back(out.features.tx_ids[r]);
        }
    }
    table.values = out.features.raw.select_rows(keep);
    out.report = ml::external_task(table, out.join.labels, model, search, options.jobs);
    out.report.extras["coverage_dropped_rows"] = static_cast<double>(out.features.tx_ids.size() - keep.size());
    out.report.extras["unmatched_labels"] = static_cast<double>(out.join.unmatched.size());
    out.report.extras["dangling_references"] = static_cast<double>(dump.dangling.size());
    out.report.warnings.insert(out.report.warnings.begin(), out.join.warnings.begin(), out.join.warnings.end());
    return out;
}

}  // namespace ringtrace::ingest
