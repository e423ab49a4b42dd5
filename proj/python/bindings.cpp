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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>
#include <string>

#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/ingest.hpp"
#include "ringtrace/ledger_io.hpp"
#include "ringtrace/ml/forest.hpp"
#include "ringtrace/ml/metrics.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ringtrace;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const DoubleArray& a)
{
    if (a.ndim() != 2) {
        throw py::value_error("expected a 2-d array");
    }
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data.begin());
    return m;
}

std::vector<double> to_vector(const DoubleArray& a)
{
    if (a.ndim() != 1) {
        throw py::value_error("expected a 1-d array");
    }
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const Matrix& m)
{
    py::array_t<double> out({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), out.mutable_data());
    return out;
}

ml::ForestHyperParams forest_params(std::size_t n_trees, std::optional<std::size_t> max_depth,
                                    const std::string& max_features, std::size_t min_samples_split,
                                    const std::string& criterion, std::uint64_t seed, bool balanced)
{
    ml::ForestHyperParams hp;
    hp.n_trees = n_trees;
    hp.max_depth = max_depth;
    hp.max_features = ml::parse_max_features(max_features);
    hp.min_samples_split = min_samples_split;
    hp.criterion = ml::parse_criterion(criterion);
    hp.seed = seed;
    hp.balanced_class_weight = balanced;
    return hp;
}

}  // namespace

PYBIND11_MODULE(_ringtrace, m)
{
    m.doc() = "Native core of ringtrace: ledger simulation, features and tree ensembles.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    // --- economy --------------------------------------------------------------
    py::class_<EconomySpec>(m, "EconomySpec")
        .def_readonly("name", &EconomySpec::name)
        .def_readonly("target_tx_count", &EconomySpec::target_tx_count)
        .def_readonly("ring_size", &EconomySpec::ring_size)
        .def_readonly("seed", &EconomySpec::seed)
        .def_property_readonly("num_agents", [](const EconomySpec& s) { return s.agents.size(); })
        .def_property_readonly("num_pools", [](const EconomySpec& s) { return s.pools.size(); })
        .def_property_readonly("block_interval", [](const EconomySpec& s) { return s.sim.block_interval; })
        .def("to_json", [](const EconomySpec& s) { return to_json(s).dump(); });

    py::class_<EconomyFiles>(m, "EconomyFiles")
        .def("total", &EconomyFiles::total)
        .def_readonly("warnings", &EconomyFiles::warnings);

    m.def("scenario_names", &scenario_names);
    m.def("scenario_preset", [](const std::string& name, std::uint64_t seed) { return scenario_preset(name, seed); },
          "name"_a, "seed"_a = 0);
    m.def("gen_economy", &gen_economy, "spec"_a);
    m.def("write_economy", &write_economy, "path"_a, "spec"_a, "files"_a);
    m.def("read_economy", &read_economy, "path"_a);

    // --- ledger ---------------------------------------------------------------
    py::class_<PublicChain>(m, "PublicChain")
        .def_readonly("seed", &PublicChain::seed)
        .def_property_readonly("num_blocks", [](const PublicChain& c) { return c.blocks.size(); })
        .def_property_readonly("num_transactions", [](const PublicChain& c) { return c.transactions.size(); })
        .def("ring_counts", [](const PublicChain& c) {
            std::vector<std::size_t> out;
            for (const auto& tx : c.transactions) {
                out.push_back(tx.rings.size());
            }
            return out;
        })
        .def("to_json", [](const PublicChain& c) { return to_json(c).dump(); })
        .def("__eq__", [](const PublicChain& a, const PublicChain& b) { return a == b; });

    py::class_<Chain>(m, "Chain")
        .def_readonly("seed", &Chain::seed)
        .def_property_readonly("num_blocks", [](const Chain& c) { return c.blocks.size(); })
        .def_property_readonly("num_transactions", [](const Chain& c) { return c.transactions.size(); })
        .def("public_view", [](const Chain& c) { return public_view(c); });

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("chain", &SimulationResult::chain)
        .def_readonly("scheduled", &SimulationResult::scheduled)
        .def_readonly("realized", &SimulationResult::realized)
        .def_property_readonly("stalled", [](const SimulationResult& r) { return r.stall.has_value(); })
        .def("labels", [](const SimulationResult& r) {
            py::list out;
            for (const auto& t : r.truth.transfers) {
                out.append(py::dict("tx_id"_a = t.tx, "sender"_a = t.sender, "receiver"_a = t.receiver,
                                    "receiver_pool"_a = t.receiver_pool, "value"_a = t.value,
                                    "real_indices"_a = t.real_indices));
            }
            return out;
        })
        .def("real_inputs", [](const SimulationResult& r) { return real_input_map(r.truth); });

    m.def(
        "run_simulation",
        [](const EconomySpec& spec, const EconomyFiles& files, std::optional<std::uint64_t> seed) {
            return run_simulation(files, spec, spec.sim, seed.value_or(spec.seed));
        },
        "spec"_a, "files"_a, "seed"_a = py::none(), py::call_guard<py::gil_scoped_release>());

    m.def("validate_chain", [](const Chain& chain) {
        py::list out;
        for (const auto& v : validate_chain(chain).violations) {
            out.append(py::dict("kind"_a = to_string(v.kind), "tx"_a = v.tx, "detail"_a = v.detail));
        }
        return out;
    });
    m.def("write_chain", &write_chain, "path"_a, "chain"_a);
    m.def("read_chain", &read_chain, "path"_a);
    m.def("write_public_chain", &write_public_chain, "path"_a, "chain"_a);
    m.def("read_public_chain", &read_public_chain, "path"_a);

    m.def(
        "graph_edges",
        [](const PublicChain& chain, const std::string& mode, std::optional<RealInputMap> secrets) {
            const auto kind = mode == "true" ? EdgeMode::true_only : EdgeMode::all;
            std::vector<std::pair<TxId, TxId>> out;
            for (const auto& e : graph_edges(chain, kind, secrets ? &*secrets : nullptr)) {
                out.emplace_back(e.spender, e.source);
            }
            return out;
        },
        "chain"_a, "mode"_a = "all", "real_inputs"_a = py::none());

    // --- features -------------------------------------------------------------
    m.def("feature_names", &feature_names);
    m.def(
        "featurize",
        [](const PublicChain& chain, bool include_coinbase, std::size_t jobs) {
            const auto fm = featurize_chain(chain, {include_coinbase, jobs});
            return py::dict("tx_ids"_a = fm.tx_ids, "columns"_a = fm.columns, "raw"_a = to_array(fm.raw),
                            "normalized"_a = to_array(fm.normalized), "coverage"_a = fm.coverage,
                            "mean"_a = fm.norm.mean, "std"_a = fm.norm.stddev);
        },
        "chain"_a, "include_coinbase"_a = false, "jobs"_a = 1);
    m.def(
        "ring_pair_correlation",
        [](const PublicChain& chain, const std::string& binning, std::size_t bins) {
            const auto c = ring_pair_correlation(chain, parse_binning(binning), bins);
            py::array_t<double> values({bins, bins});
            py::array_t<std::size_t> support({bins, bins});
            for (std::size_t i = 0; i < bins * bins; ++i) {
                values.mutable_data()[i] = c.values[i].value_or(std::numeric_limits<double>::quiet_NaN());
                support.mutable_data()[i] = c.support[i];
            }
            return py::make_tuple(values, support);
        },
        "chain"_a, "binning"_a = "by_hour_of_day", "bins"_a = 24);

    // --- ingest ---------------------------------------------------------------
    m.def("export_dump", &ingest::export_dump, "chain"_a, "path"_a);
    m.def(
        "load_dump", [](const std::filesystem::path& path) { return ingest::to_public_chain(ingest::parse_dump(path)); },
        "path"_a);

    // --- metrics and forests --------------------------------------------------
    m.def(
        "r_squared", [](const DoubleArray& y, const DoubleArray& y_hat) { return ml::r_squared(to_vector(y), to_vector(y_hat)); },
        "y"_a, "y_hat"_a);
    m.def(
        "precision_recall",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred) {
            py::dict out;
            for (const auto& c : ml::precision_recall(y_true, y_pred)) {
                out[py::int_(c.label)] = py::dict("precision"_a = c.precision, "recall"_a = c.recall,
                                                  "support"_a = c.support);
            }
            return out;
        },
        "y_true"_a, "y_pred"_a);

    py::class_<ml::ForestModel>(m, "ForestModel")
        .def_property_readonly("classes", &ml::ForestModel::classes)
        .def_property_readonly("n_features", &ml::ForestModel::n_features)
        .def_property_readonly("warnings", &ml::ForestModel::warnings)
        .def("predict", [](const ml::ForestModel& f, const DoubleArray& x) { return f.predict(to_matrix(x)); })
        .def("predict_proba",
             [](const ml::ForestModel& f, const DoubleArray& x) { return to_array(f.predict_proba(to_matrix(x))); })
        .def("feature_importances", [](const ml::ForestModel& f) {
            const auto imp = f.importance();
            return py::make_tuple(imp.weights, imp.has_splits);
        });

    m.def(
        "train_forest",
        [](const DoubleArray& x, const DoubleArray& y, bool classify, std::size_t n_trees,
           std::optional<std::size_t> max_depth, const std::string& max_features, std::size_t min_samples_split,
           std::optional<std::string> criterion, std::uint64_t seed, bool balanced, std::size_t jobs) {
            const auto hp = forest_params(n_trees, max_depth, max_features, min_samples_split,
                                          criterion.value_or(classify ? "gini" : "variance"), seed, balanced);
            const auto mx = to_matrix(x);
            const auto vy = to_vector(y);
            py::gil_scoped_release release;
            if (classify) {
                std::vector<int> labels(vy.size());
                for (std::size_t i = 0; i < vy.size(); ++i) {
                    labels[i] = static_cast<int>(std::lround(vy[i]));
                }
                return ml::train_forest_classifier(mx, labels, hp, jobs);
            }
            return ml::train_forest_regressor(mx, vy, hp, jobs);
        },
        "x"_a, "y"_a, "classify"_a = true, "n_trees"_a = 100, "max_depth"_a = py::none(), "max_features"_a = "sqrt",
        "min_samples_split"_a = 2, "criterion"_a = py::none(), "seed"_a = 0, "balanced"_a = false, "jobs"_a = 1);
}
