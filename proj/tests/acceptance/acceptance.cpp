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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits 0 only when every criterion passes.

#include <sys/wait.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "fixtures.hpp"
#include "planted.hpp"
#include "ringtrace/csv.hpp"
#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/ingest.hpp"
#include "ringtrace/json_io.hpp"
#include "ringtrace/ledger_io.hpp"
#include "ringtrace/ml/cv.hpp"
#include "ringtrace/ml/forest.hpp"
#include "ringtrace/ml/metrics.hpp"
#include "ringtrace/ml/mlp.hpp"
#include "ringtrace/ml/tasks.hpp"
#include "ringtrace/rng.hpp"

#ifndef RINGTRACE_CLI_PATH
#error "RINGTRACE_CLI_PATH must name the ringtrace executable"
#endif

namespace fs = std::filesystem;
using namespace ringtrace;
using Clock = std::chrono::steady_clock;

namespace {

fs::path g_work;

// Collects sub-check results for one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what)
    {
        ok_ = ok_ && ok;
        lines_.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
    }
    void note(const std::string& what) { lines_.push_back("      " + what); }
    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] const std::vector<std::string>& lines() const { return lines_; }

private:
    bool ok_ = true;
    std::vector<std::string> lines_;
};

std::string fmt(double v, int digits = 4)
{
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quoted(const fs::path& p)
{
    return "'" + p.string() + "'";
}

// Runs the CLI inside `cwd`; output is appended to the work log.
int cli(const fs::path& cwd, const std::string& args)
{
    fs::create_directories(cwd);
    const auto log = g_work / "cli.log";
    const std::string cmd = "cd " + quoted(cwd) + " && " + quoted(RINGTRACE_CLI_PATH) + " " + args + " >>" +
                            quoted(log) + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_transfers(const PublicChain& chain)
{
    return static_cast<std::size_t>(std::count_if(chain.transactions.begin(), chain.transactions.end(),
                                                  [](const PublicTransaction& t) { return t.kind == TxKind::transfer; }));
}

fs::path scenario_dir(const std::string& name)
{
    return g_work / "scenarios" / name;
}

// --- 1 ----------------------------------------------------------------------

void scenario_fidelity(Check& c)
{
    struct Reference {
        const char* name;
        std::size_t blocks;
        std::size_t transactions;
    };
    // Published summary of the five simulated datasets.
    const std::vector<Reference> table = {
        {"s03", 23812, 4898}, {"s04", 25509, 4923}, {"s05", 41583, 4923}, {"s06", 37281, 24807}, {"s07", 58551, 7070},
    };
    for (const auto& ref : table) {
        const auto dir = scenario_dir(ref.name);
        const auto start = Clock::now();
        const bool ran = cli(dir, "--seed 1 --out . generate " + std::string(ref.name)) == 0 &&
                         cli(dir, "--out . simulate economy.json") == 0;
        const bool timed = std::string(ref.name) == "s03" || std::string(ref.name) == "s06";
        bool featurized = true;
        if (ran && timed) {
            featurized = cli(dir, "--out . featurize --real-inputs real_inputs.csv public_chain.json") == 0;
        }
        const double elapsed = seconds_since(start);
        c.expect(ran && featurized, std::string(ref.name) + ": CLI generate and simulate succeed");
        if (!ran) {
            continue;
        }
        const auto validation = read_json(dir / "validation.json");
        c.expect(validation.at("valid").get<bool>() && validation.at("violations").empty(),
                 std::string(ref.name) + ": validate_chain report is empty");
        const auto chain = read_public_chain(dir / "public_chain.json");
        const auto transfers = count_transfers(chain);
        const double tx_dev = std::abs(static_cast<double>(transfers) / static_cast<double>(ref.transactions) - 1.0);
        const double block_dev = std::abs(static_cast<double>(chain.blocks.size()) / static_cast<double>(ref.blocks) - 1.0);
        c.expect(tx_dev <= 0.05, std::string(ref.name) + ": transfers " + std::to_string(transfers) + " vs " +
                                     std::to_string(ref.transactions) + " (" + fmt(100 * tx_dev, 3) + "% off, limit 5%)");
        c.expect(block_dev <= 0.20, std::string(ref.name) + ": blocks " + std::to_string(chain.blocks.size()) + " vs " +
                                        std::to_string(ref.blocks) + " (" + fmt(100 * block_dev, 3) +
                                        "% off, limit 20%)");
        if (timed) {
            const double limit = std::string(ref.name) == "s03" ? 120.0 : 600.0;
            c.expect(elapsed < limit, std::string(ref.name) + ": generate+simulate+featurize " + fmt(elapsed, 3) +
                                          " s (limit " + fmt(limit) + " s)");
        } else {
            c.note(std::string(ref.name) + ": generate+simulate " + fmt(elapsed, 3) + " s");
        }
    }
}

// --- 2 ----------------------------------------------------------------------

void feature_contract(Check& c)
{
    const auto dir = scenario_dir("s03");
    const auto chain = read_public_chain(dir / "public_chain.json");
    const auto fm = featurize_chain(chain);
    c.expect(fm.columns.size() == 182 && fm.raw.cols == 182 && fm.normalized.cols == 182,
             "featurize emits " + std::to_string(fm.columns.size()) + " columns");
    const auto header = csv::read(dir / "features.csv").header;
    c.expect(header.size() == 183, "features.csv has tx_id + " + std::to_string(header.size() - 1) + " columns");

    double worst_mean = 0.0;
    double worst_sd = 0.0;
    std::size_t constant = 0;
    const std::size_t n = fm.normalized.rows;
    for (std::size_t col = 0; col < fm.raw.cols; ++col) {
        bool varies = false;
        for (std::size_t r = 1; r < n && !varies; ++r) {
            varies = fm.raw(r, col) != fm.raw(0, col);
        }
        if (!varies) {
            ++constant;
            continue;
        }
        long double sum = 0.0L;
        for (std::size_t r = 0; r < n; ++r) {
            sum += fm.normalized(r, col);
        }
        const long double mean = sum / static_cast<long double>(n);
        long double ss = 0.0L;
        for (std::size_t r = 0; r < n; ++r) {
            const long double d = fm.normalized(r, col) - mean;
            ss += d * d;
        }
        // Population standard deviation, the convention used throughout the features.
        const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(n)));
        worst_mean = std::max(worst_mean, static_cast<double>(std::fabs(mean)));
        worst_sd = std::max(worst_sd, std::abs(sd - 1.0));
    }
    c.note(std::to_string(constant) + " constant columns skipped on s03");
    c.expect(worst_mean < 1e-9, "max |mean| of normalized columns " + fmt(worst_mean, 3));
    c.expect(worst_sd < 1e-9, "max |sd - 1| of normalized columns " + fmt(worst_sd, 3));

    std::size_t compared = 0;
    std::size_t mismatched = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto small = ringtrace::testing::random_public_chain(seed, 50);
        const ChainIndex index(small);
        for (const auto& tx : small.transactions) {
            if (tx.rings.empty()) {
                continue;
            }
            const auto hop = one_hop(tx, index);
            const auto expected = ringtrace::testing::oracle_one_hop(tx, small);
            ++compared;
            if (expected.size() != hop.size() || !std::equal(hop.begin(), hop.end(), expected.begin())) {
                ++mismatched;
            }
        }
    }
    c.expect(mismatched == 0, "one_hop equals the brute-force oracle bit for bit on " + std::to_string(compared) +
                                  " transactions from 25 random 50-tx chains");
}

// --- 3 ----------------------------------------------------------------------

void graph_sparsity(Check& c)
{
    const auto dir = scenario_dir("s03");
    const auto chain = read_public_chain(dir / "public_chain.json");
    const auto real = read_real_inputs(dir / "real_inputs.csv");
    bool all_eleven = true;
    for (const auto& tx : chain.transactions) {
        for (const auto& ring : tx.rings) {
            all_eleven = all_eleven && ring.size() == 11;
        }
    }
    c.expect(all_eleven, "every s03 ring has 11 members");
    const auto all = graph_edges(chain, EdgeMode::all);
    const auto truth = graph_edges(chain, EdgeMode::true_only, &real);
    c.expect(all.size() == 11 * truth.size(), "|true edges| / |all edges| = " + std::to_string(truth.size()) + " / " +
                                                  std::to_string(all.size()));
    const auto csv_all = csv::read(dir / "edges_all.csv").rows.size();
    const auto csv_true = csv::read(dir / "edges_true.csv").rows.size();
    c.expect(csv_all == all.size() && csv_true == truth.size(), "edges_all.csv and edges_true.csv agree");
}

// --- 4 ----------------------------------------------------------------------

void spoof_recovery(Check& c)
{
    const auto dir = scenario_dir("s03");
    const auto spec = read_economy(dir / "economy.json").first;
    std::set<double> lambdas;
    for (const auto& a : spec.agents) {
        lambdas.insert(a.wait_lambda);
    }
    c.expect(lambdas.size() > 1, "s03 agents have " + std::to_string(lambdas.size()) + " distinct wait_lambda values");

    const auto candidates = read_candidates_csv(dir / "candidates.csv");
    const auto real = read_real_inputs(dir / "real_inputs.csv");
    const auto data = ml::spoof_dataset(candidates, real);
    const std::set<std::size_t> groups(data.groups.begin(), data.groups.end());
    const std::size_t rings = groups.size();
    c.expect(rings >= 2000, std::to_string(rings) + " rings");

    // Pool hits across folds so the interval is over individual rings.
    ml::Scorer scorer = [](const ml::Dataset& d, const ml::FoldPrediction& fold) {
        auto m = ml::ring_top1_metrics(d, fold);
        std::set<std::size_t> g;
        for (std::size_t r : fold.test_rows) {
            g.insert(d.groups[r]);
        }
        m["rings"] = static_cast<double>(g.size());
        return m;
    };
    const auto model = ml::with_seed(ml::default_spec(ml::TaskKind::spoof), 1);
    const auto cv = ml::kfold_eval(model, data, 5, 1, scorer);
    double hits = 0.0;
    double seen = 0.0;
    for (const auto& fold : cv.folds) {
        hits += *fold.at("top1") * *fold.at("rings");
        seen += *fold.at("rings");
    }
    const auto hit_count = static_cast<std::size_t>(std::llround(hits));
    const auto band = ml::wilson_interval(hit_count, static_cast<std::size_t>(seen));
    c.expect(band.low >= 2.0 / 11.0, "forest top-1 " + fmt(hits / seen) + " (" + std::to_string(hit_count) + "/" +
                                         fmt(seen, 6) + "), 95% Wilson lower bound " + fmt(band.low) +
                                         " vs 2/11 = " + fmt(2.0 / 11.0));

    Rng rng(12345);
    std::vector<double> random_scores(data.y.size());
    for (double& s : random_scores) {
        s = rng.uniform01();
    }
    const double chance = ml::top1_accuracy(random_scores, data.groups, data.y);
    const double p = 1.0 / 11.0;
    const double half = 1.959963984540054 * std::sqrt(p * (1 - p) / static_cast<double>(rings));
    c.expect(std::abs(chance - p) <= half, "chance-score control top-1 " + fmt(chance) + " within [" + fmt(p - half) +
                                               ", " + fmt(p + half) + "]");
}

// --- 5 ----------------------------------------------------------------------

bool time_of_day_column(const std::string& name)
{
    return name.find("minute") != std::string::npos || name.find("hour") != std::string::npos ||
           name.find("second") != std::string::npos;
}

void group_membership(Check& c)
{
    const auto dir = scenario_dir("s06");
    const auto spec = read_economy(dir / "economy.json").first;
    c.note("s06: " + std::to_string(spec.pools.size()) + " pools, " + std::to_string(spec.agents.size()) + " agents");
    const auto features = read_features_csv(dir / "features.csv");
    const auto labels = ml::read_group_labels(dir / "labels.csv");
    auto model = ml::default_spec(ml::TaskKind::group);
    ml::SearchSpec search;
    search.folds = 5;
    search.seed = 1;
    const auto report = ml::group_task(features, labels, model, search);
    const auto& best = report.best();
    const auto& acc = best.cv.summary.at("accuracy");
    c.expect(acc.mean >= 0.85, "5-fold accuracy " + fmt(acc.mean) + " +/- " + fmt(acc.sd) + " (limit 0.85)");
    if (!best.cv.importance || !best.cv.importance->has_splits) {
        c.expect(false, "importance available");
        return;
    }
    const auto ranking = ml::importance_ranking(*best.cv.importance);
    std::size_t derived = 0;
    std::string top;
    for (std::size_t i = 0; i < 3 && i < ranking.size(); ++i) {
        const auto& name = report.columns.at(ranking[i].first);
        derived += time_of_day_column(name) ? 1 : 0;
        top += (i ? ", " : "") + name + " " + fmt(ranking[i].second, 3);
    }
    c.expect(derived >= 2, std::to_string(derived) + " of top-3 importances are minute/hour/second-derived: " + top);
}

// --- 6 ----------------------------------------------------------------------

void value_regression(Check& c)
{
    const auto dir = scenario_dir("s03");
    const auto features = read_features_csv(dir / "features.csv");
    const auto targets = ml::read_value_targets(dir / "labels.csv");
    const auto model = ml::default_spec(ml::TaskKind::value);
    ml::SearchSpec search;
    search.seed = 1;
    const auto report = ml::value_task(features, targets, model, search);
    const auto& r2 = report.best().cv.summary.at("r2");
    c.expect(r2.mean <= 0.1, "s03 value R2 " + fmt(r2.mean) + " +/- " + fmt(r2.sd) + " (limit 0.1)");
    double worst = 0.0;
    for (const auto& fold : report.best().cv.folds) {
        worst = std::max(worst, std::abs(fold.at("baseline_train_r2").value_or(1.0)));
    }
    c.expect(worst <= 1e-12, "baseline predictor train-fold R2 max |.| " + fmt(worst, 3));

    auto leaky = features;
    Matrix wide(leaky.values.rows, leaky.values.cols + 1);
    for (std::size_t r = 0; r < wide.rows; ++r) {
        for (std::size_t col = 0; col < leaky.values.cols; ++col) {
            wide(r, col) = leaky.values(r, col);
        }
        const auto it = targets.find(leaky.tx_ids[r]);
        wide(r, leaky.values.cols) = it == targets.end() ? 0.0 : it->second;
    }
    leaky.values = std::move(wide);
    leaky.columns.push_back("planted_target");
    const auto leak = ml::value_task(leaky, targets, model, search);
    const auto& leak_r2 = leak.best().cv.summary.at("r2");
    c.expect(leak_r2.mean >= 0.9, "planted target column R2 " + fmt(leak_r2.mean) + " (limit 0.9)");
}

// --- 7 ----------------------------------------------------------------------

double mlp_gradient_error(bool classify)
{
    Rng rng(classify ? 71 : 72);
    ml::MlpNetwork net(6, 5, classify ? 3 : 1, classify);
    net.initialize(9);
    Matrix x(16, 6);
    for (double& v : x.data) {
        v = rng.normal();
    }
    std::vector<double> targets(16);
    std::vector<double> weights(16, 1.0);
    std::vector<std::size_t> rows(16);
    for (std::size_t i = 0; i < 16; ++i) {
        targets[i] = classify ? static_cast<double>(i % 3) : rng.normal();
        rows[i] = i;
    }
    std::vector<double> grad;
    (void)net.loss(x, targets, weights, rows, &grad);
    double worst = 0.0;
    constexpr double kEps = 1e-5;
    for (std::size_t p = 0; p < net.param_count(); ++p) {
        auto plus = net;
        auto minus = net;
        plus.params[p] += kEps;
        minus.params[p] -= kEps;
        const double numeric =
            (plus.loss(x, targets, weights, rows, nullptr) - minus.loss(x, targets, weights, rows, nullptr)) / (2 * kEps);
        const double scale = std::max(std::abs(numeric), std::abs(grad[p]));
        if (scale > 1e-7) {
            worst = std::max(worst, std::abs(numeric - grad[p]) / scale);
        }
    }
    return worst;
}

void metric_oracles(Check& c)
{
    const std::vector<double> y{1, 2, 3};
    const std::vector<double> y_hat{1, 2, 4};
    const double r2 = ml::r_squared(y, y_hat);
    c.expect(r2 == 0.5, "r_squared([1,2,3],[1,2,4]) = " + fmt(r2, 17));

    // Confusion matrices given as (true, predicted) -> count.
    const std::vector<std::map<std::pair<int, int>, std::size_t>> confusions = {
        {{{1, 1}, 94}, {{1, 0}, 6}, {{0, 1}, 1786}, {{0, 0}, 8114}},
        {{{0, 0}, 7}, {{0, 1}, 2}, {{0, 2}, 1}, {{1, 1}, 5}, {{1, 2}, 3}, {{2, 0}, 4}, {{2, 2}, 11}},
    };
    bool exact = true;
    for (const auto& confusion : confusions) {
        std::vector<int> truth;
        std::vector<int> pred;
        std::set<int> labels;
        for (const auto& [cell, count] : confusion) {
            truth.insert(truth.end(), count, cell.first);
            pred.insert(pred.end(), count, cell.second);
            labels.insert(cell.first);
        }
        for (const auto& m : ml::precision_recall(truth, pred)) {
            std::size_t tp = 0;
            std::size_t col = 0;
            std::size_t row = 0;
            for (const auto& [cell, count] : confusion) {
                tp += cell.first == m.label && cell.second == m.label ? count : 0;
                col += cell.second == m.label ? count : 0;
                row += cell.first == m.label ? count : 0;
            }
            exact = exact && m.precision == static_cast<double>(tp) / static_cast<double>(col) &&
                    m.recall == static_cast<double>(tp) / static_cast<double>(row);
        }
    }
    c.expect(exact, "precision/recall equal the rational values on two hand-built confusion matrices");

    Rng rng(5);
    Matrix x(400, 6);
    std::vector<int> labels(400);
    for (std::size_t r = 0; r < 400; ++r) {
        for (std::size_t col = 0; col < 6; ++col) {
            x(r, col) = rng.normal();
        }
        labels[r] = x(r, 0) + 0.5 * x(r, 1) > 0 ? 1 : 0;
    }
    ml::ForestHyperParams hp;
    hp.n_trees = 25;
    const auto forest = ml::train_forest_classifier(x, labels, hp);
    const auto imp = ml::feature_importance(forest);
    double total = 0.0;
    for (double w : imp.weights) {
        total += w;
    }
    c.expect(std::abs(total - 1.0) < 1e-9, "forest importances sum to 1 (off by " + fmt(std::abs(total - 1.0), 3) + ")");

    const double soft = mlp_gradient_error(true);
    const double reg = mlp_gradient_error(false);
    c.expect(soft < 1e-4 && reg < 1e-4, "MLP gradient check max relative error: softmax " + fmt(soft, 3) +
                                            ", regression " + fmt(reg, 3));
}

// --- 8 ----------------------------------------------------------------------

void write_dump(const ingest::Dump& dump, const fs::path& path)
{
    Json records = Json::array();
    for (const auto& tx : dump.transactions) {
        Json rings = Json::array();
        for (const auto& ring : tx.rings) {
            Json members = Json::array();
            for (const auto& ref : ring) {
                members.push_back({{"tx_hash", ref.tx_hash}, {"output_index", ref.output_index}});
            }
            rings.push_back(std::move(members));
        }
        records.push_back({{"tx_hash", tx.tx_hash},
                           {"block_height", tx.block_height},
                           {"timestamp", tx.timestamp},
                           {"coinbase", tx.coinbase},
                           {"num_outputs", tx.num_outputs},
                           {"fee", tx.fee},
                           {"rings", std::move(rings)}});
    }
    write_json(path, {{"format", "xmr-dump"}, {"schema_version", ingest::kDumpSchemaVersion}, {"transactions", records}});
}

// Every command, each in its own directory, with paths relative to it.
const std::vector<std::pair<std::string, std::string>>& pipeline()
{
    static const std::vector<std::pair<std::string, std::string>> steps = {
        {"generate", "generate s04"},
        {"simulate", "simulate ../generate/economy.json"},
        {"validate", "validate ../simulate/chain.json"},
        {"featurize", "featurize --real-inputs ../simulate/real_inputs.csv ../simulate/public_chain.json"},
        {"spoof", "train --task spoof --trees 10 --budget 2 --folds 3 --candidates ../featurize/candidates.csv "
                  "--real-inputs ../simulate/real_inputs.csv"},
        {"value", "train --task value --trees 20 --budget 2 --folds 3 --features ../featurize/features.csv "
                  "--labels ../simulate/labels.csv"},
        {"ingest", "ingest ../../planted-dump.json --labels ../../planted-labels.csv --trees 20 --budget 2"},
    };
    return steps;
}

std::map<std::string, std::string> tree_bytes(const fs::path& root)
{
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
        }
    }
    return out;
}

void determinism(Check& c)
{
    const auto root = g_work / "determinism";
    fs::create_directories(root);
    ingest::LabelSet labels;
    write_dump(ringtrace::testing::planted_dump(8, 600, &labels), root / "planted-dump.json");
    {
        csv::Writer w(root / "planted-labels.csv");
        w.header({"tx_hash", "label"});
        for (const auto& [hash, label] : labels.labels) {
            w.row(hash, label);
        }
    }
    const std::vector<std::pair<std::string, std::string>> runs = {{"jobs1", "--jobs 1"}, {"jobs4", "--jobs 4"}};
    for (const auto& [name, flag] : runs) {
        for (const auto& [step, args] : pipeline()) {
            const int code = cli(root / name / step, "--seed 21 " + flag + " --out . " + args);
            c.expect(code == 0, name + "/" + step + " exits 0");
        }
    }
    // Replay every manifest of the first run into a third tree.
    for (const auto& [step, args] : pipeline()) {
        const int code = cli(root / "replay" / step, "--jobs 2 --out . replay ../../jobs1/" + step + "/manifest.json");
        c.expect(code == 0, "replay/" + step + " exits 0");
    }
    const auto a = tree_bytes(root / "jobs1");
    const auto b = tree_bytes(root / "jobs4");
    const auto r = tree_bytes(root / "replay");
    std::size_t bytes = 0;
    for (const auto& [file, content] : a) {
        bytes += content.size();
    }
    c.expect(a == b, std::to_string(a.size()) + " files (" + std::to_string(bytes) +
                         " bytes) byte-identical between --jobs 1 and --jobs 4");
    c.expect(a == r, "manifest replay reproduces every file byte for byte");
}

// --- 9 ----------------------------------------------------------------------

void external_pipeline(Check& c)
{
    const auto dir = scenario_dir("s03");
    const auto chain = read_public_chain(dir / "public_chain.json");
    const auto direct = featurize_chain(chain);
    const auto dump = ingest::parse_dump(dir / "xmr-dump.json");
    const auto again = featurize_chain(ingest::to_public_chain(dump));
    c.expect(dump.dangling.empty(), "exported dump has no dangling references");
    c.expect(direct.tx_ids == again.tx_ids && direct.columns == again.columns && direct.raw == again.raw &&
                 direct.normalized == again.normalized && direct.coverage == again.coverage,
             "re-ingested s03 dump gives an identical FeatureMatrix (" + std::to_string(direct.raw.rows) + " x " +
                 std::to_string(direct.raw.cols) + ")");

    ingest::LabelSet labels;
    const auto planted = ringtrace::testing::planted_dump(3, 2000, &labels);
    auto model = ml::default_spec(ml::TaskKind::external_label);
    model.forest.max_features = ml::parse_max_features("1.0");
    ml::SearchSpec search;
    search.seed = 1;
    const auto result = ingest::external_pipeline(planted, labels, model, search);
    const auto& cv = result.report.best().cv;
    const double recall = cv.summary.at("recall_1").mean;
    c.expect(recall >= 0.95, "planted fixture recall " + fmt(recall) + " (limit 0.95), positive rate " +
                                 fmt(result.join.positive_rate(), 3));
    if (!cv.importance || !cv.importance->has_splits) {
        c.expect(false, "importance available");
        return;
    }
    const auto ranking = ml::importance_ranking(*cv.importance);
    const auto& top = result.features.columns.at(ranking.front().first);
    c.expect(top == "num_rings", "top importance " + top + " " + fmt(ranking.front().second, 3));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ringtrace acceptance run"};
    std::string workdir;
    app.add_option("--workdir", workdir, "scratch directory (wiped first)")->required();
    CLI11_PARSE(app, argc, argv);
    g_work = fs::absolute(workdir);
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"scenario fidelity", scenario_fidelity},
        {"feature contract", feature_contract},
        {"graph sparsity", graph_sparsity},
        {"spoof recovery beats chance", spoof_recovery},
        {"group membership", group_membership},
        {"value regression negative result", value_regression},
        {"metric oracles", metric_oracles},
        {"determinism", determinism},
        {"external pipeline", external_pipeline},
    };
    std::size_t passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        const auto start = Clock::now();
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("threw: ") + e.what());
        }
        passed += check.ok() ? 1 : 0;
        std::cout << (check.ok() ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << criteria[i].first << " ("
                  << fmt(seconds_since(start), 3) << " s)\n";
        for (const auto& line : check.lines()) {
            std::cout << "        " << line << '\n';
        }
        std::cout.flush();
    }
    std::cout << passed << "/" << criteria.size() << " criteria pass\n";
    return passed == criteria.size() ? 0 : 1;
}
