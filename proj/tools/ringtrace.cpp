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

// ringtrace command-line tool: generate -> simulate -> featurize -> train,
// plus ingest of external dumps, chain validation and manifest replay.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringtrace/csv.hpp"
#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/features.hpp"
#include "ringtrace/ingest.hpp"
#include "ringtrace/json_io.hpp"
#include "ringtrace/ledger_io.hpp"
#include "ringtrace/ml/tasks.hpp"

namespace fs = std::filesystem;
using namespace ringtrace;

namespace {

constexpr int kManifestVersion = 1;
constexpr const char* kToolVersion = "0.1.0";

// Exit statuses: 0 success, 1 validation failure, 2 usage or runtime error.
constexpr int kExitInvalid = 1;
constexpr int kExitError = 2;

struct Context {
    fs::path out;
    std::size_t jobs = 1;
};

struct Outcome {
    std::vector<std::string> outputs;  // file names inside the output directory
    Json summary = Json::object();
    bool valid = true;
};

using Command = std::function<Outcome(const Json& args, const Context& ctx)>;

template <typename T>
T arg(const Json& args, const char* key)
{
    return field<T>(args, key, "args");
}

std::optional<std::string> optional_path(const Json& args, const char* key)
{
    if (!args.contains(key) || args[key].is_null()) {
        return std::nullopt;
    }
    return args[key].get<std::string>();
}

PublicChain load_public_chain(const fs::path& path)
{
    const Json doc = read_json(path);
    if (doc.is_object() && doc.value("format", "") == "ringtrace-chain") {
        return public_view(read_chain(path));
    }
    return read_public_chain(path);
}

Json formats()
{
    return {{"chain", kChainFormatVersion},
            {"economy", kEconomyFormatVersion},
            {"xmr_dump", ingest::kDumpSchemaVersion},
            {"report", 1},
            {"manifest", kManifestVersion}};
}

// --- commands -----------------------------------------------------------------

Outcome cmd_generate(const Json& args, const Context& ctx)
{
    const auto spec = scenario_preset(arg<std::string>(args, "scenario"), arg<std::uint64_t>(args, "seed"));
    const auto files = gen_economy(spec);
    write_economy(ctx.out / "economy.json", spec, files);
    Outcome out;
    out.outputs = {"economy.json"};
    out.summary = {{"scenario", spec.name}, {"agents", spec.agents.size()}, {"scheduled", files.total()},
                   {"warnings", files.warnings}};
    return out;
}

Outcome cmd_simulate(const Json& args, const Context& ctx)
{
    auto [spec, files] = read_economy(arg<std::string>(args, "economy"));
    SimParams params = spec.sim;
    if (args.contains("ring_size")) {
        spec.ring_size = arg<std::size_t>(args, "ring_size");
    }
    if (args.contains("block_interval")) {
        params.block_interval = arg<Seconds>(args, "block_interval");
    }
    if (args.contains("decoy")) {
        params.decoy.kind = parse_decoy_kind(arg<std::string>(args, "decoy"));
    }
    if (args.contains("recency_shape")) {
        params.decoy.recency_shape = arg<double>(args, "recency_shape");
    }
    if (args.contains("processing_delay")) {
        params.processing_delay = arg<Seconds>(args, "processing_delay");
    }
    const std::uint64_t seed = args.contains("seed") ? arg<std::uint64_t>(args, "seed") : spec.seed;
    const auto result = run_simulation(files, spec, params, seed);
    const auto report = validate_chain(result.chain);
    const auto view = public_view(result.chain);

    write_chain(ctx.out / "chain.json", result.chain);
    write_public_chain(ctx.out / "public_chain.json", view);
    export_ground_truth(result.truth, ctx.out);
    ingest::export_dump(view, ctx.out / "xmr-dump.json");
    write_json(ctx.out / "validation.json", to_json(report), true);

    Outcome out;
    out.outputs = {"chain.json", "public_chain.json", "labels.csv", "real_inputs.csv", "xmr-dump.json",
                   "validation.json"};
    out.summary = {{"scheduled", result.scheduled},
                   {"realized", result.realized},
                   {"blocks", result.chain.blocks.size()},
                   {"transactions", result.chain.transactions.size()},
                   {"violations", report.violations.size()}};
    if (result.stall) {
        out.summary["stall"] = {{"height", result.stall->height},
                                {"unfinished", result.stall->unfinished},
                                {"detail", result.stall->detail}};
    }
    out.valid = report.ok() && !result.stall;
    return out;
}

Outcome cmd_featurize(const Json& args, const Context& ctx)
{
    const auto chain = load_public_chain(arg<std::string>(args, "chain"));
    const auto real_path = optional_path(args, "real_inputs");
    const auto edges = arg<std::string>(args, "edges");
    if (edges != "all" && edges != "true" && edges != "both") {
        fail(ErrorCode::InvalidArgument, "--edges must be all, true or both");
    }
    if (edges != "all" && !real_path) {
        fail(ErrorCode::ModeRequiresSecrets, "true edges need --real-inputs (ground truth)");
    }

    Outcome out;
    const auto fm = featurize_chain(chain, {arg<bool>(args, "include_coinbase"), ctx.jobs});
    write_features_csv(ctx.out / "features.csv", fm.tx_ids, fm.raw, fm.columns);
    write_features_csv(ctx.out / "features_normalized.csv", fm.tx_ids, fm.normalized, fm.columns);
    write_norm_stats(ctx.out / "norm_stats.json", fm);
    out.outputs = {"features.csv", "features_normalized.csv", "norm_stats.json"};

    if (!arg<bool>(args, "skip_candidates")) {
        write_candidates_csv(ctx.out / "candidates.csv", candidate_table(chain, ctx.jobs));
        out.outputs.push_back("candidates.csv");
    }

    const auto binning = parse_binning(arg<std::string>(args, "binning"));
    try {
        write_correlation_csv(ctx.out / "correlation.csv",
                              ring_pair_correlation(chain, binning, arg<std::size_t>(args, "bins")));
        out.outputs.push_back("correlation.csv");
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoTwoRingTxs) {
            throw;
        }
        out.summary["correlation"] = "skipped: no transaction with exactly two rings";
    }

    if (edges != "true") {
        write_edges(ctx.out / "edges_all.csv", graph_edges(chain, EdgeMode::all));
        out.outputs.push_back("edges_all.csv");
    }
    if (real_path) {
        const auto secrets = read_real_inputs(*real_path);
        write_edges(ctx.out / "edges_true.csv", graph_edges(chain, EdgeMode::true_only, &secrets));
        out.outputs.push_back("edges_true.csv");
    }
    out.summary["rows"] = fm.tx_ids.size();
    out.summary["columns"] = fm.columns.size();
    return out;
}

ml::SearchSpec search_spec(const Json& args, ml::TaskKind task)
{
    ml::SearchSpec search;
    search.budget = arg<std::size_t>(args, "budget");
    search.folds = arg<std::size_t>(args, "folds");
    search.seed = arg<std::uint64_t>(args, "seed");
    search.metric = args.value("metric", "");
    if (search.metric.empty()) {
        search.metric = ml::default_metric(task);
    }
    if (search.budget < 1) {
        fail(ErrorCode::InvalidArgument, "--budget must be >= 1");
    }
    return search;
}

ml::ModelSpec model_spec(const Json& args)
{
    return ml::with_seed(ml::model_spec_from_json(args.at("model")), arg<std::uint64_t>(args, "seed"));
}

std::map<TxId, int> read_external_labels(const fs::path& path)
{
    const auto table = csv::read(path);
    const auto id_col = table.require_column("tx_id");
    const auto label_col = table.require_column("label");
    std::map<TxId, int> out;
    for (const auto& row : table.rows) {
        out[static_cast<TxId>(csv::parse_int(row[id_col]))] = ingest::is_positive_label(row[label_col]) ? 1 : 0;
    }
    return out;
}

Outcome cmd_train(const Json& args, const Context& ctx)
{
    const auto task = ml::parse_task(arg<std::string>(args, "task"));
    const auto search = search_spec(args, task);
    const auto model = model_spec(args);
    ml::ModelReport report;
    auto need = [&](const char* key, const char* flag) {
        const auto p = optional_path(args, key);
        if (!p) {
            fail(ErrorCode::InvalidArgument, std::string("task ") + ml::to_string(task) + " needs " + flag);
        }
        return *p;
    };
    switch (task) {
    case ml::TaskKind::spoof:
        report = ml::spoof_task(read_candidates_csv(need("candidates", "--candidates")),
                                read_real_inputs(need("real_inputs", "--real-inputs")), model, search, ctx.jobs);
        break;
    case ml::TaskKind::group:
        report = ml::group_task(read_features_csv(need("features", "--features")),
                                ml::read_group_labels(need("labels", "--labels")), model, search, ctx.jobs);
        break;
    case ml::TaskKind::value:
        report = ml::value_task(read_features_csv(need("features", "--features")),
                                ml::read_value_targets(need("labels", "--labels")), model, search, ctx.jobs);
        break;
    case ml::TaskKind::external_label:
        report = ml::external_task(read_features_csv(need("features", "--features")),
                                   read_external_labels(need("labels", "--labels")), model, search, ctx.jobs);
        break;
    }
    ml::write_report(ctx.out, report);
    Outcome out;
    out.outputs = {"report.json", "importance.csv", "trials.csv"};
    out.summary = {{"task", ml::to_string(task)}, {"metric", search.metric}, {"best_score", report.best().score}};
    return out;
}

Outcome cmd_ingest(const Json& args, const Context& ctx)
{
    const auto dump = ingest::parse_dump(arg<std::string>(args, "dump"));
    const auto labels = ingest::read_labels(arg<std::string>(args, "labels"));
    ingest::PipelineOptions options;
    options.min_coverage = arg<double>(args, "min_coverage");
    options.jobs = ctx.jobs;
    const auto result = ingest::external_pipeline(dump, labels, model_spec(args),
                                                  search_spec(args, ml::TaskKind::external_label), options);
    const auto& fm = result.features;
    write_features_csv(ctx.out / "features.csv", fm.tx_ids, fm.raw, fm.columns);
    write_norm_stats(ctx.out / "norm_stats.json", fm);
    {
        csv::Writer cov(ctx.out / "coverage.csv");
        cov.header({"tx_id", "tx_hash", "coverage"});
        for (std::size_t r = 0; r < fm.tx_ids.size(); ++r) {
            cov.row(fm.tx_ids[r], dump.transactions.at(fm.tx_ids[r]).tx_hash, fm.coverage[r]);
        }
    }
    write_json(ctx.out / "join.json",
               {{"total", result.join.total},
                {"positives", result.join.positives},
                {"positive_rate", result.join.positive_rate()},
                {"unmatched", result.join.unmatched},
                {"duplicates", result.join.duplicates},
                {"dangling_references", dump.dangling.size()},
                {"warnings", result.join.warnings}},
               true);
    ml::write_report(ctx.out, result.report);
    Outcome out;
    out.outputs = {"features.csv", "norm_stats.json", "coverage.csv", "join.json", "report.json", "importance.csv",
                   "trials.csv"};
    out.summary = {{"transactions", dump.transactions.size()},
                   {"positives", result.join.positives},
                   {"best_score", result.report.best().score}};
    return out;
}

Outcome cmd_validate(const Json& args, const Context& ctx)
{
    const auto chain = read_chain(arg<std::string>(args, "chain"));
    const auto report = validate_chain(chain);
    write_json(ctx.out / "validation.json", to_json(report), true);
    Outcome out;
    out.outputs = {"validation.json"};
    out.summary = {{"violations", report.violations.size()}};
    out.valid = report.ok();
    return out;
}

const std::map<std::string, Command>& commands()
{
    static const std::map<std::string, Command> table = {
        {"generate", cmd_generate}, {"simulate", cmd_simulate}, {"featurize", cmd_featurize},
        {"train", cmd_train},       {"ingest", cmd_ingest},     {"validate", cmd_validate},
    };
    return table;
}

int run(const std::string& name, const Json& args, const Context& ctx)
{
    fs::create_directories(ctx.out);
    const auto outcome = commands().at(name)(args, ctx);
    // --jobs is left out on purpose: outputs do not depend on it.
    write_json(ctx.out / "manifest.json",
               {{"format", "ringtrace-manifest"},
                {"format_version", kManifestVersion},
                {"tool_version", kToolVersion},
                {"command", name},
                {"args", args},
                {"formats", formats()},
                {"outputs", outcome.outputs}},
               true);
    Json status = outcome.summary;
    status["command"] = name;
    status["ok"] = outcome.valid;
    std::cout << status.dump() << '\n';
    return outcome.valid ? 0 : kExitInvalid;
}

int report_error(const std::string& code, const std::string& message)
{
    std::cerr << Json{{"error", code}, {"message", message}}.dump() << '\n';
    return kExitError;
}

// --- argument parsing ---------------------------------------------------------

struct ModelFlags {
    std::string model = "forest";
    std::optional<std::size_t> trees;
    std::optional<std::string> max_depth;
    std::optional<std::string> max_features;
    std::optional<std::size_t> min_samples_split;
    std::optional<std::string> criterion;
    std::optional<bool> balanced;
    std::optional<std::size_t> hidden;
    std::optional<double> learning_rate;
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch_size;
    std::optional<double> epsilon;
    std::size_t budget = 1;
    std::size_t folds = 5;
    std::string metric;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--model", model, "forest, mlp or linear")->capture_default_str();
        cmd->add_option("--trees", trees, "forest: number of trees");
        cmd->add_option("--max-depth", max_depth, "forest: depth limit or 'none'");
        cmd->add_option("--max-features", max_features, "forest: 'sqrt' or a fraction in (0, 1]");
        cmd->add_option("--min-samples-split", min_samples_split, "forest: minimum samples to split a node");
        cmd->add_option("--criterion", criterion, "forest: gini, entropy or variance");
        cmd->add_option("--balanced", balanced, "inverse-frequency class weights (true/false)");
        cmd->add_option("--hidden", hidden, "mlp: hidden units");
        cmd->add_option("--learning-rate", learning_rate, "mlp/linear: step size");
        cmd->add_option("--epochs", epochs, "mlp/linear: passes over the data");
        cmd->add_option("--batch-size", batch_size, "mlp/linear: minibatch size");
        cmd->add_option("--epsilon", epsilon, "linear: insensitive-zone half width");
        cmd->add_option("--budget", budget, "random search trials (>= 1)")->capture_default_str();
        cmd->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
        cmd->add_option("--metric", metric, "search metric (task default when empty)");
    }

    void fill(Json& args, ml::TaskKind task) const
    {
        ml::ModelSpec spec = ml::default_spec(task);
        spec.kind = ml::parse_model_kind(model);
        if (task == ml::TaskKind::value) {
            spec.forest.criterion = ml::Criterion::variance;
        }
        auto& f = spec.forest;
        if (trees) f.n_trees = *trees;
        if (max_depth) {
            f.max_depth = *max_depth == "none" ? std::nullopt : std::optional<std::size_t>(std::stoul(*max_depth));
        }
        if (max_features) f.max_features = ml::parse_max_features(*max_features);
        if (min_samples_split) f.min_samples_split = *min_samples_split;
        if (criterion) f.criterion = ml::parse_criterion(*criterion);
        if (balanced) {
            f.balanced_class_weight = *balanced;
            spec.mlp.balanced_class_weight = *balanced;
        } else {
            spec.mlp.balanced_class_weight = f.balanced_class_weight;
        }
        if (hidden) spec.mlp.hidden_units = *hidden;
        if (learning_rate) {
            spec.mlp.learning_rate = *learning_rate;
            spec.linear.learning_rate = *learning_rate;
        }
        if (epochs) {
            spec.mlp.epochs = *epochs;
            spec.linear.epochs = *epochs;
        }
        if (batch_size) {
            spec.mlp.batch_size = *batch_size;
            spec.linear.batch_size = *batch_size;
        }
        if (epsilon) spec.linear.epsilon = *epsilon;
        auto json = ml::to_json(spec);
        json.erase("seed");  // the global --seed applies
        args["model"] = json;
        args["budget"] = budget;
        args["folds"] = folds;
        if (!metric.empty()) {
            args["metric"] = metric;
        }
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ringtrace: ring-signature ledger simulator, featurizer and learner"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::uint64_t seed = 0;
    std::string out_dir;
    std::size_t jobs = 1;
    int format_version = kChainFormatVersion;
    bool seed_given = false;
    auto* seed_opt = app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads; never changes outputs")->capture_default_str();
    app.add_option("--format-version", format_version, "file format version to write")->capture_default_str();
    app.fallthrough();

    std::string name;
    Json args = Json::object();

    auto* gen = app.add_subcommand("generate", "scenario preset -> economy.json");
    std::string scenario;
    gen->add_option("scenario", scenario, "s03, s04, s05, s06 or s07")->required();

    auto* sim = app.add_subcommand("simulate", "economy.json -> chain, ground truth, xmr-dump.json");
    std::string economy;
    std::optional<std::size_t> ring_size;
    std::optional<Seconds> block_interval;
    std::optional<std::string> decoy;
    std::optional<double> recency_shape;
    std::optional<Seconds> processing_delay;
    sim->add_option("economy", economy, "economy.json")->required();
    sim->add_option("--ring-size", ring_size, "members per ring");
    sim->add_option("--block-interval", block_interval, "simulated seconds per block");
    sim->add_option("--decoy", decoy, "uniform or recency_weighted");
    sim->add_option("--recency-shape", recency_shape, "power-law exponent for recency_weighted");
    sim->add_option("--processing-delay", processing_delay, "seconds before a request is eligible");

    auto* feat = app.add_subcommand("featurize", "public chain -> features, candidates, correlation, edges");
    std::string chain_path;
    std::optional<std::string> real_inputs;
    std::string edges = "auto";
    std::string binning = "by_hour_of_day";
    std::size_t bins = 24;
    bool include_coinbase = false;
    bool skip_candidates = false;
    feat->add_option("chain", chain_path, "public_chain.json or chain.json")->required();
    feat->add_option("--real-inputs", real_inputs, "real_inputs.csv, enables true edges");
    feat->add_option("--edges", edges, "all, true or both (default: both with --real-inputs, else all)");
    feat->add_option("--binning", binning, "by_hour_of_day or by_rank")->capture_default_str();
    feat->add_option("--bins", bins, "correlation bins per axis")->capture_default_str();
    feat->add_flag("--include-coinbase", include_coinbase, "keep coinbase rows in features.csv");
    feat->add_flag("--skip-candidates", skip_candidates, "do not write candidates.csv");

    auto* train = app.add_subcommand("train", "features/candidates + labels -> report.json");
    std::string task = "spoof";
    std::optional<std::string> features;
    std::optional<std::string> candidates;
    std::optional<std::string> labels;
    ModelFlags train_flags;
    train->add_option("--task", task, "spoof, group, value or external_label")->capture_default_str();
    train->add_option("--features", features, "features.csv");
    train->add_option("--candidates", candidates, "candidates.csv (spoof task)");
    train->add_option("--labels", labels, "labels.csv");
    train->add_option("--real-inputs", real_inputs, "real_inputs.csv (spoof task)");
    train_flags.add(train);

    auto* ing = app.add_subcommand("ingest", "xmr-dump.json + labels.csv -> features and report");
    std::string dump;
    std::string dump_labels;
    double min_coverage = 0.0;
    ModelFlags ingest_flags;
    ing->add_option("dump", dump, "xmr-dump.json")->required();
    ing->add_option("--labels", dump_labels, "labels.csv with tx_hash,label")->required();
    ing->add_option("--min-coverage", min_coverage, "drop rows with lower ring coverage")->capture_default_str();
    ingest_flags.add(ing);

    auto* val = app.add_subcommand("validate", "check every ledger invariant of chain.json");
    std::string validate_chain_path;
    val->add_option("chain", validate_chain_path, "chain.json with secrets")->required();

    auto* rep = app.add_subcommand("replay", "rerun the command recorded in a manifest.json");
    std::string manifest_path;
    rep->add_option("manifest", manifest_path, "manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("InvalidArgument", e.what());
    }
    seed_given = seed_opt->count() > 0;

    try {
        if (format_version != kChainFormatVersion) {
            fail(ErrorCode::InvalidArgument, "only format version " + std::to_string(kChainFormatVersion) +
                                                 " is supported");
        }
        Context ctx;
        ctx.jobs = std::max<std::size_t>(1, jobs);
        if (*rep) {
            const auto manifest = read_json(manifest_path);
            if (field<std::string>(manifest, "format", manifest_path) != "ringtrace-manifest") {
                fail(ErrorCode::SchemaError, manifest_path + ": not a ringtrace manifest");
            }
            name = field<std::string>(manifest, "command", manifest_path);
            if (!commands().count(name)) {
                fail(ErrorCode::SchemaError, manifest_path + ": unknown command '" + name + "'");
            }
            args = manifest.at("args");
            ctx.out = out_dir.empty() ? fs::path(manifest_path).parent_path() : fs::path(out_dir);
            if (ctx.out.empty()) {
                ctx.out = ".";
            }
            return run(name, args, ctx);
        }
        if (out_dir.empty()) {
            fail(ErrorCode::InvalidArgument, "--out is required");
        }
        ctx.out = out_dir;
        if (*gen) {
            name = "generate";
            args = {{"scenario", scenario}, {"seed", seed}};
        } else if (*sim) {
            name = "simulate";
            args = {{"economy", economy}};
            if (seed_given) args["seed"] = seed;
            if (ring_size) args["ring_size"] = *ring_size;
            if (block_interval) args["block_interval"] = *block_interval;
            if (decoy) args["decoy"] = *decoy;
            if (recency_shape) args["recency_shape"] = *recency_shape;
            if (processing_delay) args["processing_delay"] = *processing_delay;
        } else if (*feat) {
            name = "featurize";
            args = {{"chain", chain_path},
                    {"real_inputs", real_inputs ? Json(*real_inputs) : Json(nullptr)},
                    {"edges", edges == "auto" ? (real_inputs ? "both" : "all") : edges},
                    {"binning", binning},
                    {"bins", bins},
                    {"include_coinbase", include_coinbase},
                    {"skip_candidates", skip_candidates}};
        } else if (*train) {
            name = "train";
            const auto kind = ml::parse_task(task);
            args = {{"task", ml::to_string(kind)},
                    {"seed", seed},
                    {"features", features ? Json(*features) : Json(nullptr)},
                    {"candidates", candidates ? Json(*candidates) : Json(nullptr)},
                    {"labels", labels ? Json(*labels) : Json(nullptr)},
                    {"real_inputs", real_inputs ? Json(*real_inputs) : Json(nullptr)}};
            train_flags.fill(args, kind);
        } else if (*ing) {
            name = "ingest";
            args = {{"dump", dump}, {"labels", dump_labels}, {"seed", seed}, {"min_coverage", min_coverage}};
            ingest_flags.fill(args, ml::TaskKind::external_label);
        } else if (*val) {
            name = "validate";
            args = {{"chain", validate_chain_path}};
        }
        return run(name, args, ctx);
    } catch (const Error& e) {
        return report_error(std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        return report_error("InternalError", e.what());
    }
}
