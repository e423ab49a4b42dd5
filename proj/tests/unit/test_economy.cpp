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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "ringtrace/csv.hpp"
#include "ringtrace/economy.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/ledger_io.hpp"

using namespace ringtrace;

namespace {

struct Run {
    EconomySpec spec;
    EconomyFiles files;
    SimulationResult result;
};

const Run& s03_run()
{
    static const Run run = [] {
        Run r;
        r.spec = scenario_preset("s03", 7);
        r.files = gen_economy(r.spec);
        r.result = run_simulation(r.files, r.spec, r.spec.sim, r.spec.seed);
        return r;
    }();
    return run;
}

std::size_t transfers(const Chain& chain)
{
    std::size_t n = 0;
    for (const auto& tx : chain.transactions) {
        n += tx.kind == TxKind::transfer ? 1 : 0;
    }
    return n;
}

EconomySpec pair_spec(double wait_lambda, std::size_t target)
{
    EconomySpec spec;
    spec.name = "pair";
    spec.target_tx_count = target;
    spec.seed = 3;
    spec.agents.resize(2);
    for (int i = 0; i < 2; ++i) {
        spec.agents[static_cast<std::size_t>(i)].id = i;
        spec.agents[static_cast<std::size_t>(i)].wait_lambda = wait_lambda;
    }
    spec.pools = {{0, 1}};
    return spec;
}

}  // namespace

TEST_CASE("scenario presets")
{
    const auto s03 = scenario_preset("s03");
    CHECK(s03.agents.size() == 10);
    CHECK(s03.pools.size() == 1);
    CHECK(s03.target_tx_count == 4898);
    CHECK(s03.ring_size == 11);
    double lo = 1e18;
    double hi = 0.0;
    for (const auto& a : s03.agents) {
        lo = std::min(lo, a.wait_lambda);
        hi = std::max(hi, a.wait_lambda);
        CHECK(a.amount_lambda == s03.agents[0].amount_lambda);
        CHECK(a.active_windows.empty());
    }
    CHECK(lo == doctest::Approx(45.0));
    CHECK(hi == doctest::Approx(90'000.0));

    const auto s04 = scenario_preset("s04");
    CHECK(s04.target_tx_count == 4923);
    CHECK(s04.agents[0].amount_lambda != s04.agents[9].amount_lambda);

    const auto s05 = scenario_preset("s05");
    CHECK(s05.target_tx_count == 4923);
    CHECK(s05.pools.size() == 2);

    const auto s06 = scenario_preset("s06");
    CHECK(s06.agents.size() == 50);
    REQUIRE(s06.pools.size() == 2);
    CHECK(s06.pools[0].size() == 25);
    CHECK(s06.target_tx_count == 24807);
    const auto& w0 = s06.agents[s06.pools[0][0]].active_windows;
    const auto& w1 = s06.agents[s06.pools[1][0]].active_windows;
    REQUIRE(w0.size() == 1);
    REQUIRE(w1.size() == 1);
    CHECK(w0[0] == DailyWindow{0.0, 12.0});
    CHECK(w1[0] == DailyWindow{12.0, 24.0});

    const auto s07 = scenario_preset("s07");
    CHECK(s07.target_tx_count == 7070);
    REQUIRE(s07.pools.size() == 5);
    for (const auto& pool : s07.pools) {
        CHECK(pool.size() == 10);
    }

    CHECK_THROWS_AS(scenario_preset("s99"), Error);
    try {
        (void)scenario_preset("s02");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownScenario);
    }
}

TEST_CASE("gen_economy Poisson waits match their mean")
{
    // Two agents split 20 000 transfers evenly; each has about 10^4 waits.
    const auto spec = pair_spec(100.0, 20'000);
    const auto files = gen_economy(spec);
    CHECK(files.total() == 20'000);
    const auto& txs = files.schedules[0].txs;
    REQUIRE(txs.size() >= 9'000);
    double sum = 0.0;
    for (const auto& tx : txs) {
        sum += static_cast<double>(tx.wait_seconds);
        CHECK(tx.destination == 1);
        CHECK(tx.amount >= 1);
    }
    const double n = static_cast<double>(txs.size());
    CHECK(std::abs(sum / n - 100.0) < 3.0 * std::sqrt(100.0 / n));
}

TEST_CASE("gen_economy edge cases and constraints")
{
    SUBCASE("pool of one schedules nothing and warns")
    {
        auto spec = pair_spec(100.0, 50);
        spec.pools = {{0}, {1}};
        const auto files = gen_economy(spec);
        CHECK(files.total() == 0);
        CHECK(files.warnings.size() == 2);
    }
    SUBCASE("pooled scenarios never cross pools")
    {
        for (const char* name : {"s05", "s07"}) {
            const auto spec = scenario_preset(name, 1);
            const auto files = gen_economy(spec);
            CHECK(files.total() == spec.target_tx_count);
            for (const auto& s : files.schedules) {
                const int pool = spec.agents[static_cast<std::size_t>(s.agent)].pool_id;
                for (const auto& tx : s.txs) {
                    CHECK(tx.destination != s.agent);
                    CHECK(spec.agents[static_cast<std::size_t>(tx.destination)].pool_id == pool);
                }
            }
        }
    }
    SUBCASE("same seed gives the same files")
    {
        const auto spec = scenario_preset("s04", 9);
        CHECK(gen_economy(spec) == gen_economy(spec));
    }
    SUBCASE("windowed requests land inside windows")
    {
        const auto spec = scenario_preset("s06", 2);
        const auto files = gen_economy(spec);
        for (const auto& s : files.schedules) {
            const auto& agent = spec.agents[static_cast<std::size_t>(s.agent)];
            Seconds t = schedule_start(spec.sim);
            for (const auto& tx : s.txs) {
                t += tx.wait_seconds;
                CHECK(in_active_window(agent, t));
            }
        }
    }
}

TEST_CASE("s03 simulation is valid and close to the reference size")
{
    const auto& run = s03_run();
    const auto& chain = run.result.chain;
    CHECK_FALSE(run.result.stall.has_value());
    const auto report = validate_chain(chain);
    CHECK(report.ok());
    const auto n = static_cast<double>(transfers(chain));
    CHECK(std::abs(n - 4898.0) <= 0.05 * 4898.0);
    CHECK(run.result.realized <= run.result.scheduled);
    const auto blocks = static_cast<double>(chain.blocks.size());
    CHECK(std::abs(blocks - 23'812.0) <= 0.2 * 23'812.0);
    for (const auto& b : chain.blocks) {
        CHECK(b.timestamp == static_cast<Seconds>(b.height) * run.spec.sim.block_interval);
    }
}

TEST_CASE("ground truth covers every transfer and respects pools")
{
    const auto& run = s03_run();
    const auto& truth = run.result.truth;
    CHECK(truth.transfers.size() == transfers(run.result.chain));
    std::set<TxId> seen;
    for (const auto& t : truth.transfers) {
        CHECK(seen.insert(t.tx).second);
        const auto& tx = run.result.chain.transactions[t.tx];
        CHECK(tx.kind == TxKind::transfer);
        REQUIRE(t.real_indices.size() == tx.inputs.size());
        for (std::size_t r = 0; r < tx.inputs.size(); ++r) {
            CHECK(t.real_indices[r] == tx.inputs[r].real_index);
        }
        CHECK(t.value == tx.intended_amount);
    }
}

TEST_CASE("simulation is deterministic by seed")
{
    const auto& run = s03_run();
    const auto again = run_simulation(run.files, run.spec, run.spec.sim, run.spec.seed);
    CHECK(again.truth == run.result.truth);
    CHECK(to_json(again.chain).dump() == to_json(run.result.chain).dump());
}

TEST_CASE("pooled and windowed simulation keeps pool closure and windows")
{
    const auto spec = scenario_preset("s07", 4);
    const auto files = gen_economy(spec);
    const auto result = run_simulation(files, spec, spec.sim, spec.seed);
    CHECK(validate_chain(result.chain).ok());
    for (const auto& t : result.truth.transfers) {
        const auto& sender = spec.agents[static_cast<std::size_t>(t.sender)];
        CHECK(sender.pool_id == spec.agents[static_cast<std::size_t>(t.receiver)].pool_id);
        CHECK(t.receiver_pool == sender.pool_id);
        CHECK(in_active_window(sender, result.chain.transactions[t.tx].request_time));
    }
}

TEST_CASE("single agent with an empty schedule mines coinbase only")
{
    EconomySpec spec;
    spec.name = "solo";
    spec.agents.resize(1);
    spec.pools = {{0}};
    const auto files = gen_economy(spec);
    const auto result = run_simulation(files, spec, spec.sim, 1);
    CHECK(transfers(result.chain) == 0);
    CHECK(result.truth.transfers.empty());
    CHECK(result.chain.transactions.size() == result.chain.blocks.size());
    CHECK(validate_chain(result.chain).ok());
}

TEST_CASE("export_ground_truth writes the documented files")
{
    const auto& run = s03_run();
    const auto dir = ringtrace::testing::scratch_dir("ground_truth");
    export_ground_truth(run.result.truth, dir);
    const auto labels = csv::read(dir / "labels.csv");
    CHECK(labels.header == std::vector<std::string>{"tx_id", "sender", "receiver", "receiver_pool", "value"});
    CHECK(labels.rows.size() == run.result.truth.transfers.size());
    const auto real = csv::read(dir / "real_inputs.csv");
    CHECK(real.header == std::vector<std::string>{"tx_id", "ring_index_within_tx", "real_index"});
    std::size_t rings = 0;
    for (const auto& t : run.result.truth.transfers) {
        rings += t.real_indices.size();
    }
    CHECK(real.rows.size() == rings);
    CHECK(read_real_inputs(dir / "real_inputs.csv") == real_input_map(run.result.truth));
}

TEST_CASE("graph edges")
{
    const auto& run = s03_run();
    const auto pub = public_view(run.result.chain);

    SUBCASE("counting on a two-ring transaction")
    {
        const auto two = std::find_if(pub.transactions.begin(), pub.transactions.end(),
                                      [](const PublicTransaction& t) { return t.rings.size() == 2; });
        REQUIRE(two != pub.transactions.end());
        PublicChain one = pub;
        for (auto& tx : one.transactions) {
            if (tx.id != two->id) {
                tx.rings.clear();
            }
        }
        const auto secrets = real_input_map(run.result.truth);
        CHECK(graph_edges(one, EdgeMode::all).size() == 22);
        CHECK(graph_edges(one, EdgeMode::true_only, &secrets).size() == 2);
    }
    SUBCASE("true edges are one eleventh of all edges")
    {
        const auto all = graph_edges(run.result.chain, EdgeMode::all);
        const auto real = graph_edges(run.result.chain, EdgeMode::true_only);
        CHECK(all.size() == 11 * real.size());
        const auto secrets = real_input_map(run.result.truth);
        CHECK(graph_edges(pub, EdgeMode::true_only, &secrets) == real);
        CHECK(graph_edges(pub, EdgeMode::all) == all);
    }
    SUBCASE("true edges need secrets")
    {
        try {
            (void)graph_edges(pub, EdgeMode::true_only);
            FAIL("expected ModeRequiresSecrets");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ModeRequiresSecrets);
        }
    }
}

TEST_CASE("economy json round trip")
{
    const auto spec = scenario_preset("s06", 5);
    const auto files = gen_economy(spec);
    const auto dir = ringtrace::testing::scratch_dir("economy");
    write_economy(dir / "economy.json", spec, files);
    const auto [spec2, files2] = read_economy(dir / "economy.json");
    CHECK(spec2 == spec);
    CHECK(files2 == files);
}
