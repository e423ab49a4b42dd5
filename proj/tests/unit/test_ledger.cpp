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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "ringtrace/error.hpp"
#include "ringtrace/ledger.hpp"
#include "ringtrace/ledger_io.hpp"

using namespace ringtrace;
using ringtrace::testing::coinbase_chain;
using ringtrace::testing::plain_outputs;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected ringtrace::Error");
    return ErrorCode::InvalidArgument;
}

/// Coinbase warmup followed by one transfer per block alternating senders.
Chain chain_with_transfers(std::size_t transfers)
{
    Chain chain = coinbase_chain(70, 2);
    Rng rng(11);
    for (std::size_t k = 0; k < transfers; ++k) {
        const Height h = chain.next_height();
        const auto sender = static_cast<AgentId>(k % 2);
        std::vector<Output> wallet;
        for (const auto& o : chain.outputs) {
            if (o.owner == sender && !o.spent_by) {
                wallet.push_back(o);
            }
        }
        const EligiblePool pool(chain.outputs, h, 60);
        TransferRequest req;
        req.sender = sender;
        req.dest = 1 - sender;
        req.amount = 500;
        req.height = h;
        const auto draft = build_transaction(wallet, req, pool, rng);
        apply_block(chain, std::span(&draft, 1), sender, static_cast<Seconds>(h) * 120, 1000);
    }
    return chain;
}

}  // namespace

TEST_CASE("select_decoys builds an ordered ring around the real output")
{
    const auto outs = plain_outputs(20);
    const EligiblePool pool(outs, 20, 60);
    Rng rng(1);
    const auto ring = select_decoys(pool, outs[5], 11, {}, rng);
    REQUIRE(ring.members.size() == 11);
    CHECK(std::set<OutputId>(ring.members.begin(), ring.members.end()).size() == 11);
    CHECK(std::is_sorted(ring.members.begin(), ring.members.end()));
    CHECK(ring.real() == 5);
    const auto rank = std::count_if(ring.members.begin(), ring.members.end(), [](OutputId o) { return o < 5; });
    CHECK(ring.real_index == static_cast<std::size_t>(rank));
}

TEST_CASE("select_decoys degenerate ring and undersized pool")
{
    const auto outs = plain_outputs(20);
    Rng rng(2);
    const auto single = select_decoys(EligiblePool(outs, 20, 60), outs[7], 1, {}, rng);
    CHECK(single.members == std::vector<OutputId>{7});
    CHECK(single.real_index == 0);

    // Ten eligible outputs including the real one leave only nine decoys.
    const EligiblePool small(outs, 10, 60);
    CHECK(code_of([&] { (void)select_decoys(small, outs[2], 11, {}, rng); }) == ErrorCode::PoolTooSmall);
}

TEST_CASE("select_decoys excludes immature coinbase and future outputs")
{
    auto outs = plain_outputs(40);
    for (auto& o : outs) {
        o.is_coinbase = o.block_height >= 20;
    }
    // Spend at 35 with maturity 10: coinbases at heights <= 25 are usable.
    const EligiblePool pool(outs, 35, 10);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto ring = select_decoys(pool, outs[0], 11, {}, rng);
        for (OutputId m : ring.members) {
            CHECK(outs[m].block_height <= 25);
        }
    }
}

TEST_CASE("uniform decoys match the uniform frequency oracle")
{
    // Real output 0 in a 100-output pool: each other output is a decoy with
    // probability 10/99 per ring.
    const auto outs = plain_outputs(100);
    const EligiblePool pool(outs, 100, 60);
    Rng rng(20260101);
    constexpr std::size_t kRings = 100'000;
    std::vector<std::size_t> counts(100, 0);
    for (std::size_t r = 0; r < kRings; ++r) {
        const auto ring = select_decoys(pool, outs[0], 11, {}, rng);
        for (OutputId m : ring.members) {
            ++counts[m];
        }
    }
    CHECK(counts[0] == kRings);
    const double p = 10.0 / 99.0;
    const double expected = p * kRings;
    const double sigma = std::sqrt(kRings * p * (1.0 - p));
    double chi2 = 0.0;
    for (std::size_t o = 1; o < 100; ++o) {
        CHECK(std::abs(static_cast<double>(counts[o]) - expected) < 5.0 * sigma);
        chi2 += std::pow(static_cast<double>(counts[o]) - expected, 2) / expected;
    }
    // 98 degrees of freedom: mean 98, sd 14.
    CHECK(chi2 < 98.0 + 5.0 * 14.0);
}

TEST_CASE("recency weighted decoys favour recent outputs")
{
    const auto outs = plain_outputs(100);
    const EligiblePool pool(outs, 100, 60);
    Rng rng(5);
    DecoyPolicy policy{DecoyPolicy::Kind::recency_weighted, 1.0};
    std::size_t recent = 0;
    std::size_t old = 0;
    for (int r = 0; r < 2000; ++r) {
        for (OutputId m : select_decoys(pool, outs[50], 11, policy, rng).members) {
            recent += m >= 90 ? 1 : 0;
            old += m < 10 ? 1 : 0;
        }
    }
    CHECK(recent > 3 * old);
}

TEST_CASE("build_transaction coin selection and change")
{
    auto outs = plain_outputs(30);
    const EligiblePool pool(outs, 40, 60);
    Rng rng(4);
    TransferRequest req;
    req.sender = 1;
    req.dest = 2;
    req.amount = 50;
    req.fee = 1;
    req.height = 40;

    SUBCASE("one coin covers amount and fee")
    {
        outs[3].amount = 60;
        const std::vector<Output> wallet{outs[3]};
        const auto draft = build_transaction(wallet, req, pool, rng);
        REQUIRE(draft.inputs.size() == 1);
        CHECK(draft.inputs[0].real() == 3);
        REQUIRE(draft.outputs.size() == 2);
        CHECK(draft.outputs[0] == OutputDraft{2, 50});
        CHECK(draft.outputs[1] == OutputDraft{1, 9});
    }
    SUBCASE("oldest-first selection spans two rings")
    {
        outs[3].amount = 30;
        outs[5].amount = 30;
        outs[8].amount = 30;
        const std::vector<Output> wallet{outs[3], outs[5], outs[8]};
        const auto draft = build_transaction(wallet, req, pool, rng);
        REQUIRE(draft.inputs.size() == 2);
        CHECK(draft.inputs[0].real() == 3);
        CHECK(draft.inputs[1].real() == 5);
        CHECK(draft.outputs.back() == OutputDraft{1, 9});
    }
    SUBCASE("exact amount leaves no change output")
    {
        outs[3].amount = 51;
        const std::vector<Output> wallet{outs[3]};
        CHECK(build_transaction(wallet, req, pool, rng).outputs.size() == 1);
    }
    SUBCASE("insufficient funds")
    {
        const std::vector<Output> wallet{outs[3]};
        CHECK(code_of([&] { (void)build_transaction(wallet, req, pool, rng); }) == ErrorCode::InsufficientFunds);
    }
}

TEST_CASE("apply_block appends coinbase and rejects bad spends")
{
    Chain chain = coinbase_chain(3);
    const auto& block = apply_block(chain, {}, 0, 360, 1000);
    CHECK(block.height == 3);
    CHECK(block.tx_ids.size() == 1);
    CHECK(chain.transactions[block.tx_ids[0]].kind == TxKind::coinbase);

    TxDraft a;
    a.inputs.push_back({{0}, 0});
    a.outputs.push_back({1, 999});
    const std::vector<TxDraft> twice{a, a};
    CHECK(code_of([&] { apply_block(chain, twice, 0, 480, 1000); }) == ErrorCode::DoubleSpend);

    TxDraft ghost;
    ghost.inputs.push_back({{0, 1'000'000}, 0});
    ghost.outputs.push_back({1, 999});
    CHECK(code_of([&] { apply_block(chain, std::span(&ghost, 1), 0, 480, 1000); }) == ErrorCode::InvalidRing);
    CHECK(chain.blocks.size() == 4);

    apply_block(chain, std::span(&a, 1), 0, 480, 1000);
    CHECK(chain.outputs[0].spent_by == TxId{5});
    CHECK(code_of([&] { apply_block(chain, std::span(&a, 1), 0, 600, 1000); }) == ErrorCode::DoubleSpend);
}

TEST_CASE("a long coinbase run reaches the expected height")
{
    const Chain chain = coinbase_chain(23'812);
    CHECK(chain.blocks.back().height == 23'811);
    CHECK(validate_chain(chain).ok());
}

TEST_CASE("public_view strips secrets and keeps structure")
{
    const Chain one = coinbase_chain(1);
    const auto pub_one = public_view(one);
    REQUIRE(pub_one.transactions.size() == 1);
    CHECK(pub_one.transactions[0].rings.empty());
    CHECK(pub_one.transactions[0].outputs.size() == 1);

    const Chain chain = chain_with_transfers(12);
    REQUIRE(validate_chain(chain).ok());
    const auto pub = public_view(chain);
    CHECK(pub.transactions.size() == chain.transactions.size());
    CHECK(public_view(pub) == pub);
    const auto text = to_json(pub).dump();
    for (const char* key : {"\"owner\"", "\"amount\"", "\"real_index\"", "\"sender\"", "\"receiver\"", "\"spent_by\"",
                            "\"miner\"", "\"intended_amount\"", "\"request_time\""}) {
        CHECK_MESSAGE(text.find(key) == std::string::npos, key);
    }
    CHECK(public_chain_from_json(to_json(pub)) == pub);
    CHECK(chain_from_json(to_json(chain)) == chain);
}

TEST_CASE("validate_chain detects tampering")
{
    const Chain clean = chain_with_transfers(6);
    REQUIRE(validate_chain(clean).ok());
    const auto transfer = std::find_if(clean.transactions.begin(), clean.transactions.end(),
                                       [](const Transaction& t) { return t.kind == TxKind::transfer; });
    REQUIRE(transfer != clean.transactions.end());

    SUBCASE("real_index out of range")
    {
        Chain bad = clean;
        bad.transactions[transfer->id].inputs[0].real_index = 99;
        const auto report = validate_chain(bad);
        CHECK(report.violations.size() == 1);
        CHECK(report.count(ViolationKind::RealIndex) == 1);
    }
    SUBCASE("mutated amount breaks conservation of the spender")
    {
        Chain bad = clean;
        const OutputId spent = transfer->inputs[0].real();
        bad.outputs[spent].amount += 7;
        const auto report = validate_chain(bad);
        const bool flagged = std::any_of(report.violations.begin(), report.violations.end(), [&](const Violation& v) {
            return v.kind == ViolationKind::Conservation && v.tx == transfer->id;
        });
        CHECK(flagged);
    }
    SUBCASE("ring out of order")
    {
        Chain bad = clean;
        auto& ring = bad.transactions[transfer->id].inputs[0];
        std::reverse(ring.members.begin(), ring.members.end());
        ring.real_index = ring.members.size() - 1 - ring.real_index;
        CHECK(validate_chain(bad).count(ViolationKind::RingOrdering) == 1);
    }
    SUBCASE("ring member from the future")
    {
        Chain bad = clean;
        bad.transactions[transfer->id].inputs[0].members.back() = bad.outputs.size() - 1;
        CHECK(validate_chain(bad).count(ViolationKind::RingReference) >= 1);
    }
}
