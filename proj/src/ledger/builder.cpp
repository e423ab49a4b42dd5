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

#include "ringtrace/error.hpp"
#include "ringtrace/ledger.hpp"

namespace ringtrace {

TxDraft build_transaction(std::span<const Output> wallet, const TransferRequest& request,
                          const EligiblePool& pool, Rng& rng)
{
    if (request.amount == 0) {
        fail(ErrorCode::InvalidArgument, "transfer amount must be positive");
    }
    if (request.amount > std::numeric_limits<Amount>::max() - request.fee) {
        fail(ErrorCode::InvalidArgument, "amount + fee overflows");
    }
    const Amount needed = request.amount + request.fee;

    std::vector<const Output*> selected;
    Amount gathered = 0;
    for (const auto& out : wallet) {
        if (gathered >= needed) {
            break;
        }
        if (!pool.is_eligible(out)) {
            continue;
        }
        selected.push_back(&out);
        gathered += out.amount;
    }
    if (gathered < needed) {
        fail(ErrorCode::InsufficientFunds, "spendable " + std::to_string(gathered) + " < required " +
                                               std::to_string(needed));
    }

    TxDraft draft;
    draft.sender = request.sender;
    draft.receiver = request.dest;
    draft.intended_amount = request.amount;
    draft.fee = request.fee;
    draft.request_time = request.time;
    draft.inputs.reserve(selected.size());
    for (const Output* real : selected) {
        draft.inputs.push_back(select_decoys(pool, *real, request.ring_size, request.policy, rng));
    }
    draft.outputs.push_back({request.dest, request.amount});
    if (const Amount change = gathered - needed; change > 0) {
        draft.outputs.push_back({request.sender, change});
    }
    return draft;
}

}  // namespace ringtrace
