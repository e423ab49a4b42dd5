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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ringtrace {

enum class ErrorCode {
    InvalidArgument,
    Io,
    SchemaError,
    // ledger
    PoolTooSmall,
    InsufficientFunds,
    DoubleSpend,
    InvalidRing,
    // economy
    UnknownScenario,
    Stalled,
    ModeRequiresSecrets,
    // features
    NoRings,
    EmptyChain,
    NoTwoRingTxs,
    // ml
    DegenerateLabels,
    NoSplits,
    Diverged,
    ConstantTarget,
    TooFewSamples,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library is an Error carrying a stable code, so
// callers (and the CLI's JSON error channel) can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ringtrace
