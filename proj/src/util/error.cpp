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

#include "ringtrace/error.hpp"

namespace ringtrace {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::InsufficientFunds: return "InsufficientFunds";
    case ErrorCode::DoubleSpend: return "DoubleSpend";
    case ErrorCode::InvalidRing: return "InvalidRing";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::Stalled: return "Stalled";
    case ErrorCode::ModeRequiresSecrets: return "ModeRequiresSecrets";
    case ErrorCode::NoRings: return "NoRings";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::NoTwoRingTxs: return "NoTwoRingTxs";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::NoSplits: return "NoSplits";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::ConstantTarget: return "ConstantTarget";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

}  // namespace ringtrace
