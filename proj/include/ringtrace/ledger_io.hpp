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

#include <filesystem>

#include "ringtrace/json_io.hpp"
#include "ringtrace/ledger.hpp"

namespace ringtrace {

// chain.json carries every field; public_chain.json carries the public
// projection only, and no key of it names a secret.

Json to_json(const Chain& chain);
Chain chain_from_json(const Json& doc);

Json to_json(const PublicChain& chain);
PublicChain public_chain_from_json(const Json& doc);

Json to_json(const ValidationReport& report);

void write_chain(const std::filesystem::path& path, const Chain& chain);
Chain read_chain(const std::filesystem::path& path);
void write_public_chain(const std::filesystem::path& path, const PublicChain& chain);
PublicChain read_public_chain(const std::filesystem::path& path);

}  // namespace ringtrace
