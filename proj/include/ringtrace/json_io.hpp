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
#include <string>

#include <json.hpp>

namespace ringtrace {

using Json = nlohmann::json;

/// Compact, key-sorted output: identical values always produce identical bytes.
void write_json(const std::filesystem::path& path, const Json& value, bool pretty = false);

/// Parses a file; syntax errors become SchemaError with the byte offset.
Json read_json(const std::filesystem::path& path);

/// Reads `value[key]` as T, throwing SchemaError("<where>.<key>") when the
/// field is missing or has the wrong type.
template <typename T>
T field(const Json& value, const char* key, const std::string& where);

}  // namespace ringtrace

#include "ringtrace/error.hpp"

namespace ringtrace {

template <typename T>
T field(const Json& value, const char* key, const std::string& where)
{
    if (!value.is_object()) {
        fail(ErrorCode::SchemaError, where + ": expected an object");
    }
    const auto it = value.find(key);
    if (it == value.end()) {
        fail(ErrorCode::SchemaError, where + "." + key + ": missing field");
    }
    try {
        return it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SchemaError, where + "." + key + ": " + e.what());
    }
}

}  // namespace ringtrace
