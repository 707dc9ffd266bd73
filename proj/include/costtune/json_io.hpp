/* Copyright 2026 The costtune Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COSTTUNE_JSON_IO_HPP_
#define COSTTUNE_JSON_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "costtune/error.hpp"
#include "json.hpp"

namespace costtune {

using Json = nlohmann::json;

// 17 significant digits, enough to round-trip any double.
std::string format_decimal(double v);
// 6 significant digits for tabular output.
std::string format_short(double v);

// Parses a decimal string produced by format_decimal. Throws `code`.
double parse_decimal(std::string_view text, ErrorCode code = ErrorCode::kParse);

// Serializes like Json::dump but prints every floating-point number with
// format_decimal, so output is stable across library versions.
std::string dump_json(const Json& value, int indent = 2);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace costtune

#endif  // COSTTUNE_JSON_IO_HPP_
