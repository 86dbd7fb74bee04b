// Copyright 2026 The qpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qpt/measurement.hpp"
#include "qpt/metrics.hpp"
#include "qpt/sdp.hpp"

namespace qpt {

using Json = nlohmann::json;

/// Malformed or schema-violating input file. The message starts with
/// "file:line:col:" when a position is known.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string tool_version();

std::string sha256_hex(std::string_view bytes);
std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: full write then close.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// A parsed JSON document that remembers its source text, so that schema
/// errors can point at a line.
struct JsonDocument {
    std::string source;  // file name used in diagnostics
    std::string text;
    Json root;

    /// SchemaError "source:line:col: <where>: <what>", positioned at the first
    /// occurrence of the last key of `where` (a dotted path).
    [[noreturn]] void fail(const std::string& where, const std::string& what) const;

    const Json& at(const Json& obj, const std::string& key, const std::string& where) const;
    double number(const Json& obj, const std::string& key, const std::string& where) const;
    double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where) const;
    long integer(const Json& obj, const std::string& key, const std::string& where) const;
    std::uint64_t unsigned_or(const Json& obj, const std::string& key, std::uint64_t fallback,
                              const std::string& where) const;
    bool boolean_or(const Json& obj, const std::string& key, bool fallback, const std::string& where) const;
    std::string string(const Json& obj, const std::string& key, const std::string& where) const;
    RVector vector(const Json& obj, const std::string& key, const std::string& where) const;
    /// Requires root["schema"] == expected.
    void expect_schema(const std::string& expected) const;
};

JsonDocument parse_json(std::string text, std::string source);
JsonDocument load_json(const std::filesystem::path& path);
/// Two-space indented dump with a trailing newline. Doubles round-trip exactly.
std::string dump_json(const Json& j);

constexpr const char* kRecordSchema = "qpt.record/1";
constexpr const char* kScenarioSchema = "qpt.scenario/1";
constexpr const char* kStudySchema = "qpt.study/1";
constexpr const char* kResultSchema = "qpt.result/1";

/// values[i][j] with i the preparation index. Adds "schema", "tool_version"
/// and "digest" (SHA-256 of the dump without the digest field).
Json record_to_json(const MeasurementRecord& r);
MeasurementRecord record_from_json(const JsonDocument& doc);
/// Recomputes the embedded digest.
std::string record_content_digest(const Json& record);

/// Row-major flattening R[i * d^2 + j] = R_ij.
Json ptm_to_json(const PauliTransferMatrix& r);
PauliTransferMatrix ptm_from_json(const JsonDocument& doc, const Json& flat, int n_qubits, const std::string& where);

/// {"re": [...], "im": [...]}, both row-major.
Json choi_to_json(const ChoiMatrix& c);

Json report_to_json(const SolverReport& r);
Json distances_to_json(const Distances& d);
Json diagnostics_to_json(const GateDiagnostics& d);

/// One line per preparation setting, one column per analysis setting.
std::string record_csv(const MeasurementRecord& r);
/// row,col,value with Pauli labels.
std::string ptm_grid_csv(const PauliTransferMatrix& r);
/// column,row,index,value: one bar group per input Pauli.
std::string pauli_bars_csv(const PauliTransferMatrix& r);
/// Self-contained heatmap, blue (-1) to white (0) to red (+1).
std::string ptm_heatmap_svg(const PauliTransferMatrix& r, const std::string& title);

/// Quotes a CSV field when needed.
std::string csv_field(const std::string& s);
/// Shortest decimal that round-trips.
std::string format_double(double v);

}  // namespace qpt
