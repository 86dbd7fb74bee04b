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

#include "qpt/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qpt/numeric_policy.hpp"

namespace qpt {

std::string tool_version() { return std::string("qpt ") + QPT_VERSION; }

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot write file");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

namespace {

std::pair<int, int> line_col(std::string_view text, size_t offset) {
    offset = std::min(offset, text.size());
    int line = 1, col = 1;
    for (size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string last_key(const std::string& where) {
    const size_t dot = where.rfind('.');
    std::string k = dot == std::string::npos ? where : where.substr(dot + 1);
    const size_t bracket = k.find('[');
    if (bracket != std::string::npos) k = k.substr(0, bracket);
    return k;
}

}  // namespace

void JsonDocument::fail(const std::string& where, const std::string& what) const {
    std::string pos;
    const std::string key = last_key(where);
    if (!key.empty()) {
        const size_t at = text.find("\"" + key + "\"");
        if (at != std::string::npos) {
            const auto [l, c] = line_col(text, at);
            pos = ":" + std::to_string(l) + ":" + std::to_string(c);
        }
    }
    throw SchemaError(source + pos + ": " + where + ": " + what);
}

const Json& JsonDocument::at(const Json& obj, const std::string& key, const std::string& where) const {
    if (!obj.is_object()) fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing required field");
    return *it;
}

double JsonDocument::number(const Json& obj, const std::string& key, const std::string& where) const {
    const Json& v = at(obj, key, where);
    if (!v.is_number()) fail(where.empty() ? key : where + "." + key, "expected a number");
    return v.get<double>();
}

double JsonDocument::number_or(const Json& obj, const std::string& key, double fallback,
                               const std::string& where) const {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return number(obj, key, where);
}

long JsonDocument::integer(const Json& obj, const std::string& key, const std::string& where) const {
    const Json& v = at(obj, key, where);
    if (!v.is_number_integer()) fail(where.empty() ? key : where + "." + key, "expected an integer");
    return v.get<long>();
}

std::uint64_t JsonDocument::unsigned_or(const Json& obj, const std::string& key, std::uint64_t fallback,
                                        const std::string& where) const {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(where.empty() ? key : where + "." + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool JsonDocument::boolean_or(const Json& obj, const std::string& key, bool fallback, const std::string& where) const {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) fail(where.empty() ? key : where + "." + key, "expected true or false");
    return v.get<bool>();
}

std::string JsonDocument::string(const Json& obj, const std::string& key, const std::string& where) const {
    const Json& v = at(obj, key, where);
    if (!v.is_string()) fail(where.empty() ? key : where + "." + key, "expected a string");
    return v.get<std::string>();
}

RVector JsonDocument::vector(const Json& obj, const std::string& key, const std::string& where) const {
    const Json& v = at(obj, key, where);
    const std::string w = where.empty() ? key : where + "." + key;
    if (!v.is_array()) fail(w, "expected an array of numbers");
    RVector out(static_cast<long>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(w, "entry " + std::to_string(i) + " is not a number");
        out(static_cast<long>(i)) = v[i].get<double>();
    }
    return out;
}

void JsonDocument::expect_schema(const std::string& expected) const {
    const std::string got = string(root, "schema", "");
    if (got != expected) fail("schema", "expected \"" + expected + "\", found \"" + got + "\"");
}

JsonDocument parse_json(std::string text, std::string source) {
    JsonDocument doc;
    doc.source = std::move(source);
    doc.text = std::move(text);
    try {
        doc.root = Json::parse(doc.text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [l, c] = line_col(doc.text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        const size_t colon = what.find(": ", what.find("parse error"));
        if (colon != std::string::npos) what = what.substr(colon + 2);
        throw SchemaError(doc.source + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + what);
    }
    if (!doc.root.is_object()) throw SchemaError(doc.source + ":1:1: top level must be an object");
    return doc;
}

JsonDocument load_json(const std::filesystem::path& path) { return parse_json(read_text_file(path), path.string()); }

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string record_content_digest(const Json& record) {
    Json copy = record;
    copy.erase("digest");
    return sha256_hex(copy.dump());
}

Json record_to_json(const MeasurementRecord& r) {
    r.validate();
    Json j;
    j["schema"] = kRecordSchema;
    j["tool_version"] = tool_version();
    j["n_qubits"] = r.n_qubits;
    j["labels_prep"] = r.labels_prep;
    j["labels_meas"] = r.labels_meas;
    Json values = Json::array();
    for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < r.values.cols(); ++k) row.push_back(r.values(i, k));
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    j["variances"] = std::vector<double>(r.variances.data(), r.variances.data() + r.variances.size());
    j["shots"] = r.shots;
    j["seed"] = r.seed;
    try {
        j["scenario"] = Json::parse(r.scenario);
    } catch (const nlohmann::json::parse_error&) {
        throw DomainError("record scenario is not valid JSON");
    }
    j["digest"] = record_content_digest(j);
    return j;
}

MeasurementRecord record_from_json(const JsonDocument& doc) {
    doc.expect_schema(kRecordSchema);
    const Json& root = doc.root;
    MeasurementRecord r;
    r.n_qubits = static_cast<int>(doc.integer(root, "n_qubits", ""));
    for (const char* key : {"labels_prep", "labels_meas"}) {
        const Json& arr = doc.at(root, key, "");
        if (!arr.is_array()) doc.fail(key, "expected an array of strings");
        std::vector<std::string> labels;
        for (const auto& v : arr) {
            if (!v.is_string()) doc.fail(key, "expected an array of strings");
            labels.push_back(v.get<std::string>());
        }
        (std::string(key) == "labels_prep" ? r.labels_prep : r.labels_meas) = std::move(labels);
    }
    const Json& values = doc.at(root, "values", "");
    const long np = static_cast<long>(r.labels_prep.size());
    const long nm = static_cast<long>(r.labels_meas.size());
    if (!values.is_array() || static_cast<long>(values.size()) != np) {
        doc.fail("values", "expected " + std::to_string(np) + " rows");
    }
    r.values = RMatrix(np, nm);
    for (long i = 0; i < np; ++i) {
        const Json& row = values[i];
        if (!row.is_array() || static_cast<long>(row.size()) != nm) {
            doc.fail("values", "row " + std::to_string(i) + " needs " + std::to_string(nm) + " entries");
        }
        for (long k = 0; k < nm; ++k) {
            if (!row[k].is_number()) doc.fail("values", "row " + std::to_string(i) + " has a non-numeric entry");
            r.values(i, k) = row[k].get<double>();
        }
    }
    r.variances = doc.vector(root, "variances", "");
    r.shots = doc.integer(root, "shots", "");
    r.seed = doc.unsigned_or(root, "seed", 0, "");
    r.scenario = root.contains("scenario") ? root["scenario"].dump() : "{}";
    if (root.contains("digest")) {
        if (!root["digest"].is_string() || root["digest"].get<std::string>() != record_content_digest(root)) {
            doc.fail("digest", "does not match the record content");
        }
    }
    try {
        r.validate();
    } catch (const DomainError& e) {
        doc.fail("values", e.what());
    }
    return r;
}

Json ptm_to_json(const PauliTransferMatrix& r) {
    Json flat = Json::array();
    for (int i = 0; i < r.size(); ++i)
        for (int k = 0; k < r.size(); ++k) flat.push_back(r(i, k));
    return flat;
}

Json choi_to_json(const ChoiMatrix& c) {
    Json re = Json::array();
    Json im = Json::array();
    const CMatrix& m = c.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re.push_back(m(i, k).real());
            im.push_back(m(i, k).imag());
        }
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

PauliTransferMatrix ptm_from_json(const JsonDocument& doc, const Json& flat, int n_qubits, const std::string& where) {
    const long n2 = 1L << (2 * n_qubits);
    if (!flat.is_array() || static_cast<long>(flat.size()) != n2 * n2) {
        doc.fail(where, "expected " + std::to_string(n2 * n2) + " numbers in row-major order");
    }
    RMatrix m(n2, n2);
    for (long i = 0; i < n2; ++i) {
        for (long k = 0; k < n2; ++k) {
            const Json& v = flat[i * n2 + k];
            if (!v.is_number()) doc.fail(where, "entry " + std::to_string(i * n2 + k) + " is not a number");
            m(i, k) = v.get<double>();
        }
    }
    return PauliTransferMatrix(n_qubits, m);
}

Json report_to_json(const SolverReport& r) {
    Json j;
    j["method"] = to_string(r.method);
    j["status"] = to_string(r.status);
    j["iterations"] = r.iterations;
    j["primal_objective"] = r.primal_objective;
    j["dual_objective"] = std::isfinite(r.dual_objective) ? Json(r.dual_objective) : Json(nullptr);
    j["min_choi_eigenvalue"] = r.min_choi_eigenvalue;
    j["kkt_residual"] = r.kkt_residual;
    return j;
}

Json distances_to_json(const Distances& d) {
    return Json{{"half_trace_norm", 0.5 * d.trace_norm},
                {"half_sqrt_trace_norm", 0.5 * d.sqrt_trace_norm},
                {"half_frobenius", 0.5 * d.frobenius}};
}

Json diagnostics_to_json(const GateDiagnostics& d) {
    Json j;
    j["F_p"] = d.f_p;
    j["F_g"] = d.f_g;
    j["delta_F_g"] = d.delta_f_g;
    j["R_II"] = d.r_ii;
    j["F_pure"] = d.f_pure;
    j["lambda_max"] = d.lambda_max;
    j["negative_weight"] = d.neg_weight;
    j["distance_mle_ideal"] = distances_to_json(d.mle_ideal);
    j["distance_mle_data"] = distances_to_json(d.mle_data);
    j["distance_data_ideal"] = distances_to_json(d.data_ideal);
    return j;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string record_csv(const MeasurementRecord& r) {
    std::ostringstream ss;
    ss << "prep";
    for (const auto& l : r.labels_meas) ss << ',' << csv_field(l);
    ss << '\n';
    for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
        ss << csv_field(r.labels_prep[i]);
        for (Eigen::Index k = 0; k < r.values.cols(); ++k) ss << ',' << format_double(r.values(i, k));
        ss << '\n';
    }
    return ss.str();
}

std::string ptm_grid_csv(const PauliTransferMatrix& r) {
    const auto& labels = pauli_basis(r.n_qubits()).labels;
    std::ostringstream ss;
    ss << "row,col,value\n";
    for (int i = 0; i < r.size(); ++i)
        for (int k = 0; k < r.size(); ++k) ss << labels[i] << ',' << labels[k] << ',' << format_double(r(i, k)) << '\n';
    return ss.str();
}

std::string pauli_bars_csv(const PauliTransferMatrix& r) {
    const auto& labels = pauli_basis(r.n_qubits()).labels;
    std::ostringstream ss;
    ss << "input,output,index,value\n";
    for (int k = 0; k < r.size(); ++k)
        for (int i = 0; i < r.size(); ++i)
            ss << labels[k] << ',' << labels[i] << ',' << k * r.size() + i << ',' << format_double(r(i, k)) << '\n';
    return ss.str();
}

namespace {

std::string heat_color(double v) {
    const double t = std::clamp(v, -1.0, 1.0);
    int red = 255, green = 255, blue = 255;
    if (t >= 0) {
        green = blue = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    } else {
        red = green = static_cast<int>(std::lround(255.0 * (1.0 + t)));
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", red, green, blue);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string ptm_heatmap_svg(const PauliTransferMatrix& r, const std::string& title) {
    const auto& labels = pauli_basis(r.n_qubits()).labels;
    const int n = r.size();
    const int cell = 28, left = 40, top = 48;
    const int width = left + n * cell + 16, height = top + n * cell + 16;
    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"monospace\" font-size=\"9\">\n";
    ss << "<text x=\"" << left << "\" y=\"14\" font-size=\"12\">" << xml_escape(title) << "</text>\n";
    for (int k = 0; k < n; ++k) {
        ss << "<text x=\"" << left + k * cell + cell / 2 << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">"
           << labels[k] << "</text>\n";
    }
    for (int i = 0; i < n; ++i) {
        ss << "<text x=\"" << left - 4 << "\" y=\"" << top + i * cell + cell / 2 + 3 << "\" text-anchor=\"end\">"
           << labels[i] << "</text>\n";
        for (int k = 0; k < n; ++k) {
            ss << "<rect x=\"" << left + k * cell << "\" y=\"" << top + i * cell << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << heat_color(r(i, k)) << "\" stroke=\"#999\" stroke-width=\"0.5\">"
               << "<title>R[" << labels[i] << "," << labels[k] << "] = " << format_double(r(i, k)) << "</title></rect>\n";
        }
    }
    ss << "</svg>\n";
    return ss.str();
}

}  // namespace qpt
