#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shotvar/calibration.hpp"
#include "shotvar/cltstats.hpp"
#include "shotvar/errors.hpp"
#include "shotvar/series.hpp"

namespace shotvar::io {

constexpr const char* kToolVersion = "0.1.0";

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---------------------------------------------------------------------------
// calibration ingest
// ---------------------------------------------------------------------------

/// Calibration file schema:
///   { "dt_seconds": number, "eplg": number, "unit": "dt" | "us",
///     "qubits": [ { "id": int, "t1": number, "t2": number,
///                   "p01": number, "p10": number }, ... ] }
/// All fields are required; with unit "us" the t1/t2 values are microseconds
/// and are converted to dt via dt_seconds on ingest. Invariant violations are
/// parse errors; physicality warnings are appended to `warnings` if given.
inline DeviceCalibration ingest_calibration(const std::string& path,
                                            std::vector<Diagnostic>* warnings = nullptr) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("calibration " + path + ": " + e.what());
    }
    auto require = [&](const nlohmann::json& obj, const char* key,
                       const std::string& where) -> const nlohmann::json& {
        if (!obj.contains(key))
            throw parse_error("calibration " + path + ": missing field " + where + "." + key);
        return obj.at(key);
    };
    auto number = [&](const nlohmann::json& v, const std::string& where) -> double {
        if (!v.is_number())
            throw parse_error("calibration " + path + ": " + where + " must be a number");
        return v.get<double>();
    };

    DeviceCalibration cal;
    cal.dt_seconds = number(require(doc, "dt_seconds", "$"), "$.dt_seconds");
    cal.eplg = number(require(doc, "eplg", "$"), "$.eplg");
    const auto& unit_v = require(doc, "unit", "$");
    if (!unit_v.is_string() || (unit_v != "dt" && unit_v != "us"))
        throw parse_error("calibration " + path + ": $.unit must be \"dt\" or \"us\"");
    const bool microseconds = unit_v == "us";
    const auto& qubits = require(doc, "qubits", "$");
    if (!qubits.is_array() || qubits.empty())
        throw parse_error("calibration " + path + ": $.qubits must be a nonempty array");

    double to_dt = 1.0;
    if (microseconds) {
        if (!(cal.dt_seconds > 0.0))
            throw parse_error("calibration " + path + ": unit \"us\" needs dt_seconds > 0");
        to_dt = 1e-6 / cal.dt_seconds;
    }
    std::size_t idx = 0;
    for (const auto& q : qubits) {
        std::string where = "$.qubits[" + std::to_string(idx) + "]";
        QubitCalibration qc;
        const auto& id = require(q, "id", where);
        if (!id.is_number_integer())
            throw parse_error("calibration " + path + ": " + where + ".id must be an integer");
        qc.id = id.get<int>();
        qc.t1 = number(require(q, "t1", where), where + ".t1") * to_dt;
        qc.t2 = number(require(q, "t2", where), where + ".t2") * to_dt;
        qc.p01 = number(require(q, "p01", where), where + ".p01");
        qc.p10 = number(require(q, "p10", where), where + ".p10");
        cal.qubits.push_back(qc);
        ++idx;
    }

    auto diags = validate_calibration(cal);
    std::string errors;
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) {
            if (!errors.empty()) errors += "; ";
            errors += d.field + (d.qubit_id >= 0 ? " (qubit " + std::to_string(d.qubit_id) + ")" : "") +
                      ": " + d.message;
        } else if (warnings) {
            warnings->push_back(d);
        }
    }
    if (!errors.empty()) throw parse_error("calibration " + path + ": " + errors);
    return cal;
}

// ---------------------------------------------------------------------------
// outcome series CSV
// ---------------------------------------------------------------------------

/// Header line `# seed=<u64>, spec=<label>, hash=<hex64>` followed by one
/// outcome per line.
inline void write_series_csv(const std::string& path, const OutcomeSeries& series) {
    std::ostringstream out;
    out << "# seed=" << series.seed << ", spec=" << series.spec_label
        << ", hash=" << hex64(series.spec_hash) << "\n";
    for (double v : series.values) out << format_full(v) << "\n";
    write_file(path, out.str());
}

inline OutcomeSeries read_series_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("# seed=", 0) != 0)
        throw parse_error("series " + path + ": missing `# seed=...` header");
    OutcomeSeries series;
    std::string rest = line.substr(7);
    auto comma = rest.find(", spec=");
    if (comma == std::string::npos)
        throw parse_error("series " + path + ": header missing spec field");
    series.seed = std::strtoull(rest.substr(0, comma).c_str(), nullptr, 10);
    rest = rest.substr(comma + 7);
    auto hash_pos = rest.rfind(", hash=");
    if (hash_pos == std::string::npos)
        throw parse_error("series " + path + ": header missing hash field");
    series.spec_label = rest.substr(0, hash_pos);
    series.spec_hash = std::strtoull(rest.substr(hash_pos + 7).c_str(), nullptr, 16);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str())
            throw parse_error("series " + path + ": bad value at line " + std::to_string(line_no));
        series.values.push_back(v);
    }
    if (series.values.empty()) throw parse_error("series " + path + ": no outcomes");
    return series;
}

// ---------------------------------------------------------------------------
// RSD curve / fit reports
// ---------------------------------------------------------------------------

inline void write_rsd_csv(const std::string& path, const clt::RsdCurve& curve) {
    std::ostringstream out;
    out << "log2_w,log2_rsd\n";
    for (const auto& p : curve.points)
        out << format_full(p.log2_w) << "," << format_full(p.log2_rsd) << "\n";
    write_file(path, out.str());
}

inline nlohmann::json fit_report_json(const clt::RsdCurve& curve, const clt::CFit& fit) {
    nlohmann::json j;
    j["c"] = fit.c;
    j["slope"] = fit.slope;
    j["slope_fixed"] = fit.slope_fixed;
    j["residual_rms"] = fit.residual_rms;
    j["n_points"] = fit.n_points;
    j["window_sizes"] = curve.window_sizes;
    j["n_windows"] = curve.n_windows;
    j["diagnostics"] = curve.diagnostics;
    return j;
}

// ---------------------------------------------------------------------------
// comparison reports
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string id;
    double c_pred = 0.0;
    double c_real = 0.0;
    double delta = 0.0;
    clt::Color color = clt::Color::Green;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<std::string> unmatched; // ids present on one side only
};

/// Joins predictions and measurements by id (prediction order), computing the
/// gap and its color class per row.
inline ComparisonReport build_comparison(
    const std::vector<std::pair<std::string, double>>& predictions,
    const std::vector<std::pair<std::string, double>>& measurements) {
    std::map<std::string, double> real;
    for (const auto& [id, v] : measurements) real[id] = v;
    ComparisonReport report;
    std::map<std::string, bool> used;
    for (const auto& [id, c_pred] : predictions) {
        auto it = real.find(id);
        if (it == real.end()) {
            report.unmatched.push_back(id);
            continue;
        }
        used[id] = true;
        clt::DeltaC d(c_pred, it->second);
        report.rows.push_back({id, d.c_pred, d.c_real, d.delta, clt::classify_delta_c(d)});
    }
    for (const auto& [id, v] : measurements)
        if (!used.count(id)) report.unmatched.push_back(id);
    return report;
}

inline void write_comparison_csv(const std::string& path, const ComparisonReport& report) {
    std::ostringstream out;
    out << "id,c_pred,c_real,delta,color\n";
    for (const auto& r : report.rows)
        out << r.id << "," << format_full(r.c_pred) << "," << format_full(r.c_real) << ","
            << format_full(r.delta) << "," << clt::to_string(r.color) << "\n";
    write_file(path, out.str());
}

/// Reads a two-column CSV `id,<value>`; the header row is skipped if its
/// second field is not numeric.
inline std::vector<std::pair<std::string, double>> read_id_value_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw parse_error(path + ": expected `id,value` at line " + std::to_string(line_no));
        std::string value_str = line.substr(comma + 1);
        if (auto next = value_str.find(','); next != std::string::npos) value_str.resize(next);
        char* end = nullptr;
        double v = std::strtod(value_str.c_str(), &end);
        if (end == value_str.c_str() || end == nullptr) {
            if (line_no == 1) continue; // header row
            throw parse_error(path + ": bad value at line " + std::to_string(line_no));
        }
        rows.emplace_back(line.substr(0, comma), v);
    }
    if (rows.empty()) throw parse_error(path + ": no data rows");
    return rows;
}

// ---------------------------------------------------------------------------
// wait encodings
// ---------------------------------------------------------------------------

struct WaitSpec {
    int reps = 0;
    WaitKind kind = WaitKind::Id;
};

/// Parses the compact wait shorthand: `10h`, `1000x`, `100id` = repetition
/// count followed by the gate kind.
inline WaitSpec parse_wait(const std::string& text) {
    std::size_t pos = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == 0) throw parse_error("wait spec '" + text + "': expected leading repetition count");
    WaitSpec w;
    w.reps = std::atoi(text.substr(0, pos).c_str());
    std::string kind = text.substr(pos);
    for (auto& ch : kind) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (kind == "id" || kind.empty())
        w.kind = WaitKind::Id;
    else if (kind == "x")
        w.kind = WaitKind::X;
    else if (kind == "h")
        w.kind = WaitKind::H;
    else
        throw parse_error("wait spec '" + text + "': unknown gate kind '" + kind + "'");
    return w;
}

// ---------------------------------------------------------------------------
// run manifests
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_hashes; // path -> fnv1a hex
    std::vector<std::string> outputs;
    std::string tool_version = kToolVersion;
    std::string timestamp;
};

inline std::string iso_timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Written as `<first output>.manifest.json`, tying every output of a command
/// to the exact inputs and seed that produced it.
inline void write_manifest(const RunManifest& m) {
    if (m.outputs.empty()) return;
    nlohmann::json j;
    j["command"] = m.command;
    j["seed"] = m.seed;
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [path, hash] : m.input_hashes) inputs[path] = hash;
    j["inputs"] = inputs;
    j["outputs"] = m.outputs;
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp.empty() ? iso_timestamp_now() : m.timestamp;
    write_file(m.outputs.front() + ".manifest.json", j.dump(2) + "\n");
}

inline std::string hash_of_file(const std::string& path) { return hex64(fnv1a(read_file(path))); }

} // namespace shotvar::io
