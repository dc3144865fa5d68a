#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "shotvar/errors.hpp"

namespace shotvar {

enum class WaitKind { Id, X, H };
enum class MeasureBasis { Z, X };

inline const char* to_string(WaitKind k) {
    switch (k) {
        case WaitKind::Id: return "id";
        case WaitKind::X: return "x";
        case WaitKind::H: return "h";
    }
    return "?";
}

/// Per-qubit calibration. Times are in dt units (one pulse time unit);
/// p01/p10 are the probabilities of reading 0 as 1 and 1 as 0.
struct QubitCalibration {
    int id = 0;
    double t1 = 0.0;
    double t2 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
};

struct DeviceCalibration {
    double dt_seconds = 0.0;
    double eplg = 0.0; // two-qubit error per layered gate, dimensionless
    std::vector<QubitCalibration> qubits;

    const QubitCalibration& qubit(int id) const {
        for (const auto& q : qubits)
            if (q.id == id) return q;
        throw std::invalid_argument("no qubit with id " + std::to_string(id) + " in calibration");
    }
    bool has_qubit(int id) const {
        for (const auto& q : qubits)
            if (q.id == id) return true;
        return false;
    }
};

/// A wait-style circuit: prepare, idle for `depth` dt with wait gates, measure.
/// basis Z reads amplitude decay (prepare superposition, wait, measure);
/// basis X reads phase decay (prepare, wait, undo preparation, measure).
struct CircuitSpec {
    int n_qubits = 1;
    WaitKind wait_kind = WaitKind::Id;
    int wait_reps = 0;
    double depth = 0.0; // total depth in dt units, >= wait_reps
    bool pre_measure = false;
    MeasureBasis basis = MeasureBasis::Z;
};

struct NormalizedTime {
    double tau = 0.0; // t / T_i, dimensionless
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    int qubit_id = -1; // -1: device-wide
    std::string field;
    std::string message;
};

/// Checks every calibration invariant. Returns an empty list iff the
/// calibration is well formed; violations come back as diagnostics rather
/// than exceptions so a report can show all of them at once. t2 > 2*t1 is
/// physically suspect but still usable, so it is only a warning.
inline std::vector<Diagnostic> validate_calibration(const DeviceCalibration& cal) {
    std::vector<Diagnostic> out;
    auto err = [&](int id, std::string field, std::string msg) {
        out.push_back({Severity::Error, id, std::move(field), std::move(msg)});
    };
    if (!(cal.dt_seconds > 0.0))
        err(-1, "dt_seconds", "dt_seconds must be > 0");
    if (!(cal.eplg >= 0.0 && cal.eplg < 1.0))
        err(-1, "eplg", "eplg must be in [0, 1)");
    std::set<int> seen;
    for (const auto& q : cal.qubits) {
        if (!seen.insert(q.id).second)
            err(q.id, "id", "duplicate qubit id");
        if (!(q.t1 > 0.0)) err(q.id, "t1", "t1 must be > 0");
        if (!(q.t2 > 0.0)) err(q.id, "t2", "t2 must be > 0");
        if (!(q.p01 >= 0.0 && q.p01 < 1.0)) err(q.id, "p01", "p01 must be in [0, 1)");
        if (!(q.p10 >= 0.0 && q.p10 < 1.0)) err(q.id, "p10", "p10 must be in [0, 1)");
        if (q.t1 > 0.0 && q.t2 > 2.0 * q.t1)
            out.push_back({Severity::Warning, q.id, "t2",
                           "t2 exceeds 2*t1 (unphysical for pure decoherence)"});
    }
    return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

/// tau = t / T. Both arguments in the same unit (dt here).
inline NormalizedTime normalize_time(double t, double T) {
    if (!(T > 0.0)) throw std::domain_error("normalize_time: T must be > 0");
    if (t < 0.0) throw std::domain_error("normalize_time: t must be >= 0");
    return NormalizedTime{t / T};
}

inline void validate_circuit_spec(const CircuitSpec& spec) {
    if (spec.n_qubits < 1)
        throw std::invalid_argument("circuit spec: n_qubits must be >= 1");
    if (spec.wait_reps < 0)
        throw std::invalid_argument("circuit spec: wait_reps must be >= 0");
    if (spec.depth < spec.wait_reps)
        throw std::invalid_argument("circuit spec: depth must be >= wait_reps");
}

} // namespace shotvar
