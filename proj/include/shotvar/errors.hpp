#pragma once

#include <stdexcept>
#include <string>

namespace shotvar {

// Input file or schema violation. CLI exit code 2.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request exceeds what the data or the engine can serve (series too short,
// too many qubits). CLI exit code 3.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fewer data points than the estimator needs.
struct insufficient_data_error : capacity_error {
    using capacity_error::capacity_error;
};

// Statistics are degenerate: a deterministic distribution, zero spread,
// zero total variance. Callers must distinguish this from a noisy result.
// CLI exit code 4.
struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace shotvar
