#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shotvar {

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Ordered per-shot outcomes: 0/1 for bit experiments, real observable
/// estimates otherwise. Carries the seed and a label+hash of the generating
/// experiment so any downstream file can be traced back to its source.
struct OutcomeSeries {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string spec_label;
    std::uint64_t spec_hash = 0;

    std::size_t size() const { return values.size(); }

    static OutcomeSeries with_label(std::vector<double> values, std::uint64_t seed,
                                    std::string label) {
        OutcomeSeries s;
        s.values = std::move(values);
        s.seed = seed;
        s.spec_hash = fnv1a(label);
        s.spec_label = std::move(label);
        return s;
    }
};

} // namespace shotvar
