#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "shotvar/calibration.hpp"
#include "shotvar/density_matrix.hpp"
#include "shotvar/errors.hpp"
#include "shotvar/observable.hpp"
#include "shotvar/pauli.hpp"
#include "shotvar/rng.hpp"
#include "shotvar/series.hpp"

namespace shotvar::sim {

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline OutcomeSeries bernoulli_series(double p1, std::size_t shots, std::uint64_t seed,
                                      std::string label) {
    CounterRng rng(seed, 0);
    std::vector<double> values(shots);
    for (std::size_t i = 0; i < shots; ++i) values[i] = rng.bernoulli(p1, i) ? 1.0 : 0.0;
    return OutcomeSeries::with_label(std::move(values), seed, std::move(label));
}

} // namespace detail

/// Probability of *reading* 1 given the true excitation probability p1 and
/// the readout confusion pair: p1 + p01 (1 - p1) - p10 p1.
inline double effective_p1_spam(double p1, double p01, double p10) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(p1) || !in01(p01) || !in01(p10))
        throw std::domain_error("effective_p1_spam: probabilities must be in [0, 1]");
    return p1 + p01 * (1.0 - p1) - p10 * p1;
}

/// i.i.d. Bernoulli(p1) bits; the same seed replays bit-identically on every
/// platform.
inline OutcomeSeries sample_coin(double p1, std::size_t shots, std::uint64_t seed) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::domain_error("sample_coin: p1 must be in [0, 1]");
    if (shots < 1) throw std::domain_error("sample_coin: shots must be >= 1");
    return detail::bernoulli_series(p1, shots, seed,
                                    "coin;p1=" + detail::fmt(p1) + ";shots=" + std::to_string(shots));
}

/// Amplitude-decay coin: superposition prepared, idled for t dt, measured.
/// The |1> component survives with e^{-t/T1}, so the ideal read-1 probability
/// is e^{-t/T1}/2, then readout confusion is applied.
inline OutcomeSeries sample_t1_coin(const QubitCalibration& q, double t, std::size_t shots,
                                    std::uint64_t seed) {
    if (t < 0.0) throw std::domain_error("sample_t1_coin: t must be >= 0");
    if (!(q.t1 > 0.0)) throw std::domain_error("sample_t1_coin: T1 must be > 0");
    double p1_ideal = 0.5 * std::exp(-t / q.t1);
    double p1 = effective_p1_spam(p1_ideal, q.p01, q.p10);
    return detail::bernoulli_series(p1, shots, seed,
                                    "t1;qubit=" + std::to_string(q.id) + ";t=" + detail::fmt(t) +
                                        ";shots=" + std::to_string(shots));
}

/// Phase-decay coin: prepare, idle, undo the preparation, measure. The ideal
/// read-0 probability is (1 + e^{-t/T2})/2, then readout confusion. The
/// pre_measure flag is a hardware mitigation artifact: recorded in the label,
/// no effect on the ideal model.
inline OutcomeSeries sample_t2_coin(const QubitCalibration& q, double t, bool pre_measure,
                                    std::size_t shots, std::uint64_t seed) {
    if (t < 0.0) throw std::domain_error("sample_t2_coin: t must be >= 0");
    if (!(q.t2 > 0.0)) throw std::domain_error("sample_t2_coin: T2 must be > 0");
    double p1_ideal = 0.5 * (1.0 - std::exp(-t / q.t2));
    double p1 = effective_p1_spam(p1_ideal, q.p01, q.p10);
    return detail::bernoulli_series(p1, shots, seed,
                                    "t2;qubit=" + std::to_string(q.id) + ";t=" + detail::fmt(t) +
                                        ";pre=" + (pre_measure ? "1" : "0") +
                                        ";shots=" + std::to_string(shots));
}

namespace detail {

/// Terms that share a tensor measurement basis (qubit-wise: equal letters or
/// I) are measured together. Greedy assignment in term order.
struct MeasureGroup {
    std::string basis;               // per qubit: 'X'/'Y'/'Z' or '-' if free
    std::vector<std::size_t> terms;  // indices of non-identity terms
};

inline std::vector<MeasureGroup> group_terms(const obs::PauliHamiltonian& h) {
    std::vector<MeasureGroup> groups;
    const auto& terms = h.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (obs::PauliHamiltonian::is_identity(terms[i].word)) continue;
        const std::string& w = terms[i].word;
        MeasureGroup* slot = nullptr;
        for (auto& g : groups) {
            bool ok = true;
            for (std::size_t q = 0; q < w.size(); ++q)
                if (w[q] != 'I' && g.basis[q] != '-' && g.basis[q] != w[q]) {
                    ok = false;
                    break;
                }
            if (ok) {
                slot = &g;
                break;
            }
        }
        if (!slot) {
            groups.push_back({std::string(w.size(), '-'), {}});
            slot = &groups.back();
        }
        for (std::size_t q = 0; q < w.size(); ++q)
            if (w[q] != 'I') slot->basis[q] = w[q];
        slot->terms.push_back(i);
    }
    return groups;
}

inline Eigen::Matrix2cd basis_rotation(char b) {
    switch (b) {
        case 'X': return gates::x_basis_rotation();
        case 'Y': return gates::y_basis_rotation();
        default: return gates::identity();
    }
}

} // namespace detail

/// Samples per-shot estimates of <H> on rho. Terms are grouped by shared
/// tensor basis; every shot picks one group uniformly at random (seeded, so
/// replay stays exact) and contributes that group's eigenvalue sum scaled by
/// the group count, the inverse of the selection probability. Identity terms
/// add their coefficient to every shot. The shots are then i.i.d. draws of an
/// unbiased single-shot estimator of the readout-adjusted Tr(rho H), which is
/// what the windowed-CLT analysis assumes: a deterministic per-group split
/// would imprint the group cycle on consecutive window means and bend the
/// log-RSD slope away from -1/2.
inline OutcomeSeries measure_observable(const DensityMatrix& rho, const obs::PauliHamiltonian& h,
                                        std::size_t shots, const DeviceCalibration& cal,
                                        std::uint64_t seed) {
    const int n = rho.n_qubits();
    if (h.n_qubits() != n)
        throw std::invalid_argument("measure_observable: operator/state qubit count mismatch");
    if (n > obs::kMaxQubits)
        throw capacity_error("measure_observable: more than " + std::to_string(obs::kMaxQubits) +
                             " qubits");
    if (static_cast<int>(cal.qubits.size()) < n)
        throw std::invalid_argument("measure_observable: calibration has fewer qubits than state");
    if (shots < 1) throw std::domain_error("measure_observable: shots must be >= 1");

    const double identity_part = h.identity_coefficient();
    auto groups = detail::group_terms(h);
    const Eigen::Index dim = rho.dim();

    // Per group: rotate into the measurement basis once and keep the diagonal
    // outcome distribution as a CDF.
    struct Prepared {
        std::vector<double> cdf;
        std::vector<std::size_t> terms;
    };
    std::vector<Prepared> prepared;
    prepared.reserve(groups.size());
    for (const auto& g : groups) {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
        for (int q = 0; q < n; ++q)
            u = obs::PauliHamiltonian::kron(u, detail::basis_rotation(g.basis[q]));
        Eigen::MatrixXcd rotated = u * rho.matrix() * u.adjoint();
        std::vector<double> cdf(dim);
        double acc = 0.0;
        for (Eigen::Index z = 0; z < dim; ++z) {
            acc += std::max(0.0, rotated(z, z).real());
            cdf[z] = acc;
        }
        for (auto& c : cdf) c /= acc; // renormalize clipped negatives
        prepared.push_back({std::move(cdf), g.terms});
    }

    std::vector<double> values(shots);
    if (prepared.empty()) {
        // identity-only observable: every shot is the constant
        std::fill(values.begin(), values.end(), identity_part);
    } else {
        const std::size_t n_groups = prepared.size();
        const double group_scale = static_cast<double>(n_groups);
        const auto& terms = h.terms();
        CounterRng rng(seed, 1);
        CounterRng group_rng(seed, 2);
        const std::uint64_t draws_per_shot = 1 + static_cast<std::uint64_t>(n);
        for (std::size_t j = 0; j < shots; ++j) {
            std::size_t g = n_groups == 1 ? 0 : group_rng.word(j) % n_groups;
            const auto& prep = prepared[g];
            double u = rng.uniform(j * draws_per_shot);
            std::size_t z = std::lower_bound(prep.cdf.begin(), prep.cdf.end(), u) - prep.cdf.begin();
            if (z >= prep.cdf.size()) z = prep.cdf.size() - 1;
            // readout confusion per qubit
            std::size_t z_read = z;
            for (int q = 0; q < n; ++q) {
                int bit = static_cast<int>(z_read >> (n - 1 - q)) & 1;
                const auto& qc = cal.qubits[static_cast<std::size_t>(q)];
                double flip_p = bit ? qc.p10 : qc.p01;
                if (flip_p > 0.0 &&
                    rng.bernoulli(flip_p, j * draws_per_shot + 1 + static_cast<std::uint64_t>(q)))
                    z_read ^= std::size_t(1) << (n - 1 - q);
            }
            double v = 0.0;
            for (std::size_t ti : prep.terms) {
                double sign = 1.0;
                const std::string& w = terms[ti].word;
                for (int q = 0; q < n; ++q)
                    if (w[static_cast<std::size_t>(q)] != 'I' && ((z_read >> (n - 1 - q)) & 1))
                        sign = -sign;
                v += terms[ti].coeff * sign;
            }
            values[j] = identity_part + v * group_scale;
        }
    }
    return OutcomeSeries::with_label(std::move(values), seed,
                                     "observable;n=" + std::to_string(n) +
                                         ";terms=" + std::to_string(h.terms().size()) +
                                         ";shots=" + std::to_string(shots));
}

/// Ansatz configuration for observable experiments: layer count, per-layer
/// pair rotation angles (missing angles are zero), and the initial
/// computational occupation (-1 picks the basis state minimizing the
/// operator's diagonal, the product-state mean-field choice).
struct AnsatzSpec {
    int reps = 0;
    std::vector<double> angles;
    int occupation = -1;
};

namespace detail {

inline unsigned min_diagonal_state(const obs::PauliHamiltonian& h) {
    Eigen::MatrixXcd m = h.to_matrix();
    Eigen::Index best = 0;
    double best_e = m(0, 0).real();
    for (Eigen::Index z = 1; z < m.rows(); ++z)
        if (m(z, z).real() < best_e) {
            best_e = m(z, z).real();
            best = z;
        }
    return static_cast<unsigned>(best);
}

} // namespace detail

/// Builds the ansatz state for an observable experiment: occupation init,
/// `reps` layers of excitation-preserving pair rotations on the linear chain
/// with per-gate depolarizing eplg/2, then per-qubit damping for the declared
/// depth (one uniform schedule; damping composes exponentially so a single
/// application is exact).
inline DensityMatrix build_ansatz_state(const CircuitSpec& spec, const DeviceCalibration& cal,
                                        const obs::PauliHamiltonian& h, const AnsatzSpec& ansatz) {
    const int n = h.n_qubits();
    unsigned occ = ansatz.occupation >= 0 ? static_cast<unsigned>(ansatz.occupation)
                                          : detail::min_diagonal_state(h);
    DensityMatrix rho = DensityMatrix::pure_basis_state(n, occ);
    const double gate_eps = cal.eplg / 2.0;
    std::size_t angle_index = 0;
    for (int rep = 0; rep < ansatz.reps; ++rep) {
        for (int q = 0; q + 1 < n; ++q) {
            double theta =
                angle_index < ansatz.angles.size() ? ansatz.angles[angle_index] : 0.0;
            ++angle_index;
            rho = apply_gate(rho, gates::excitation_preserving(theta), {q, q + 1});
            if (gate_eps > 0.0) {
                rho = apply_depolarizing(rho, q, gate_eps);
                rho = apply_depolarizing(rho, q + 1, gate_eps);
            }
        }
    }
    if (spec.depth > 0.0) {
        for (int q = 0; q < n; ++q) {
            const auto& qc = cal.qubits[static_cast<std::size_t>(q)];
            auto [g1, g2] = damping_gammas(spec.depth, qc.t1, qc.t2);
            rho = apply_damping(rho, q, g1, g2);
        }
    }
    return rho;
}

/// Dispatches a circuit spec to the right sampler. Bit experiments use the
/// first calibration qubit: basis Z is the amplitude-decay coin (with depth 0
/// it reduces to the plain coin), basis X the phase-decay coin. With an
/// observable the ansatz state is built and measured shot by shot.
inline OutcomeSeries run_experiment(const CircuitSpec& spec, const DeviceCalibration& cal,
                                    const obs::PauliHamiltonian* h, std::size_t shots,
                                    std::uint64_t seed, const AnsatzSpec& ansatz = {}) {
    validate_circuit_spec(spec);
    if (cal.qubits.empty()) throw std::invalid_argument("run_experiment: calibration has no qubits");
    if (h) {
        if (h->n_qubits() != spec.n_qubits)
            throw std::invalid_argument("run_experiment: spec/operator qubit count mismatch");
        if (static_cast<int>(cal.qubits.size()) < spec.n_qubits)
            throw std::invalid_argument("run_experiment: calibration has fewer qubits than spec");
        DensityMatrix rho = build_ansatz_state(spec, cal, *h, ansatz);
        return measure_observable(rho, *h, shots, cal, seed);
    }
    if (spec.n_qubits != 1)
        throw std::invalid_argument("run_experiment: bit experiments are single-qubit");
    const QubitCalibration& q = cal.qubits.front();
    if (spec.basis == MeasureBasis::X)
        return sample_t2_coin(q, spec.depth, spec.pre_measure, shots, seed);
    return sample_t1_coin(q, spec.depth, shots, seed);
}

} // namespace shotvar::sim
