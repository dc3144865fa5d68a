#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <span>
#include <vector>

#include "shotvar/density_matrix.hpp"
#include "shotvar/errors.hpp"
#include "shotvar/pauli.hpp"
#include "shotvar/rng.hpp"

namespace shotvar::obs {

struct SpectrumBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool exact = false; // brute-forced from the dense matrix vs supplied
};

/// Extreme eigenvalues from dense diagonalization (n <= 6). Larger operators
/// must supply bounds externally.
inline SpectrumBounds spectrum_bounds(const PauliHamiltonian& h) {
    if (h.n_qubits() > kMaxQubits)
        throw capacity_error("spectrum_bounds: dense diagonalization limited to " +
                             std::to_string(kMaxQubits) + " qubits; supply bounds explicitly");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_matrix(), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(), true};
}

/// Popoviciu: Var <= (lambda_max - lambda_min)^2 / 4.
inline double popoviciu_bound(const SpectrumBounds& b) {
    if (b.lambda_min > b.lambda_max)
        throw std::invalid_argument("popoviciu_bound: lambda_min > lambda_max");
    double r = b.lambda_max - b.lambda_min;
    return r * r / 4.0;
}

/// Bhatia-Davis: Var <= (lambda_max - <H>)(<H> - lambda_min). Requires the
/// mean to lie inside the spectrum.
inline double bhatia_davis_bound(const SpectrumBounds& b, double mean_h) {
    if (mean_h < b.lambda_min || mean_h > b.lambda_max)
        throw std::domain_error("bhatia_davis_bound: mean outside [lambda_min, lambda_max]");
    return (b.lambda_max - mean_h) * (mean_h - b.lambda_min);
}

/// Loose coefficient bound: sum of |a_i|. include_identity keeps the identity
/// coefficient in the sum (default); squared sums a_i^2 instead.
inline double coeff_sum_bound(const PauliHamiltonian& h, bool include_identity = true,
                              bool squared = false) {
    double sum = 0.0;
    for (const auto& t : h.terms()) {
        if (!include_identity && PauliHamiltonian::is_identity(t.word)) continue;
        sum += squared ? t.coeff * t.coeff : std::fabs(t.coeff);
    }
    return sum;
}

/// Var(H) on a state: Tr(rho H^2) - Tr(rho H)^2.
inline double exact_variance(const PauliHamiltonian& h, const sim::DensityMatrix& state) {
    Eigen::MatrixXcd hm = h.to_matrix();
    if (hm.rows() != state.dim())
        throw std::invalid_argument("exact_variance: operator/state dimension mismatch");
    double e = (hm * state.matrix()).trace().real();
    double e2 = (hm * hm * state.matrix()).trace().real();
    return e2 - e * e;
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians,
/// drawn reproducibly from (seed, index).
inline sim::DensityMatrix haar_random_state(int n_qubits, std::uint64_t seed,
                                            std::uint64_t index = 0) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw capacity_error("haar_random_state: 1.." + std::to_string(kMaxQubits) +
                             " qubits supported");
    CounterRng rng(seed, 0x4aa2ULL + index);
    Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = std::complex<double>(rng.normal(2 * static_cast<std::uint64_t>(i)),
                                    rng.normal(2 * static_cast<std::uint64_t>(i) + 1));
    return sim::DensityMatrix::from_state_vector(v);
}

/// Sampling estimate of Var(H): the mean of exact_variance over the given
/// states.
inline double sampled_variance(const PauliHamiltonian& h,
                               std::span<const sim::DensityMatrix> states) {
    if (states.empty()) throw std::invalid_argument("sampled_variance: empty state list");
    double sum = 0.0;
    for (const auto& s : states) sum += exact_variance(h, s);
    return sum / static_cast<double>(states.size());
}

/// Default sampling policy: 200 Haar-random states unless told otherwise.
inline double sampled_variance_haar(const PauliHamiltonian& h, int n_states, std::uint64_t seed) {
    if (n_states < 1) throw std::invalid_argument("sampled_variance_haar: need >= 1 state");
    double sum = 0.0;
    for (int i = 0; i < n_states; ++i)
        sum += exact_variance(h, haar_random_state(h.n_qubits(), seed, static_cast<std::uint64_t>(i)));
    return sum / static_cast<double>(n_states);
}

} // namespace shotvar::obs
