#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "shotvar/errors.hpp"
#include "shotvar/pauli.hpp"

namespace shotvar::sim {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;

/// Parameters of the combined damping + depolarizing channel: gamma1 is the
/// amplitude-damping probability per application, gamma2 the phase-damping
/// probability, gate_eps the per-gate depolarizing strength. Each in [0, 1).
struct NoiseChannelParams {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gate_eps = 0.0;
};

inline void validate_noise_channel(const NoiseChannelParams& p) {
    auto in_range = [](double x) { return x >= 0.0 && x < 1.0; };
    if (!in_range(p.gamma1) || !in_range(p.gamma2) || !in_range(p.gate_eps))
        throw std::domain_error("noise channel parameters must be in [0, 1)");
}

/// Dense density matrix on up to kMaxQubits qubits. Qubit q occupies bit
/// (n-1-q) of the basis index, matching PauliHamiltonian::to_matrix.
class DensityMatrix {
public:
    static DensityMatrix pure_basis_state(int n_qubits, unsigned basis_index) {
        check_qubits(n_qubits);
        Eigen::Index dim = Eigen::Index(1) << n_qubits;
        if (basis_index >= static_cast<unsigned>(dim))
            throw std::invalid_argument("basis index out of range");
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        m(basis_index, basis_index) = 1.0;
        return DensityMatrix(n_qubits, std::move(m));
    }

    static DensityMatrix from_state_vector(const Eigen::VectorXcd& psi) {
        int n = qubits_for_dim(psi.size());
        Eigen::VectorXcd v = psi / psi.norm();
        return DensityMatrix(n, v * v.adjoint());
    }

    /// Validates Hermiticity, unit trace, and positive semidefiniteness
    /// (within 1e-10) before accepting an arbitrary matrix.
    static DensityMatrix from_matrix(Eigen::MatrixXcd m) {
        int n = qubits_for_dim(m.rows());
        if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
            throw std::invalid_argument("density matrix is not Hermitian within 1e-10");
        if (std::fabs(m.trace().real() - 1.0) > kTraceTol || std::fabs(m.trace().imag()) > kTraceTol)
            throw std::invalid_argument("density matrix trace is not 1 within 1e-10");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol)
            throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
        return DensityMatrix(n, std::move(m));
    }

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    double trace_real() const { return m_.trace().real(); }

    double expectation(const Eigen::MatrixXcd& op) const {
        if (op.rows() != m_.rows()) throw std::invalid_argument("operator dimension mismatch");
        return (op * m_).trace().real();
    }

private:
    DensityMatrix(int n, Eigen::MatrixXcd m) : n_qubits_(n), m_(std::move(m)) {}

    static void check_qubits(int n) {
        if (n < 1 || n > obs::kMaxQubits)
            throw capacity_error("density matrix supports 1.." +
                                 std::to_string(obs::kMaxQubits) + " qubits, got " +
                                 std::to_string(n));
    }
    static int qubits_for_dim(Eigen::Index dim) {
        int n = 0;
        while ((Eigen::Index(1) << n) < dim) ++n;
        if ((Eigen::Index(1) << n) != dim)
            throw std::invalid_argument("dimension is not a power of 2");
        check_qubits(n);
        return n;
    }

    friend DensityMatrix apply_operator_unchecked(const DensityMatrix&, const Eigen::MatrixXcd&);
    friend DensityMatrix apply_kraus(const DensityMatrix&,
                                     const std::vector<Eigen::MatrixXcd>&);

    int n_qubits_;
    Eigen::MatrixXcd m_;
};

namespace gates {

inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

inline Eigen::Matrix2cd pauli_x() { return obs::PauliHamiltonian::pauli_matrix('X'); }
inline Eigen::Matrix2cd pauli_y() { return obs::PauliHamiltonian::pauli_matrix('Y'); }
inline Eigen::Matrix2cd pauli_z() { return obs::PauliHamiltonian::pauli_matrix('Z'); }

inline Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

/// Maps the X measurement basis onto the computational basis: H Z H = X.
inline Eigen::Matrix2cd x_basis_rotation() { return hadamard(); }

/// Maps the Y measurement basis onto the computational basis:
/// (H S^dag) Y (H S^dag)^dag = Z.
inline Eigen::Matrix2cd y_basis_rotation() {
    using namespace std::complex_literals;
    Eigen::Matrix2cd sdg;
    sdg << 1, 0, 0, -1i;
    return hadamard() * sdg;
}

/// Two-qubit excitation-preserving rotation: identity on |00>, |11>, a
/// cos/sin mixing of |01>, |10>. theta = 0 is the identity.
inline Eigen::Matrix4cd excitation_preserving(double theta) {
    using namespace std::complex_literals;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    m(1, 1) = c;
    m(1, 2) = -1i * s;
    m(2, 1) = -1i * s;
    m(2, 2) = c;
    return m;
}

} // namespace gates

namespace detail {

/// Embeds a k-qubit operator acting on `targets` into the full 2^n space.
inline Eigen::MatrixXcd embed(const Eigen::MatrixXcd& op, std::span<const int> targets,
                              int n_qubits) {
    const int k = static_cast<int>(targets.size());
    const Eigen::Index full = Eigen::Index(1) << n_qubits;
    if (op.rows() != (Eigen::Index(1) << k) || op.cols() != op.rows())
        throw std::invalid_argument("gate dimension does not match target count");
    for (int i = 0; i < k; ++i) {
        if (targets[i] < 0 || targets[i] >= n_qubits)
            throw std::invalid_argument("gate target out of range");
        for (int j = i + 1; j < k; ++j)
            if (targets[i] == targets[j])
                throw std::invalid_argument("gate targets must be distinct");
    }
    auto sub_index = [&](Eigen::Index z) {
        Eigen::Index a = 0;
        for (int i = 0; i < k; ++i) {
            int bit = (z >> (n_qubits - 1 - targets[i])) & 1;
            a = (a << 1) | bit;
        }
        return a;
    };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(full, full);
    for (Eigen::Index col = 0; col < full; ++col) {
        Eigen::Index a_col = sub_index(col);
        Eigen::Index rest = col;
        for (int i = 0; i < k; ++i) rest &= ~(Eigen::Index(1) << (n_qubits - 1 - targets[i]));
        for (Eigen::Index a_row = 0; a_row < op.rows(); ++a_row) {
            if (op(a_row, a_col) == std::complex<double>(0.0)) continue;
            Eigen::Index row = rest;
            for (int i = 0; i < k; ++i) {
                int bit = static_cast<int>((a_row >> (k - 1 - i)) & 1);
                if (bit) row |= Eigen::Index(1) << (n_qubits - 1 - targets[i]);
            }
            out(row, col) = op(a_row, a_col);
        }
    }
    return out;
}

} // namespace detail

inline DensityMatrix apply_operator_unchecked(const DensityMatrix& rho,
                                              const Eigen::MatrixXcd& full_op) {
    return DensityMatrix(rho.n_qubits_, full_op * rho.m_ * full_op.adjoint());
}

inline DensityMatrix apply_kraus(const DensityMatrix& rho,
                                 const std::vector<Eigen::MatrixXcd>& kraus) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (const auto& k : kraus) out += k * rho.m_ * k.adjoint();
    return DensityMatrix(rho.n_qubits_, std::move(out));
}

/// rho -> G rho G^dag with G a unitary on the target qubits. Trace is
/// preserved within 1e-12; a non-unitary gate is rejected.
inline DensityMatrix apply_gate(const DensityMatrix& rho, const Eigen::MatrixXcd& gate,
                                std::span<const int> targets) {
    Eigen::MatrixXcd gram = gate.adjoint() * gate;
    if ((gram - Eigen::MatrixXcd::Identity(gate.rows(), gate.cols())).cwiseAbs().maxCoeff() >
        kUnitaryTol)
        throw std::domain_error("apply_gate: gate is not unitary within 1e-10");
    Eigen::MatrixXcd full = detail::embed(gate, targets, rho.n_qubits());
    DensityMatrix out = apply_operator_unchecked(rho, full);
    if (std::fabs(out.trace_real() - rho.trace_real()) > 1e-12)
        throw std::runtime_error("apply_gate: trace not preserved");
    return out;
}

inline DensityMatrix apply_gate(const DensityMatrix& rho, const Eigen::MatrixXcd& gate,
                                std::initializer_list<int> targets) {
    return apply_gate(rho, gate, std::span<const int>(targets.begin(), targets.size()));
}

/// Combined amplitude damping (probability gamma1) and phase damping
/// (probability gamma2) on one qubit. For gammas derived from (t, T1, T2) via
/// damping_gammas, a single-qubit pure state (a, b) maps to
///   [ 1 + (|a|^2 - 1) e1    a b* e2 ]
///   [ a* b e2               |b|^2 e1 ]
/// with e1 = e^{-t/T1}, e2 = e^{-t/T2}.
inline DensityMatrix apply_damping(const DensityMatrix& rho, int qubit, double gamma1,
                                   double gamma2) {
    if (!(gamma1 >= 0.0 && gamma1 <= 1.0 && gamma2 >= 0.0 && gamma2 <= 1.0))
        throw std::domain_error("apply_damping: gammas must be in [0, 1]");
    Eigen::Matrix2cd a0, a1, p0, p1;
    a0 << 1, 0, 0, std::sqrt(1.0 - gamma1);
    a1 << 0, std::sqrt(gamma1), 0, 0;
    p0 << 1, 0, 0, std::sqrt(1.0 - gamma2);
    p1 << 0, 0, 0, std::sqrt(gamma2);
    const int t[1] = {qubit};
    std::span<const int> targets(t, 1);
    std::vector<Eigen::MatrixXcd> amp = {detail::embed(a0, targets, rho.n_qubits()),
                                         detail::embed(a1, targets, rho.n_qubits())};
    std::vector<Eigen::MatrixXcd> phase = {detail::embed(p0, targets, rho.n_qubits()),
                                           detail::embed(p1, targets, rho.n_qubits())};
    return apply_kraus(apply_kraus(rho, amp), phase);
}

/// Single-qubit depolarizing channel of the given strength:
/// rho -> (1-eps) rho + (eps/3)(X rho X + Y rho Y + Z rho Z).
inline DensityMatrix apply_depolarizing(const DensityMatrix& rho, int qubit, double strength) {
    if (!(strength >= 0.0 && strength <= 1.0))
        throw std::domain_error("apply_depolarizing: strength must be in [0, 1]");
    const int t[1] = {qubit};
    std::span<const int> targets(t, 1);
    double keep = std::sqrt(1.0 - strength);
    double flip = std::sqrt(strength / 3.0);
    std::vector<Eigen::MatrixXcd> kraus = {
        detail::embed(keep * gates::identity(), targets, rho.n_qubits()),
        detail::embed(flip * gates::pauli_x(), targets, rho.n_qubits()),
        detail::embed(flip * gates::pauli_y(), targets, rho.n_qubits()),
        detail::embed(flip * gates::pauli_z(), targets, rho.n_qubits())};
    return apply_kraus(rho, kraus);
}

/// (gamma1, gamma2) reproducing survival e^{-t/T1} and coherence e^{-t/T2}
/// after one apply_damping call. The amplitude channel already shrinks
/// coherences by e^{-t/2T1}, so the phase channel supplies the remainder;
/// t2 > 2*t1 would need gamma2 < 0 and is clamped to 0.
inline std::pair<double, double> damping_gammas(double t, double T1, double T2) {
    if (!(T1 > 0.0) || !(T2 > 0.0))
        throw std::domain_error("damping_gammas: T1, T2 must be > 0");
    if (t < 0.0) throw std::domain_error("damping_gammas: t must be >= 0");
    double gamma1 = 1.0 - std::exp(-t / T1);
    double residual = std::exp(-2.0 * t / T2 + t / T1);
    double gamma2 = residual > 1.0 ? 0.0 : 1.0 - residual;
    return {gamma1, gamma2};
}

} // namespace shotvar::sim
