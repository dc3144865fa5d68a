#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "shotvar/calibration.hpp"
#include "shotvar/incgamma.hpp"

namespace shotvar::noisevar {

/// Stretched-exponential decay: survival e^{-tau^k}, decay probability
/// gamma_i = 1 - e^{-tau^k}. k = 1 is plain Markovian decay.
struct DecayParams {
    NormalizedTime tau;
    double k = 1.0;
};

/// Damped Jaynes-Cummings memory kernel: coupling gamma0, spectral bandwidth
/// lambda, integration horizon t0. d = sqrt(lambda^2 - 2*gamma0*lambda) may be
/// imaginary; evaluation is complex-safe in both regimes.
struct NonMarkovParams {
    double gamma0 = 0.0;
    double lambda = 0.0;
    double t0 = 0.0;
};

struct NoiseVarianceReport {
    double t1 = 0.0;
    double t2 = 0.0;
    double gate = 0.0;
    double readout = 0.0;
    double total = 0.0;
};

/// Policy for collapsing per-qubit T1/T2 lists into the single value used by
/// the closed forms: median for typical estimates, minimum for conservative
/// ones.
enum class Aggregation { Median, Minimum };

inline double aggregate_time(std::vector<double> values, Aggregation policy) {
    if (values.empty()) throw std::invalid_argument("aggregate_time: empty value list");
    if (policy == Aggregation::Minimum) return *std::min_element(values.begin(), values.end());
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// p-th moment of the stretched decay up to normalized time tau:
/// integral_0^tau u^p e^{-u^k} du = (1/k) * gamma((p+1)/k, tau^k).
inline double decay_moment(int p, double tau, double k = 1.0) {
    if (p < 0) throw std::domain_error("decay_moment: p must be >= 0");
    if (tau < 0.0) throw std::domain_error("decay_moment: tau must be >= 0");
    if (!(k > 0.0)) throw std::domain_error("decay_moment: k must be > 0");
    if (tau == 0.0) return 0.0;
    double a = (static_cast<double>(p) + 1.0) / k;
    return math::lower_incomplete_gamma(a, std::pow(tau, k)) / k;
}

/// First and second decay moments for k = 1:
///   E  = 1 - (tau+1) e^{-tau}
///   E2 = -tau^2 e^{-tau} + 2 E
inline std::pair<double, double> decay_first_second(double tau) {
    if (tau < 0.0) throw std::domain_error("decay_first_second: tau must be >= 0");
    double e = std::exp(-tau);
    double first = 1.0 - (tau + 1.0) * e;
    double second = -tau * tau * e + 2.0 * first;
    return {first, second};
}

/// Per-decay-channel variance E2 - E^2 = 1 - tau^2 e^{-tau} - (tau+1)^2 e^{-2tau}.
inline double decay_variance(double tau) {
    if (tau < 0.0) throw std::domain_error("decay_variance: tau must be >= 0");
    double e = std::exp(-tau);
    return 1.0 - tau * tau * e - (tau + 1.0) * (tau + 1.0) * e * e;
}

/// Random-walk gate-noise variance summed over n qubit dimensions:
/// n * D * eplg^2 / 4, with single-qubit step size eplg/2 per gate and D the
/// normalized depth t/dt.
inline double gate_walk_variance(double depth_dt, double eplg, int n_qubits) {
    if (depth_dt < 0.0 || eplg < 0.0 || n_qubits < 0)
        throw std::domain_error("gate_walk_variance: arguments must be >= 0");
    return static_cast<double>(n_qubits) * depth_dt * eplg * eplg / 4.0;
}

/// Variance of one readout bit with 1->0 probability p and 0->1 probability
/// q: |(1-p+q)(p-q)| weighted by 2^i when bits assemble an integer, or 2^-i
/// when they are binary fractional digits (the phase-estimation reading,
/// which keeps the contribution insignificant and is the default).
inline double readout_bit_variance(double p, double q, int bit_index, bool fractional = true) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw std::domain_error("readout_bit_variance: p, q must be in [0, 1]");
    if (bit_index < 0) throw std::domain_error("readout_bit_variance: bit_index must be >= 0");
    double v = std::fabs((1.0 - p + q) * (p - q));
    double w = std::ldexp(1.0, fractional ? -bit_index : bit_index);
    return v * w;
}

/// Closed-form sample variance of the combined noise for n qubits over s
/// shots at circuit time t (in dt, so the gate depth D equals t):
///   (n / 2s) * (2 - tau1^2 e^{-tau1} - tau2^2 e^{-tau2}
///               - (tau1+1)^2 e^{-2 tau1} - (tau2+1)^2 e^{-2 tau2} + t g^2 / 2)
/// decomposed into its per-source pieces. Use s = 1 for the per-shot variance
/// that enters an intercept budget.
inline NoiseVarianceReport closed_form_noise_variance(int n_qubits, double shots, double tau1,
                                                      double tau2, double t, double eplg) {
    if (!(shots >= 1.0)) throw std::domain_error("closed_form_noise_variance: shots must be >= 1");
    if (n_qubits < 0) throw std::domain_error("closed_form_noise_variance: n_qubits must be >= 0");
    double scale = static_cast<double>(n_qubits) / (2.0 * shots);
    NoiseVarianceReport r;
    r.t1 = scale * decay_variance(tau1);
    r.t2 = scale * decay_variance(tau2);
    r.gate = scale * (t * eplg * eplg / 2.0);
    r.readout = 0.0;
    r.total = r.t1 + r.t2 + r.gate + r.readout;
    return r;
}

namespace detail {

inline std::complex<double> nonmarkov_d(const NonMarkovParams& p) {
    return std::sqrt(std::complex<double>(p.lambda * p.lambda - 2.0 * p.gamma0 * p.lambda, 0.0));
}

// Lower incomplete gamma at integer a in {2, 3}, complex-safe:
//   gamma(2, z) = 1 - (z+1) e^{-z}
//   gamma(3, z) = 2 - (z^2 + 2z + 2) e^{-z}
inline std::complex<double> lig_int(int a, std::complex<double> z) {
    std::complex<double> ez = std::exp(-z);
    if (a == 2) return 1.0 - (z + 1.0) * ez;
    if (a == 3) return 2.0 - (z * z + 2.0 * z + 2.0) * ez;
    throw std::domain_error("lig_int: only a = 2, 3 supported");
}

// Adaptive Simpson on [a, b].
template <class F>
double simpson_adapt(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_adapt(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace detail

/// Memory-kernel amplitude G(t) = e^{-lambda t/2} ((lambda/d) sinh(dt/2) + cosh(dt/2)).
/// Real for all t in both the real-d and imaginary-d regimes (where sinh/cosh
/// turn into sin/cos); G(0) = 1, and gamma(t) = 1 - |G(t)|^2 is the
/// time-dependent decay probability.
inline double nonmarkov_G(double t, const NonMarkovParams& p) {
    if (t < 0.0) throw std::domain_error("nonmarkov_G: t must be >= 0");
    if (!(p.lambda > 0.0)) throw std::domain_error("nonmarkov_G: lambda must be > 0");
    std::complex<double> d = detail::nonmarkov_d(p);
    if (std::abs(d) < 1e-12 * p.lambda) {
        // d -> 0 limit: lambda/d * sinh(dt/2) -> lambda*t/2
        return std::exp(-0.5 * p.lambda * t) * (0.5 * p.lambda * t + 1.0);
    }
    std::complex<double> ht = 0.5 * d * t;
    std::complex<double> g =
        std::exp(-0.5 * p.lambda * t) * ((p.lambda / d) * std::sinh(ht) + std::cosh(ht));
    return g.real();
}

/// Quadrature evaluation of the p-th memory-kernel moment
/// integral_0^t0 t^p |G(t)|^2 dt; the validation path for the closed form and
/// the evaluation path when d is imaginary or near zero.
inline double nonmarkov_moment_quadrature(int p, const NonMarkovParams& params, double tol = 1e-12) {
    if (p < 1 || p > 2) throw std::domain_error("nonmarkov_moment: p must be 1 or 2");
    if (params.t0 < 0.0) throw std::domain_error("nonmarkov_moment: t0 must be >= 0");
    return detail::integrate(
        [&](double t) {
            double g = nonmarkov_G(t, params);
            return std::pow(t, p) * g * g;
        },
        0.0, params.t0, tol);
}

/// Closed-form p-th moment of |G|^2, p in {1, 2}: expanding G into
/// k e^{-k't} - k' e^{-kt} with k = (lambda+d)/2, k' = (lambda-d)/2 and
/// integrating each cross term through the incomplete gamma function gives
///   (1/d^2) [ k^2 gamma(p+1, 2k't0)/(2k')^{p+1}
///           + k'^2 gamma(p+1, 2k t0)/(2k)^{p+1}
///           - 2kk' gamma(p+1, lambda t0)/lambda^{p+1} ].
/// Evaluated complex-safe; falls back to quadrature when d ~ 0.
inline double nonmarkov_moment(int p, const NonMarkovParams& params) {
    if (p < 1 || p > 2) throw std::domain_error("nonmarkov_moment: p must be 1 or 2");
    if (params.t0 < 0.0) throw std::domain_error("nonmarkov_moment: t0 must be >= 0");
    if (!(params.lambda > 0.0)) throw std::domain_error("nonmarkov_moment: lambda must be > 0");
    if (params.t0 == 0.0) return 0.0;
    std::complex<double> d = detail::nonmarkov_d(params);
    if (std::abs(d) < 1e-6 * params.lambda) return nonmarkov_moment_quadrature(p, params);
    std::complex<double> k = 0.5 * (params.lambda + d);
    std::complex<double> kp = 0.5 * (params.lambda - d);
    auto powc = [](std::complex<double> z, int e) {
        std::complex<double> r = 1.0;
        for (int i = 0; i < e; ++i) r *= z;
        return r;
    };
    int a = p + 1;
    std::complex<double> term1 = k * k * detail::lig_int(a, 2.0 * kp * params.t0) / powc(2.0 * kp, a);
    std::complex<double> term2 = kp * kp * detail::lig_int(a, 2.0 * k * params.t0) / powc(2.0 * k, a);
    std::complex<double> term3 =
        2.0 * k * kp * detail::lig_int(a, std::complex<double>(params.lambda * params.t0)) /
        powc(std::complex<double>(params.lambda), a);
    std::complex<double> v = (term1 + term2 - term3) / (d * d);
    return v.real();
}

/// The bracketed moment expressions in the final reduced form, kept verbatim
/// for reference and comparison reports:
///   p=1: (1 - (t0+1)e^{-t0}) * (-g0/l + 1/2 - 2l/g0 + l^2/g0^2)
///   p=2: (-t0^2 e^{-t0} + 2(1 - (t0+1)e^{-t0})) * (-g0/l^2 + 5/(4g0) - 5l/(2g0^2) + l^2/g0^3)
/// These drop the scale factors on the incomplete-gamma arguments, so they
/// disagree with the exact evaluation in nonmarkov_moment in general.
inline double nonmarkov_moment_printed(int p, const NonMarkovParams& params) {
    if (p < 1 || p > 2) throw std::domain_error("nonmarkov_moment_printed: p must be 1 or 2");
    double g0 = params.gamma0, l = params.lambda, t0 = params.t0;
    if (!(g0 > 0.0)) throw std::domain_error("nonmarkov_moment_printed: gamma0 must be > 0");
    double first = 1.0 - (t0 + 1.0) * std::exp(-t0);
    if (p == 1) return first * (-g0 / l + 0.5 - 2.0 * l / g0 + l * l / (g0 * g0));
    double second = -t0 * t0 * std::exp(-t0) + 2.0 * first;
    return second * (-g0 / (l * l) + 5.0 / (4.0 * g0) - 5.0 * l / (2.0 * g0 * g0) +
                     l * l / (g0 * g0 * g0));
}

} // namespace shotvar::noisevar
