#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "shotvar/errors.hpp"
#include "shotvar/series.hpp"
#include "shotvar/sim.hpp"

namespace shotvar::predict {

// All intercepts are base-2: windows are powers of 2 and the shot budget
// arithmetic uses 2^c throughout.

constexpr double kDegenerateTol = 1e-9;

enum class Model { Coin, Spam, T1, T2, Observable };

inline const char* to_string(Model m) {
    switch (m) {
        case Model::Coin: return "coin";
        case Model::Spam: return "spam";
        case Model::T1: return "t1";
        case Model::T2: return "t2";
        case Model::Observable: return "observable";
    }
    return "?";
}

struct CPrediction {
    double c = 0.0;
    Model model = Model::Coin;
    std::uint64_t inputs_hash = 0;
};

/// Per-source variance budget feeding the observable intercept.
struct VarianceBudget {
    double var_h = 0.0;
    double var_t1 = 0.0;
    double var_t2 = 0.0;
    double var_gate = 0.0;
    double var_readout = 0.0;
    double mean_h = 0.0;

    double noise_sum() const { return var_t1 + var_t2 + var_gate + var_readout; }
    double total() const { return var_h + noise_sum(); }
};

namespace detail {

inline double check_probability(double p, const char* what) {
    if (!(p > kDegenerateTol && p < 1.0 - kDegenerateTol))
        throw degenerate_error(std::string(what) + ": probability " + std::to_string(p) +
                               " is degenerate (deterministic outcome)");
    return p;
}

} // namespace detail

/// Binomial intercept: c = (1/2) log2((1 - p1)/p1). Zero for a fair coin,
/// negative as p1 grows past 1/2.
inline double c_coin(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::domain_error("c_coin: p1 must be in [0, 1]");
    detail::check_probability(p1, "c_coin");
    return 0.5 * std::log2((1.0 - p1) / p1);
}

/// Readout-noise intercept: the coin intercept of the effective read-1
/// probability of a fair coin, (1/2) log2((1 + p10 - p01)/(1 + p01 - p10)).
/// Symmetric confusion gives exactly 0.
inline double c_spam(double p01, double p10) {
    if (!(p01 >= 0.0 && p01 < 1.0 && p10 >= 0.0 && p10 < 1.0))
        throw std::domain_error("c_spam: probabilities must be in [0, 1)");
    return c_coin(sim::effective_p1_spam(0.5, p01, p10));
}

/// The same ratio without the CLT 1/2 factor; some calibration sheets report
/// this convention, so comparison reports carry both.
inline double c_spam_unhalved(double p01, double p10) { return 2.0 * c_spam(p01, p10); }

/// Intercept shift between two coins: c(p_b) - c(p_a).
inline double delta_c(double p_a, double p_b) { return c_coin(p_b) - c_coin(p_a); }

/// Amplitude-decay intercept at wait t: the |1> component survives with
/// e^{-t/T1}, giving read-1 probability e^{-t/T1}/2 before confusion. In the
/// b-form c = (1/2) log2((b(1-p01)+p10)/(b p01 + 1 - p10)) this is
/// b = (1+eps_d)/(1-eps_d) with decay probability eps_d = 1 - e^{-t/T1};
/// at t = 0, b = 1 and the expression reduces exactly to c_spam.
inline double c_t1(double p01, double p10, double t, double t1) {
    if (!(t1 > 0.0)) throw std::domain_error("c_t1: T1 must be > 0");
    if (t < 0.0) throw std::domain_error("c_t1: t must be >= 0");
    double p1_ideal = 0.5 * std::exp(-t / t1);
    return c_coin(sim::effective_p1_spam(p1_ideal, p01, p10));
}

/// Phase-decay intercept: the undone preparation leaves read-1 probability
/// (1 - e^{-t/T2})/2 before confusion; same b-form as c_t1 with the
/// T2 decay probability. t = 0 with clean readout is deterministic and
/// raises; t -> infinity tends to the fair coin.
inline double c_t2(double p01, double p10, double t, double t2) {
    if (!(t2 > 0.0)) throw std::domain_error("c_t2: T2 must be > 0");
    if (t < 0.0) throw std::domain_error("c_t2: t must be >= 0");
    double p1_ideal = 0.5 * (1.0 - std::exp(-t / t2));
    return c_coin(sim::effective_p1_spam(p1_ideal, p01, p10));
}

/// b values reported alongside predictions (the ratio of ideal read-0 to
/// read-1 probability that enters the printed intercept form).
inline double b_t1(double t, double t1) {
    double s = std::exp(-t / t1);
    return (2.0 - s) / s;
}
inline double b_t2(double t, double t2) {
    double s = std::exp(-t / t2);
    return (1.0 + s) / (1.0 - s);
}

/// Sensitivity of the intercept to a single unidirectional readout error x
/// (the other direction clean): magnitude 2/(1 - x^2), diverging as x -> 1.
inline double dc_dx_unidirectional(double x, bool positive_direction = true) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("dc_dx: x must be in [0, 1]");
    if (x >= 1.0 - kDegenerateTol)
        throw degenerate_error("dc_dx: sensitivity diverges as x -> 1");
    double m = 2.0 / (1.0 - x * x);
    return positive_direction ? m : -m;
}

/// Propagated intercept uncertainty from an uncertain T2 (readout ignored):
///   sigma_c = t e^{t/T2} / (T2^2 (e^{2t/T2} - 1)) * sigma_T2.
/// Defined as 0 at t = 0 (no wait, no sensitivity).
inline double sigma_c_t2(double t, double t2, double sigma_t2) {
    if (!(t2 > 0.0)) throw std::domain_error("sigma_c_t2: T2 must be > 0");
    if (t < 0.0) throw std::domain_error("sigma_c_t2: t must be >= 0");
    if (sigma_t2 < 0.0) throw std::domain_error("sigma_c_t2: sigma_T2 must be >= 0");
    if (t == 0.0) return 0.0;
    double r = t / t2;
    return t * std::exp(r) / (t2 * t2 * std::expm1(2.0 * r)) * sigma_t2;
}

/// Intercept uncertainty from an uncertain mean: magnitude sigma_<H>/|<H>|
/// (the derivative carries a minus sign; callers get the magnitude).
inline double sigma_c_mean(double mean_h, double sigma_mean_h) {
    if (mean_h == 0.0) throw std::domain_error("sigma_c_mean: mean must be nonzero");
    if (sigma_mean_h < 0.0) throw std::domain_error("sigma_c_mean: sigma must be >= 0");
    return sigma_mean_h / std::fabs(mean_h);
}

/// Observable intercept from an itemized budget:
///   c = (1/2) log2((Var(H) + sum Var(X_i)) / <H>^2).
inline double c_observable(const VarianceBudget& b) {
    if (b.mean_h == 0.0) throw std::domain_error("c_observable: mean_h must be nonzero");
    if (b.var_h < 0.0 || b.var_t1 < 0.0 || b.var_t2 < 0.0 || b.var_gate < 0.0 ||
        b.var_readout < 0.0)
        throw std::domain_error("c_observable: variances must be >= 0");
    double total = b.total();
    if (!(total > 0.0)) throw degenerate_error("c_observable: zero total variance");
    return 0.5 * std::log2(total / (b.mean_h * b.mean_h));
}

struct CorrectedVariance {
    double var_h = 0.0;
    bool clamped = false; // estimated noise exceeded the observed variance
};

/// Inverts the observable intercept: Var(H) = <H>^2 2^{2 c_real} - sum Var(X_i).
/// The exact inverse of c_observable; a negative result is clamped to 0 and
/// flagged.
inline CorrectedVariance correct_variance(double mean_h, double c_real, double noise_sum) {
    if (mean_h == 0.0) throw std::domain_error("correct_variance: mean_h must be nonzero");
    if (noise_sum < 0.0) throw std::domain_error("correct_variance: noise_sum must be >= 0");
    double var_h = mean_h * mean_h * std::exp2(2.0 * c_real) - noise_sum;
    if (var_h < 0.0) return {0.0, true};
    return {var_h, false};
}

/// Predicted sigma of the n-shot mean: |mu| 2^{c - log2(n)/2}.
inline double sigma_at_shots(double mean_h, double c, std::uint64_t n) {
    if (n < 1) throw std::domain_error("sigma_at_shots: n must be >= 1");
    return std::fabs(mean_h) * std::exp2(c - 0.5 * std::log2(static_cast<double>(n)));
}

struct ShotPlan {
    std::uint64_t exact = 0; // smallest n with sigma(n) <= target
    std::uint64_t pow2 = 0;  // next power of 2, the conservative pick
    double sigma_at_exact = 0.0;
    double sigma_at_pow2 = 0.0;
};

/// Smallest shot count meeting the sigma target, n = ceil((|mu| 2^c / sigma)^2),
/// plus the next power of 2 as the conservative recommendation.
inline ShotPlan shots_for_sigma(double mean_h, double c, double target_sigma) {
    if (!(target_sigma > 0.0)) throw std::domain_error("shots_for_sigma: target must be > 0");
    if (mean_h == 0.0) throw std::domain_error("shots_for_sigma: mean must be nonzero");
    double root = std::fabs(mean_h) * std::exp2(c) / target_sigma;
    double x = root * root;
    // shave an ulp-scale sliver so sigma_at_shots round trips return n exactly
    std::uint64_t exact = static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
    if (exact < 1) exact = 1;
    ShotPlan plan;
    plan.exact = exact;
    plan.pow2 = std::bit_ceil(exact);
    plan.sigma_at_exact = sigma_at_shots(mean_h, c, plan.exact);
    plan.sigma_at_pow2 = sigma_at_shots(mean_h, c, plan.pow2);
    return plan;
}

/// Rescales a variance measured at n1 shots to n2 shots under the CLT
/// invariant sigma^2 * n = const.
inline double rescale_variance(double sigma_sq_n1, std::uint64_t n1, std::uint64_t n2) {
    if (n1 < 1 || n2 < 1) throw std::domain_error("rescale_variance: shot counts must be >= 1");
    if (sigma_sq_n1 < 0.0) throw std::domain_error("rescale_variance: variance must be >= 0");
    return sigma_sq_n1 * static_cast<double>(n1) / static_cast<double>(n2);
}

} // namespace shotvar::predict
