#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shotvar/errors.hpp"
#include "shotvar/series.hpp"

namespace shotvar::clt {

/// (log2 w, log2 RSD) points from the windowing procedure. Degenerate window
/// sizes (zero spread or zero mean) are excluded from `points` and reported
/// in `diagnostics` instead of failing the whole curve.
struct RsdCurve {
    struct Point {
        double log2_w;
        double log2_rsd;
    };
    std::vector<Point> points;
    std::vector<std::size_t> window_sizes;
    std::size_t n_windows = 0;
    std::vector<std::string> diagnostics;
};

struct CFit {
    double c = 0.0;     // base-2 intercept
    double slope = 0.0; // -1/2 when fixed
    double residual_rms = 0.0;
    bool slope_fixed = true;
    std::size_t n_points = 0;
};

struct DeltaC {
    double c_pred;
    double c_real;
    double delta;
    DeltaC(double pred, double real) : c_pred(pred), c_real(real), delta(std::fabs(pred - real)) {}
};

enum class Color { Green, Yellow, Black, Red, Orange };

inline std::string_view to_string(Color c) {
    switch (c) {
        case Color::Green: return "green";
        case Color::Yellow: return "yellow";
        case Color::Black: return "black";
        case Color::Red: return "red";
        case Color::Orange: return "orange";
    }
    return "?";
}

inline std::vector<std::size_t> default_window_sizes() { return {4, 8, 16, 32, 64, 128}; }

/// Means of n_windows disjoint consecutive windows of w shots, taken from the
/// series prefix.
inline std::vector<double> window_means(const OutcomeSeries& series, std::size_t w,
                                        std::size_t n_windows) {
    if (w == 0 || n_windows == 0)
        throw std::invalid_argument("window_means: w and n_windows must be >= 1");
    if (series.size() < w * n_windows)
        throw capacity_error("window_means: series has " + std::to_string(series.size()) +
                             " shots, needs " + std::to_string(w * n_windows));
    std::vector<double> means(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < w; ++j) sum += series.values[i * w + j];
        means[i] = sum / static_cast<double>(w);
    }
    return means;
}

namespace detail {

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample (n-1) standard deviation.
inline double sample_stddev(const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace detail

/// For each window size w: split the series prefix into n_windows windows,
/// take their means, and record (log2 w, log2 of sigma/|mu|) for that set of
/// means. sigma uses the sample (n-1) denominator. The RSD uses the magnitude
/// of the mean, so curves of negative-valued observables are well defined and
/// the curve is invariant under scaling the outcomes by any nonzero constant.
/// n_windows = 0 covers the whole series at every size (size/w windows
/// instead of a fixed count), the lowest-noise form of the estimator.
inline RsdCurve rsd_curve(const OutcomeSeries& series,
                          std::vector<std::size_t> window_sizes = default_window_sizes(),
                          std::size_t n_windows = 256) {
    if (window_sizes.empty())
        throw std::invalid_argument("rsd_curve: need at least one window size");
    for (std::size_t i = 0; i < window_sizes.size(); ++i) {
        std::size_t w = window_sizes[i];
        if (w < 2 || (w & (w - 1)) != 0)
            throw std::invalid_argument("rsd_curve: window sizes must be powers of 2, got " +
                                        std::to_string(w));
        if (i > 0 && window_sizes[i] <= window_sizes[i - 1])
            throw std::invalid_argument("rsd_curve: window sizes must be strictly increasing");
    }
    std::size_t max_w = window_sizes.back();
    const bool fill = n_windows == 0;
    std::size_t min_needed = fill ? max_w * 2 : max_w * n_windows;
    if (series.size() < min_needed)
        throw capacity_error("rsd_curve: series has " + std::to_string(series.size()) +
                             " shots, needs " + std::to_string(min_needed));

    RsdCurve curve;
    curve.window_sizes = window_sizes;
    curve.n_windows = n_windows;
    for (std::size_t w : window_sizes) {
        auto means = window_means(series, w, fill ? series.size() / w : n_windows);
        double mu = detail::mean_of(means);
        double sigma = detail::sample_stddev(means, mu);
        if (mu == 0.0) {
            curve.diagnostics.push_back("w=" + std::to_string(w) +
                                        ": window-mean average is 0, RSD undefined; point excluded");
            continue;
        }
        if (sigma == 0.0) {
            curve.diagnostics.push_back("w=" + std::to_string(w) +
                                        ": zero spread (deterministic series); point excluded");
            continue;
        }
        curve.points.push_back({std::log2(static_cast<double>(w)), std::log2(sigma / std::fabs(mu))});
    }
    return curve;
}

/// Fits c from the curve. With fix_slope the model is y = -x/2 + c and
/// c is the mean of (y + x/2); otherwise ordinary least squares for
/// (slope, c). residual_rms is reported against the fitted line either way.
inline CFit fit_c(const RsdCurve& curve, bool fix_slope = true) {
    const auto& pts = curve.points;
    if (pts.size() < 2)
        throw insufficient_data_error("fit_c: need >= 2 valid curve points, have " +
                                      std::to_string(pts.size()));
    CFit fit;
    fit.n_points = pts.size();
    fit.slope_fixed = fix_slope;
    const double n = static_cast<double>(pts.size());
    if (fix_slope) {
        fit.slope = -0.5;
        double sum = 0.0;
        for (const auto& p : pts) sum += p.log2_rsd + 0.5 * p.log2_w;
        fit.c = sum / n;
    } else {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (const auto& p : pts) {
            sx += p.log2_w;
            sy += p.log2_rsd;
            sxx += p.log2_w * p.log2_w;
            sxy += p.log2_w * p.log2_rsd;
        }
        double denom = n * sxx - sx * sx;
        if (denom == 0.0)
            throw insufficient_data_error("fit_c: all points share one window size");
        fit.slope = (n * sxy - sx * sy) / denom;
        fit.c = (sy - fit.slope * sx) / n;
    }
    double ss = 0.0;
    for (const auto& p : pts) {
        double r = p.log2_rsd - (fit.slope * p.log2_w + fit.c);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

/// Var(Var): (1/n) * (m4 - (n-3)/(n-1) * s^4), with m4 the fourth central
/// moment (1/n denominator) and s^2 the sample variance (n-1 denominator).
inline double variance_of_variance(const OutcomeSeries& series) {
    const std::size_t n = series.size();
    if (n < 4)
        throw insufficient_data_error("variance_of_variance: need >= 4 samples, have " +
                                      std::to_string(n));
    double mean = 0.0;
    for (double x : series.values) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double x : series.values) {
        double d = x - mean;
        double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    double s2 = m2 / static_cast<double>(n - 1);
    m4 /= static_cast<double>(n);
    double nn = static_cast<double>(n);
    return (m4 - (nn - 3.0) / (nn - 1.0) * s2 * s2) / nn;
}

/// Prediction-gap classification: delta < 0.5 green (correct prediction),
/// 0.5..1.0 yellow (approximate, other noise), > 1.0 black (bad qubit or
/// wrong model). Equivalent sigma-ratio thresholds: 1.41 and 2.
inline Color classify_delta_c(const DeltaC& d) {
    if (d.delta < 0.5) return Color::Green;
    if (d.delta <= 1.0) return Color::Yellow;
    return Color::Black;
}

/// Device-map classification of a T1/T2 value against the population of
/// values: z-score bins at (-1.5, 0, 1.5) mapped to red/orange/yellow/green.
/// Boundary z-scores go to the higher bin, so x == mean is yellow.
inline Color classify_tmap(const std::vector<double>& values, double x) {
    if (values.size() < 2)
        throw insufficient_data_error("classify_tmap: need >= 2 reference values");
    double mu = detail::mean_of(values);
    double sigma = detail::sample_stddev(values, mu);
    if (sigma == 0.0)
        throw degenerate_error("classify_tmap: reference values have zero spread");
    double z = (x - mu) / sigma;
    if (z >= 1.5) return Color::Green;
    if (z >= 0.0) return Color::Yellow;
    if (z >= -1.5) return Color::Orange;
    return Color::Red;
}

} // namespace shotvar::clt
