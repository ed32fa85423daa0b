#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "vander/common.hpp"

namespace vander {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::domain_error("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / xs.size();
}

inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::domain_error("sample_variance: need at least two values");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / (xs.size() - 1);
}

inline double std_error(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs) / xs.size());
}

struct Histogram {
    std::vector<double> edges;  // bins + 1 ascending edges
    std::vector<double> mass;   // per-bin probability mass, sums to 1 minus spill
    double below = 0.0, above = 0.0;

    int bins() const { return static_cast<int>(mass.size()); }
    double center(int b) const { return 0.5 * (edges[b] + edges[b + 1]); }
    double width(int b) const { return edges[b + 1] - edges[b]; }
};

/// Histogram over [lo, hi) with equal bins; samples outside accumulate in the
/// spill fields so the bin masses plus spill always sum to one.
inline Histogram histogram_fixed(std::span<const double> xs, double lo, double hi, int bins) {
    if (xs.empty()) throw std::domain_error("histogram: empty sample");
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad range");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
    h.mass.assign(bins, 0.0);
    const double unit = 1.0 / xs.size();
    for (double x : xs) {
        if (x < lo) {
            h.below += unit;
        } else if (x >= hi) {
            h.above += unit;
        } else {
            int b = static_cast<int>((x - lo) / (hi - lo) * bins);
            if (b >= bins) b = bins - 1;
            h.mass[b] += unit;
        }
    }
    return h;
}

/// Freedman-Diaconis bin count (default binning for experiment output).
inline int fd_bin_count(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    const double q1 = sorted[n / 4], q3 = sorted[(3 * n) / 4];
    const double iqr = q3 - q1;
    const double lo = sorted.front(), hi = sorted.back();
    if (iqr <= 0.0 || hi <= lo) return 1;
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    return std::max(1, std::min(512, static_cast<int>(std::ceil((hi - lo) / width))));
}

/// Empirical CDF evaluated at x (right-continuous).
inline double empirical_cdf(std::span<const double> sorted, double x) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
}

/// Kolmogorov-Smirnov statistic of a sample against a reference CDF. The
/// lower probe uses the CDF's left limit so step-function references (for
/// instance the sample's own empirical CDF) compare exactly.
inline double ks_statistic(std::span<const double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        const double at = cdf(sorted[i]);
        const double before = cdf(std::nextafter(sorted[i], -std::numeric_limits<double>::infinity()));
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - at),
                      std::abs(static_cast<double>(i) / n - before)});
    }
    return d;
}

/// Kolmogorov distribution K(x) = P(sup|bridge| <= x) = 1 - 2 sum (-1)^{k-1} e^{-2k^2x^2}.
inline double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    const double v = 1.0 - 2.0 * s;
    return std::clamp(v, 0.0, 1.0);
}

} // namespace vander
