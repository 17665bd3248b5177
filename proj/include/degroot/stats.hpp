#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace degroot {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr out;
    out.count = xs.size();
    if (xs.empty()) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - out.mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const MeanStderr m = mean_stderr(xs);
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        ss += d * d;
    }
    return ss / static_cast<double>(xs.size() - 1);
}

struct WilsonInterval {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval, z = 1.96 by default (95%).
inline WilsonInterval wilson(std::size_t successes, std::size_t trials, double z = 1.96) {
    WilsonInterval w;
    if (trials == 0) return w;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    w.p_hat = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    w.lo = center - half;
    w.hi = center + half;
    return w;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("least_squares: need >=2 matching points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

// slope of log(y) against log(x); every x and y must be positive
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || ys[i] <= 0) throw std::domain_error("loglog_slope: nonpositive input");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    return least_squares(lx, ly).slope;
}

inline std::vector<double> second_differences(const std::vector<double>& xs) {
    if (xs.size() < 3) return {};
    std::vector<double> d(xs.size() - 2);
    for (std::size_t i = 0; i + 2 < xs.size(); ++i) d[i] = xs[i + 2] - 2.0 * xs[i + 1] + xs[i];
    return d;
}

}  // namespace degroot
