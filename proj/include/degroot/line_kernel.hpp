#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace degroot {

// Transition kernel of the rate-1 continuous-time simple random walk on the
// integer line: q_t(v) = P(X(t) = v | X(0) = 0), stored on [-half_width, half_width].
//
// Small times come straight from uniformization. Large times are reached by
// repeatedly convolving the kernel with itself (the semigroup property; on the
// line e^{t(P-I)} acts by convolution), so the cost is logarithmic in t instead
// of linear. l1_error carries a running bound on the total variation error from
// Poisson-tail truncation, window clipping and FFT roundoff.
struct LineKernel {
    double t = 0.0;
    long half_width = 0;
    std::vector<double> mass;  // index v + half_width
    double l1_error = 0.0;

    double at(long v) const {
        if (v < -half_width || v > half_width) return 0.0;
        return mass[static_cast<std::size_t>(v + half_width)];
    }
};

LineKernel line_heat_kernel(double t);

// sum_v q_t(v) f(v)
double line_expected_value(const LineKernel& kernel, const std::function<double(long)>& f);

}  // namespace degroot
