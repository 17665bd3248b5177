#include "degroot/line_kernel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <fftw3.h>

namespace degroot {

namespace {

constexpr double kTail = 1e-13;
constexpr double kDirectLimit = 2048.0;  // uniformize directly up to this t

// free-line kernel by uniformization; the window is wide enough that the
// support (at most one site per jump) never reaches it, so no truncation
// beyond the Poisson tail occurs
LineKernel uniformize(double t) {
    const long half = static_cast<long>(std::ceil(t + 12.0 * std::sqrt(t) + 60.0));
    const std::size_t size = static_cast<std::size_t>(2 * half + 1);
    std::vector<double> cur(size, 0.0), next(size, 0.0), acc(size, 0.0);
    cur[static_cast<std::size_t>(half)] = 1.0;

    const double log_t = std::log(t);
    for (long k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double w = std::exp(kd * log_t - t - std::lgamma(kd + 1.0));
        if (w > 0)
            for (std::size_t i = 0; i < size; ++i) acc[i] += w * cur[i];
        if (kd + 1.0 > t) {
            const double r = t / (kd + 1.0);
            if (w * r / (1.0 - r) < kTail) break;
        }
        if (k > half - 2) throw std::runtime_error("line kernel: window exhausted");
        next[0] = 0.5 * cur[1];
        next[size - 1] = 0.5 * cur[size - 2];
        for (std::size_t i = 1; i + 1 < size; ++i) next[i] = 0.5 * (cur[i - 1] + cur[i + 1]);
        cur.swap(next);
    }

    LineKernel q;
    q.t = t;
    q.half_width = half;
    q.mass = std::move(acc);
    q.l1_error = kTail;
    return q;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// q <- q * q (convolution), then clip to a window of 14 sqrt(2t) + 60
void square_kernel(LineKernel& q) {
    const double t2 = 2.0 * q.t;
    const long full_half = 2 * q.half_width;
    const std::size_t full = static_cast<std::size_t>(2 * full_half + 1);
    const std::size_t n = next_pow2(full);

    std::vector<double> in(n, 0.0);
    std::copy(q.mass.begin(), q.mass.end(), in.begin());

    std::vector<std::complex<double>> spec(n / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    for (auto& z : spec) z *= z;
    std::vector<double> out(n, 0.0);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                         reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                         FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    const double scale = 1.0 / static_cast<double>(n);

    const long keep_half =
        std::min<long>(full_half, static_cast<long>(std::ceil(14.0 * std::sqrt(t2) + 60.0)));
    std::vector<double> mass(static_cast<std::size_t>(2 * keep_half + 1), 0.0);
    double kept = 0.0;
    double negatives = 0.0;
    for (long v = -keep_half; v <= keep_half; ++v) {
        double x = out[static_cast<std::size_t>(v + full_half)] * scale;
        if (x < 0) {
            negatives -= x;
            x = 0.0;
        }
        mass[static_cast<std::size_t>(v + keep_half)] = x;
        kept += x;
    }

    // new error: both factors carry the old error, plus the clipped window mass
    // (bounded by 1 - kept + old errors) and FFT roundoff
    const double fft_noise = 1e-14 * std::log2(static_cast<double>(n));
    const double prev = q.l1_error;
    double err = 2.0 * prev + fft_noise + negatives;
    const double deficit = 1.0 - kept;
    if (deficit > err) err = deficit + fft_noise;

    q.t = t2;
    q.half_width = keep_half;
    q.mass = std::move(mass);
    q.l1_error = err;
}

}  // namespace

LineKernel line_heat_kernel(double t) {
    if (t < 0) throw std::invalid_argument("line_heat_kernel: t >= 0");
    if (t == 0) {
        LineKernel q;
        q.half_width = 0;
        q.mass = {1.0};
        return q;
    }
    if (t <= kDirectLimit) return uniformize(t);

    int levels = 0;
    double base = t;
    while (base > kDirectLimit) {
        base *= 0.5;
        ++levels;
    }
    LineKernel q = uniformize(base);
    for (int i = 0; i < levels; ++i) square_kernel(q);
    if (q.l1_error > 1e-6) throw std::runtime_error("line kernel: accumulated error too large");
    return q;
}

double line_expected_value(const LineKernel& kernel, const std::function<double(long)>& f) {
    double acc = 0.0;
    for (long v = -kernel.half_width; v <= kernel.half_width; ++v) acc += kernel.at(v) * f(v);
    return acc;
}

}  // namespace degroot
