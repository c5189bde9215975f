#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace avgtorus {

// Uniform time grid t_k = k*step, k = 0..count-1.
struct TimeGrid {
    double step = 0.0;
    size_t count = 0;

    TimeGrid() = default;
    TimeGrid(double h, size_t n) : step(h), count(n) {
        if (!(h > 0.0) || n < 2) throw std::invalid_argument("TimeGrid: need step>0, count>=2");
    }
    static TimeGrid up_to(double horizon, double h) {
        auto n = static_cast<size_t>(std::llround(horizon / h));
        return TimeGrid(h, n + 1);
    }

    double time(size_t k) const { return static_cast<double>(k) * step; }
    double horizon() const { return time(count - 1); }
    std::vector<double> times() const {
        std::vector<double> out(count);
        for (size_t k = 0; k < count; ++k) out[k] = time(k);
        return out;
    }
    bool operator==(const TimeGrid&) const = default;
};

// A scalar function sampled on a uniform grid.
struct SampledFunction {
    TimeGrid grid;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(TimeGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.count)
            throw std::invalid_argument("SampledFunction: value count != grid count");
        for (double x : values)
            if (!std::isfinite(x)) throw std::invalid_argument("SampledFunction: non-finite value");
    }

    double operator[](size_t k) const { return values[k]; }
    double sup() const {
        double m = 0.0;
        for (double x : values) m = std::max(m, std::abs(x));
        return m;
    }
    // piecewise-linear evaluation, t within the horizon
    double interp(double t) const;
};

// Trapezoidal convolution on the shared grid:
// (a*b)(t_n) = h * (a_0 b_n / 2 + sum_{m=1}^{n-1} a_m b_{n-m} + a_n b_0 / 2).
SampledFunction convolve(const SampledFunction& a, const SampledFunction& b);

} // namespace avgtorus
