#include "avgtorus/grid.hpp"

namespace avgtorus {

double SampledFunction::interp(double t) const {
    if (t < 0.0 || t > grid.horizon() * (1.0 + 1e-12))
        throw std::invalid_argument("SampledFunction::interp: time outside grid");
    double pos = t / grid.step;
    auto k = static_cast<size_t>(pos);
    if (k + 1 >= grid.count) return values.back();
    double w = pos - static_cast<double>(k);
    return (1.0 - w) * values[k] + w * values[k + 1];
}

SampledFunction convolve(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("convolve: grids differ");
    const size_t n = a.grid.count;
    const double h = a.grid.step;
    std::vector<double> out(n, 0.0);
    for (size_t k = 1; k < n; ++k) {
        double s = 0.5 * (a.values[0] * b.values[k] + a.values[k] * b.values[0]);
        for (size_t m = 1; m < k; ++m) s += a.values[m] * b.values[k - m];
        out[k] = h * s;
    }
    return SampledFunction(a.grid, std::move(out));
}

} // namespace avgtorus
