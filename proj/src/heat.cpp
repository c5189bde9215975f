#include "avgtorus/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace avgtorus {

SpectralData spectral_data(int side) {
    if (side < 3) throw std::invalid_argument("spectral_data: side must be >= 3");
    SpectralData s;
    s.side = side;
    s.eigenvalues.resize(static_cast<size_t>(side));
    for (int j = 0; j < side; ++j)
        s.eigenvalues[static_cast<size_t>(j)] =
            1.0 - std::cos(2.0 * std::numbers::pi * j / side);
    s.gap = s.eigenvalues[1];
    s.t_rel = 1.0 / s.gap;
    return s;
}

double kernel_1d(double t, long i, int side) {
    if (t < 0.0) throw std::invalid_argument("kernel_1d: negative time");
    const int n = side;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double lam = 1.0 - std::cos(2.0 * std::numbers::pi * j / n);
        acc += std::cos(2.0 * std::numbers::pi * static_cast<double>(i) * j / n) *
               std::exp(-2.0 * lam * t);
    }
    acc /= n;
    if (acc < 0.0) {
        if (acc < -1e-12)
            throw std::runtime_error("kernel_1d: value below -1e-12, numerical failure");
        acc = 0.0;
    }
    return acc;
}

MassProfile heat_flow_profile(double t, const TorusSpec& spec) {
    if (t < 0.0) throw std::invalid_argument("heat_flow_profile: negative time");
    const int n = spec.side;
    std::vector<double> p1(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) p1[static_cast<size_t>(i)] = kernel_1d(t / 2.0, i, n);
    const long V = spec.volume();
    std::vector<double> out(static_cast<size_t>(V));
    for (long v = 0; v < V; ++v) {
        long rem = v;
        double prod = 1.0;
        for (int ax = 0; ax < spec.dim; ++ax) {
            prod *= p1[static_cast<size_t>(rem % n)];
            rem /= n;
        }
        out[static_cast<size_t>(v)] = prod;
    }
    // renormalize the O(1e-15) tensor-product rounding so construction passes
    double sum = 0.0;
    for (double x : out) sum += x;
    for (double& x : out) x /= sum;
    return MassProfile(std::move(out), spec);
}

double dirichlet_heat(double t, const TorusSpec& spec) {
    double p0 = kernel_1d(t, 0, spec.side);
    double p1 = kernel_1d(t, 1, spec.side);
    return static_cast<double>(spec.edge_count()) *
           std::pow(p0, spec.dim - 1) * (p0 - p1);
}

double xi(double t, const TorusSpec& spec) {
    if (t < 0.0) throw std::invalid_argument("xi: negative time");
    const auto sd = spectral_data(spec.side);
    const double V = static_cast<double>(spec.volume());
    double denom = std::max(
        std::min(std::pow(static_cast<double>(spec.side), spec.dim + 2),
                 std::pow(t, spec.dim / 2.0 + 1.0)),
        1.0);
    return V * std::exp(-2.0 * t / sd.t_rel) / denom;
}

double heat_l2_sq(double t, const TorusSpec& spec) {
    double p0 = kernel_1d(t, 0, spec.side);
    return static_cast<double>(spec.volume()) * std::pow(p0, spec.dim) - 1.0;
}

} // namespace avgtorus
