#include "avgtorus/stats.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace avgtorus {

void parallel_for_index(int64_t n, int threads, const std::function<void(int64_t)>& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || n < 2) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> counter{0};
    auto worker = [&] {
        for (;;) {
            int64_t i = counter.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int nworkers = static_cast<int>(std::min<int64_t>(threads, n));
    pool.reserve(static_cast<size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need two samples");
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

std::pair<double, double> fit_log_linear(std::span<const double> x, std::span<const double> y) {
    std::vector<double> ly(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::invalid_argument("fit_log_linear: nonpositive value");
        ly[i] = std::log(y[i]);
    }
    double b = fit_slope(x, ly);
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += ly[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    return {std::exp(my - b * mx), b};
}

double simpson(std::span<const double> values, double step) {
    size_t n = values.size();
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("simpson: need an odd number of grid values");
    double acc = values[0] + values[n - 1];
    for (size_t i = 1; i + 1 < n; ++i) acc += values[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * step / 3.0;
}

double trapezoid(std::span<const double> values, double step) {
    if (values.size() < 2) return 0.0;
    NeumaierSum s;
    for (size_t i = 1; i + 1 < values.size(); ++i) s.add(values[i]);
    return step * (0.5 * (values.front() + values.back()) + s.value());
}

} // namespace avgtorus
