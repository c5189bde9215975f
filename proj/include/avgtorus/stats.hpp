#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace avgtorus {

// Neumaier compensated summation; order-fixed reductions use it so that
// results do not depend on thread count.
class NeumaierSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Welford running mean/variance, fed in replica order.
class RunningStat {
  public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double sample_variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double std_error() const {
        return n_ > 1 ? std::sqrt(sample_variance() / static_cast<double>(n_)) : 0.0;
    }

  private:
    int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int64_t replicas = 0;
};

inline McEstimate to_estimate(const RunningStat& s) {
    return {s.mean(), s.std_error(), s.count()};
}

// Runs fn(i) for i in [0,n) on `threads` workers. Each index writes only its
// own output slots, so the observable result is schedule-independent.
void parallel_for_index(int64_t n, int threads, const std::function<void(int64_t)>& fn);

// Ordinary least squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

// Fit y ~ c * exp(b x): returns {c, b} from least squares on log y.
std::pair<double, double> fit_log_linear(std::span<const double> x, std::span<const double> y);

// Composite Simpson on a uniform grid (values.size() odd, i.e. even interval count).
double simpson(std::span<const double> values, double step);

double trapezoid(std::span<const double> values, double step);

} // namespace avgtorus
