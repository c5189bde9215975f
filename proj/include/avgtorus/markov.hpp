#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace avgtorus {

// Raised when an exact-mode computation exceeds its size or truncation cap.
struct CapExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conservative CTMC generator in CSR form (off-diagonal rates only).
struct SparseGenerator {
    long n = 0;
    std::vector<long> row_ptr;
    std::vector<long> col;
    std::vector<double> rate;
    std::vector<double> exit;  // total exit rate per state (= -diagonal)
    double uniform_rate = 0.0; // Lambda >= max exit rate

    double entry(long i, long j) const; // off-diagonal rate, 0 if absent
};

class GeneratorBuilder {
  public:
    explicit GeneratorBuilder(long n) : n_(n), rows_(static_cast<size_t>(n)) {}
    void add(long from, long to, double r);
    // Lambda defaults to max exit rate; pass a larger value to fix the
    // uniformization constant independently of the instance.
    SparseGenerator build(double uniform_rate = 0.0) const;

  private:
    long n_;
    std::vector<std::vector<std::pair<long, double>>> rows_;
};

// w(t) = w0 * e^{tQ} for a distribution row-vector w0, by uniformization:
// e^{tQ} = sum_m Poisson(Lambda t)(m) P^m with P = I + Q/Lambda, truncated
// once the Poisson tail mass drops below tol. The truncated tail bounds the
// L1 error of the result.
std::vector<double> evolve_distribution(const SparseGenerator& gen,
                                        std::vector<double> w0, double t,
                                        double tol = 1e-12);

// Evolves w0 through an ascending time grid, invoking visit(k, w) at each
// grid point. Steps between consecutive points, so per-point cost stays small.
void evolve_distribution_grid(const SparseGenerator& gen, std::vector<double> w0,
                              std::span<const double> times,
                              const std::function<void(size_t, std::span<const double>)>& visit,
                              double tol_per_step = 1e-13);

} // namespace avgtorus
