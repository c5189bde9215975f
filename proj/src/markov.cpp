#include "avgtorus/markov.hpp"

#include <algorithm>
#include <cmath>

namespace avgtorus {

double SparseGenerator::entry(long i, long j) const {
    for (long k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i + 1)]; ++k)
        if (col[static_cast<size_t>(k)] == j) return rate[static_cast<size_t>(k)];
    return 0.0;
}

void GeneratorBuilder::add(long from, long to, double r) {
    if (from == to || r == 0.0) return;
    if (r < 0.0) throw std::invalid_argument("GeneratorBuilder: negative rate");
    rows_[static_cast<size_t>(from)].emplace_back(to, r);
}

SparseGenerator GeneratorBuilder::build(double uniform_rate) const {
    SparseGenerator g;
    g.n = n_;
    g.row_ptr.assign(static_cast<size_t>(n_ + 1), 0);
    g.exit.assign(static_cast<size_t>(n_), 0.0);
    double max_exit = 0.0;
    std::vector<std::pair<long, double>> merged;
    for (long i = 0; i < n_; ++i) {
        merged.assign(rows_[static_cast<size_t>(i)].begin(), rows_[static_cast<size_t>(i)].end());
        std::sort(merged.begin(), merged.end());
        // merge duplicate targets
        size_t w = 0;
        for (size_t r = 0; r < merged.size(); ++r) {
            if (w > 0 && merged[w - 1].first == merged[r].first)
                merged[w - 1].second += merged[r].second;
            else
                merged[w++] = merged[r];
        }
        merged.resize(w);
        double ex = 0.0;
        for (auto& [j, r] : merged) {
            g.col.push_back(j);
            g.rate.push_back(r);
            ex += r;
        }
        g.exit[static_cast<size_t>(i)] = ex;
        max_exit = std::max(max_exit, ex);
        g.row_ptr[static_cast<size_t>(i + 1)] = static_cast<long>(g.col.size());
    }
    g.uniform_rate = uniform_rate > 0.0 ? uniform_rate : max_exit;
    if (g.uniform_rate < max_exit - 1e-12 * std::max(1.0, max_exit))
        throw std::invalid_argument("GeneratorBuilder: uniformization rate below max exit rate");
    if (g.uniform_rate <= 0.0) g.uniform_rate = 1.0; // absorbing-everywhere chain
    return g;
}

// one application of P^T = (I + Q/Lambda)^T to a distribution
static void apply_transition(const SparseGenerator& g, const std::vector<double>& w,
                             std::vector<double>& out) {
    const double lam = g.uniform_rate;
    std::fill(out.begin(), out.end(), 0.0);
    for (long i = 0; i < g.n; ++i) {
        double wi = w[static_cast<size_t>(i)];
        if (wi == 0.0) continue;
        out[static_cast<size_t>(i)] += wi * (1.0 - g.exit[static_cast<size_t>(i)] / lam);
        for (long k = g.row_ptr[static_cast<size_t>(i)]; k < g.row_ptr[static_cast<size_t>(i + 1)]; ++k)
            out[static_cast<size_t>(g.col[static_cast<size_t>(k)])] +=
                wi * g.rate[static_cast<size_t>(k)] / lam;
    }
}

std::vector<double> evolve_distribution(const SparseGenerator& gen, std::vector<double> w0,
                                        double t, double tol) {
    if (t < 0.0) throw std::invalid_argument("evolve_distribution: negative time");
    if (!(tol > 0.0 && tol <= 1e-6))
        throw std::invalid_argument("evolve_distribution: tol must be in (0, 1e-6]");
    if (static_cast<long>(w0.size()) != gen.n)
        throw std::invalid_argument("evolve_distribution: vector size mismatch");
    const double mu = gen.uniform_rate * t;
    if (t == 0.0 || mu == 0.0) return w0;
    if (mu > 690.0)
        throw CapExceededError("evolve_distribution: Lambda*t too large for exact mode");

    std::vector<double> out(w0.size(), 0.0), next(w0.size());
    double weight = std::exp(-mu); // Poisson(mu)(0)
    double cum = weight;
    for (size_t i = 0; i < w0.size(); ++i) out[i] = weight * w0[i];

    const long m_cap = 200000;
    for (long m = 1;; ++m) {
        if (m > m_cap)
            throw CapExceededError("evolve_distribution: truncation order cap exceeded");
        apply_transition(gen, w0, next);
        std::swap(w0, next);
        weight *= mu / static_cast<double>(m);
        cum += weight;
        for (size_t i = 0; i < w0.size(); ++i) out[i] += weight * w0[i];
        if (cum >= 1.0 - tol && static_cast<double>(m) >= mu) break;
    }
    return out;
}

void evolve_distribution_grid(const SparseGenerator& gen, std::vector<double> w0,
                              std::span<const double> times,
                              const std::function<void(size_t, std::span<const double>)>& visit,
                              double tol_per_step) {
    double now = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
        double t = times[k];
        if (t < now - 1e-15)
            throw std::invalid_argument("evolve_distribution_grid: times must be ascending");
        if (t > now)
            w0 = evolve_distribution(gen, std::move(w0), t - now,
                                     std::min(tol_per_step, 1e-7));
        now = t;
        visit(k, w0);
    }
}

} // namespace avgtorus
