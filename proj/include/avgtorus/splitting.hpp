#pragma once

#include "avgtorus/markov.hpp"
#include "avgtorus/stats.hpp"
#include "avgtorus/torus.hpp"

#include <cstdint>
#include <vector>

namespace avgtorus {

// Configurations of k indistinguishable particles on the torus, enumerated
// lexicographically by count vector. |Omega_k| = C(k + N^d - 1, k), capped at
// 2e4 for exact mode.
class OccupancySpace {
  public:
    OccupancySpace(const TorusSpec& spec, int k);

    const TorusSpec& spec() const { return spec_; }
    int particles() const { return k_; }
    long count() const { return count_; }

    long index_of(std::span<const int> config) const;
    std::vector<int> config_of(long index) const;

  private:
    TorusSpec spec_;
    int k_;
    long count_;
    // binom_[c][r] = C(c + r - 1, c): configs of c particles in r cells
    std::vector<std::vector<long>> occ_;
};

// Binomial splitting process: at rate 1 per edge {x,y}, redistribute the
// zeta(x)+zeta(y) particles binomially. Reversible w.r.t. Multinomial(k, pi).
struct SplittingModel {
    OccupancySpace space;
    SparseGenerator gen;            // uniformization constant d*N^d
    std::vector<double> stationary; // mu_{k,pi}
};

SplittingModel build_splitting_generator(const TorusSpec& spec, int k);

// Multinomial(k, eta) over the occupancy space.
std::vector<double> multinomial_pmf(const OccupancySpace& space, std::span<const double> eta);

// max over entries of |mu(z) Q(z,z') - mu(z') Q(z',z)|.
double detailed_balance_error(const SplittingModel& model);

// Worst-case TV distance d_k(t) over Dirac starts, exact semigroup rows.
std::vector<double> exact_tv_curve(const SplittingModel& model, std::span<const double> tgrid,
                                   double tol = 1e-12);

// TV distance of one start distribution at one time.
double tv_from_start(const SplittingModel& model, std::vector<double> start, double t,
                     double tol = 1e-12);

struct GapReport {
    double gap;          // smallest nonzero eigenvalue of -Q
    double zero_mode;    // smallest (should be ~0)
    double expected;     // 1 - cos(2 pi / N)
    double error;        // |gap - expected|
};
// Dense symmetric eigensolve of -Q conjugated by sqrt(mu); |Omega_k| <= 2000.
GapReport spectral_gap_check(const SplittingModel& model);

struct IntertwiningReport {
    std::vector<double> lhs;      // mu_{k,xi} e^{tQ}, exact
    std::vector<McEstimate> rhs;  // E[ Multinomial(k, eta_t) ], Monte Carlo
    double max_sigma_deviation;   // max over states of |lhs-rhs| / SE
    bool pass;                    // within 3 SE per state
};
IntertwiningReport intertwining_check(const MassProfile& xi, int k, double t,
                                      int64_t replicas, uint64_t seed, int threads = 1);

struct CutoffPoint {
    double a;
    double time;        // T(a), clipped at 0
    bool clipped;
    double tv_exact;    // NaN outside exact mode
    double l2_upper;    // sqrt(e k) * sqrt(E ||eta/pi - 1||_2^2), exact L2 route
};
// T(a) = (t_rel/2)(log k + a w_k), w_k = 1 v (log k)/N^d. The TV column is
// filled only when `model` is non-null (exact mode).
std::vector<CutoffPoint> cutoff_curve(const TorusSpec& spec, int k, std::span<const double> a_grid,
                                      const SplittingModel* model = nullptr, double tol = 1e-12);

} // namespace avgtorus
