#pragma once

#include "avgtorus/rng.hpp"
#include "avgtorus/stats.hpp"
#include "avgtorus/torus.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace avgtorus {

// One Poisson update: at `time`, the masses on nearest-neighbor pair {x,y}
// are both replaced by their average.
struct UpdateEvent {
    double time;
    long x;
    long y;
};

// eta^{xy}: level out the masses on a nearest-neighbor pair.
MassProfile apply_update(const MassProfile& eta, long x, long y);

// Trajectory endpoint of Avg(T^d_N) started from xi. Each of the d*N^d edges
// carries an independent rate-1 exponential clock, realized as a single
// race of total rate d*N^d plus a uniform edge choice.
MassProfile simulate(const MassProfile& xi, double t, RngStream& rng, const TorusSpec& spec);

// Same trajectory law, with the event sequence recorded.
std::vector<UpdateEvent> simulate_events(double t, RngStream& rng, const TorusSpec& spec);

// Deterministic replay of a recorded event sequence.
MassProfile apply_events(const MassProfile& xi, std::span<const UpdateEvent> events);

// For a quenched event sequence, walkers started at 0 move to the other
// endpoint with probability 1/2 whenever their site is updated; their
// empirical endpoint distribution estimates eta_t(0,.).
std::vector<double> chunk_walk_empirical(std::span<const UpdateEvent> events,
                                         int64_t walkers, RngStream& rng,
                                         const TorusSpec& spec);

enum class Functional {
    L1Pow,    // E || eta/pi - 1 ||_1
    L2Sq,     // E || eta/pi - 1 ||_2^2
    Dirichlet,// E [ E(eta/pi) ]
    ConcL2Sq, // E || eta/pi - pi_t/pi ||_2^2
};
inline const char* functional_name(Functional f) {
    switch (f) {
        case Functional::L1Pow: return "lp_pow_p1";
        case Functional::L2Sq: return "lp_pow_p2";
        case Functional::Dirichlet: return "dirichlet";
        case Functional::ConcL2Sq: return "conc_l2_sq";
    }
    return "?";
}

struct McFunctionalsTable {
    std::vector<double> times;
    std::vector<Functional> functionals;
    // estimates[ti * functionals.size() + fi]
    std::vector<McEstimate> estimates;
    uint64_t seed = 0;
    const McEstimate& at(size_t ti, size_t fi) const {
        return estimates[ti * functionals.size() + fi];
    }
};

// Moment functionals of eta_t along a time grid, with standard errors.
// Deterministic given (seed, replicas, grid), independent of thread count.
McFunctionalsTable mc_functionals(const MassProfile& xi, std::span<const double> tgrid,
                                  int64_t replicas, uint64_t seed, const TorusSpec& spec,
                                  int threads = 1);

// Second moments E[eta_t(x) eta_t(y)] for all ordered pairs (x,y), the Monte
// Carlo side of the CRW duality relation.
struct PairMomentTable {
    long volume = 0;
    std::vector<McEstimate> moments; // x*V + y
};
PairMomentTable mc_pair_moments(const MassProfile& xi, double t, int64_t replicas,
                                uint64_t seed, const TorusSpec& spec, int threads = 1);

// E[eta_t] estimated entrywise (mean-identity check against the heat flow).
std::vector<McEstimate> mc_mean_profile(const MassProfile& xi, double t, int64_t replicas,
                                        uint64_t seed, const TorusSpec& spec, int threads = 1);

// Generic per-replica scalar observable of the trajectory endpoint.
McEstimate mc_endpoint_scalar(const MassProfile& xi, double t, int64_t replicas,
                              uint64_t seed, const TorusSpec& spec,
                              const std::function<double(std::span<const double>)>& observable,
                              int threads = 1);

// Generic vector observable: fill(eta, out) writes k_out doubles per replica.
std::vector<McEstimate> mc_endpoint_vector(
    const MassProfile& xi, double t, int64_t replicas, uint64_t seed, const TorusSpec& spec,
    size_t k_out, const std::function<void(std::span<const double>, double*)>& fill,
    int threads = 1);

} // namespace avgtorus
