#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace avgtorus {

// Discrete d-dimensional torus of side N. N >= 3 so that nearest-neighbor
// pairs are simple edges (N = 2 would create parallel edges).
struct TorusSpec {
    int dim;
    int side;

    TorusSpec(int d, int n) : dim(d), side(n) {
        if (d < 1) throw std::invalid_argument("TorusSpec: dimension must be >= 1");
        if (n < 3) throw std::invalid_argument("TorusSpec: side must be >= 3");
        double v = 1.0;
        for (int i = 0; i < d; ++i) v *= n;
        if (v > 1e9) throw std::invalid_argument("TorusSpec: vertex count too large");
    }

    long volume() const {
        long v = 1;
        for (int i = 0; i < dim; ++i) v *= side;
        return v;
    }
    long edge_count() const { return static_cast<long>(dim) * volume(); }

    bool operator==(const TorusSpec&) const = default;
};

// Row-major canonical index; coordinates are wrapped mod N (negatives allowed).
long canonical_index(std::span<const long> coords, const TorusSpec& spec);
std::vector<long> coords_of(long v, const TorusSpec& spec);

// The 2d distinct nearest neighbors of v.
std::vector<long> neighbors(long v, const TorusSpec& spec);

// Flat neighbor table, entry [v*2d + 2*axis] = v+e_axis, [v*2d + 2*axis+1] = v-e_axis.
std::vector<long> neighbor_table(const TorusSpec& spec);

// Probability mass function on the torus vertices. Validated on construction
// only; entries in [0,1], total mass 1 within 1e-9.
class MassProfile {
  public:
    MassProfile(std::vector<double> values, const TorusSpec& spec);

    static MassProfile dirac(const TorusSpec& spec, long vertex = 0);
    static MassProfile uniform(const TorusSpec& spec);

    const TorusSpec& spec() const { return spec_; }
    std::span<const double> values() const { return values_; }
    double operator[](long v) const { return values_[static_cast<size_t>(v)]; }
    long size() const { return static_cast<long>(values_.size()); }

  private:
    TorusSpec spec_;
    std::vector<double> values_;
};

// L^p distance to equilibrium metric on (T^d_N, pi), pi uniform:
// || eta/pi - rho/pi ||_p = ( sum_x pi(x) |eta(x)/pi(x) - rho(x)/pi(x)|^p )^{1/p}.
// Requires p in [1,2].
double lp_distance(const MassProfile& eta, const MassProfile& rho, double p,
                   const TorusSpec& spec);

// Dirichlet form of the simple random walk:
// E(psi) = 1/(4 N^d) sum_x sum_{|x-y|=1} (psi(x)-psi(y))^2.
double dirichlet_form(std::span<const double> psi, const TorusSpec& spec);

// Incremental tracker for E(eta/pi) across pairwise averaging updates.
// Maintains sum over ordered neighbor pairs of (eta(x)-eta(y))^2; a full
// recomputation must agree within 1e-8.
class DirichletTracker {
  public:
    DirichletTracker(std::span<const double> eta, const TorusSpec& spec);

    // Apply the averaging update on edge {x,y} to eta (in place) and patch the sum.
    void apply_update(std::span<double> eta, long x, long y);

    // Current E(eta/pi) = N^d * sum / (4 N^d) ... with psi = N^d * eta.
    double dirichlet() const;

  private:
    TorusSpec spec_;
    std::vector<long> nbr_;
    double pair_sum_; // sum over ordered pairs of (eta(x)-eta(y))^2
};

} // namespace avgtorus
