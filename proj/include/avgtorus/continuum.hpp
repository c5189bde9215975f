#pragma once

#include "avgtorus/stats.hpp"
#include "avgtorus/torus.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace avgtorus {

// Scalar field on the continuum torus [0,1)^d.
using TorusField = std::function<double(std::span<const double>)>;

// 1D factor of the heat kernel of the diffusion with generator (1/2) Laplacian:
// Fourier form 1 + 2 sum_k exp(-2 pi^2 k^2 t) cos(2 pi k u) for t >= 1/(2 pi),
// Gaussian-image form sum_m (2 pi t)^{-1/2} exp(-(u+m)^2 / (2t)) below.
double heat_kernel_1d_factor(double t, double u);

// h_t(0, u) = prod_l factor(t, u_l), t > 0.
double heat_kernel_continuum(double t, std::span<const double> u);

// || h_t(0,.) - 1 ||_{L^p} by tensor-grid quadrature (2^10 points per axis for
// d = 1, 2^6 for d >= 2). A halving step estimates quadrature error; beyond
// 1e-6 it throws.
double lp_norm_continuum(double t, double p, int dim);

struct LimitProfileRow {
    int side;
    double t;           // diffusive time; discrete side runs at t * N^2
    double p;
    double discrete;    // E||eta_{tN^2}/pi - 1||_p^{p,1/p} (MC), or the heat
                        // flow norm when replicas == 0
    double continuum;   // || h_t - 1 ||_{L^p}
    double discrepancy;
    double discrepancy_times_n;
    double std_error;   // 0 in deterministic mode
};

// Per-N limit-profile comparison. replicas == 0 computes the deterministic
// part only (heat flow vs continuum kernel).
std::vector<LimitProfileRow> limit_profile_compare(int dim, std::span<const int> sides,
                                                   std::span<const double> diffusive_times,
                                                   double p, int64_t replicas, uint64_t seed,
                                                   int threads = 1);

struct HydrodynamicRow {
    int side;
    double t;
    double mc_mean_abs_error; // E | sum_x eta_{tN^2}(x) Psi(x/N) - int h_t^g Psi |
    double std_error;
    double scaled;            // mc_mean_abs_error * N
};

// Quantitative hydrodynamic check for initial density g (>= 0, integral 1)
// and test function Psi. xi is the lattice discretization xi(x) ~ g(x/N).
std::vector<HydrodynamicRow> hydrodynamic_check(const TorusField& g, const TorusField& psi,
                                                int dim, std::span<const int> sides,
                                                std::span<const double> diffusive_times,
                                                int64_t replicas, uint64_t seed,
                                                int threads = 1);

// Lattice discretization xi(x) proportional to g(x/N), normalized to sum 1.
MassProfile discretize_density(const TorusField& g, const TorusSpec& spec);

// int_{T^d} h_t^g(u) Psi(u) du by tensor quadrature, where h_t^g solves the
// heat equation with initial datum g (computed by mode projection).
double heat_solution_pairing(const TorusField& g, const TorusField& psi, double t, int dim);

} // namespace avgtorus
