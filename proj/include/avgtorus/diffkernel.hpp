#pragma once

#include "avgtorus/grid.hpp"
#include "avgtorus/heat.hpp"
#include "avgtorus/markov.hpp"
#include "avgtorus/torus.hpp"

#include <utility>

namespace avgtorus {

// Generator A = A0 + R of the difference walk Z_t = X_t - Y_t of the coupled
// random walks: the rate-2 simple walk with slow bonds at the origin.
// Rates: from 0, 1/2 to each of the 2d neighbors; from z with |z|=1, 1/2 to
// the origin, 1/4 to -z, 1 to every other neighbor; elsewhere 1 per neighbor.
struct DefectGenerator {
    TorusSpec spec;
    SparseGenerator gen; // uniformization constant fixed at 2d
};

// Requires N >= 4 (for N = 3 the -z neighbor structure degenerates).
DefectGenerator build_defect_generator(const TorusSpec& spec);

// S_t(.,0) by uniformization, tol in (0, 1e-6].
KernelVector kernel_vector(const DefectGenerator& gen, double t, double tol = 1e-12);

// u(t) = S_t(0,0) - S_t(e,0) on a uniform grid (single pass, stepped evolution).
SampledFunction u_exact(const TimeGrid& grid, const TorusSpec& spec, double tol = 1e-12);

// Closed forms from the 1D kernel:
// g(t) = p_t(0)^{d-1} (p_t(0) - p_t(1));
// f(t) = 3/2 p_t(0) - 2 p_t(1) + 1/2 p_t(2)                       (d = 1)
// f(t) = p_t(0)^{d-2} [ d (p_t(0)-p_t(1))^2
//                      + 1/2 (p_t(0)^2 - 2 p_t(1)^2 + p_t(0) p_t(2)) ]  (d >= 2)
std::pair<double, double> f_g_closed(double t, const TorusSpec& spec);

SampledFunction g_on_grid(const TimeGrid& grid, const TorusSpec& spec);
SampledFunction f_on_grid(const TimeGrid& grid, const TorusSpec& spec);

// Volterra solve of u = g + u*f by the trapezoidal rule on the shared grid.
SampledFunction renewal_solve(const SampledFunction& g, const SampledFunction& f);

// Partial sums of u~ = sum_{k>=1} gt^{*k}; stops once the last term's sup
// drops below tol, errors out at k_cap first.
SampledFunction series_sum(const SampledFunction& gt, int k_cap = 400, double tol = 1e-10);

// int_0^inf g dt by Simpson quadrature on [0,T] plus the dominant-eigenvalue
// tail estimate g(T) * t_rel / 2. Equals (N^d - 1) / (2 d N^d).
double g_integral(const TorusSpec& spec, double horizon = 32.0, double h = 1.0 / 128.0);

// Coupled-random-walk pair chain on ordered pairs (X,Y), state a*V + b.
struct CrwGenerator {
    TorusSpec spec;
    SparseGenerator gen;
};

// Exact mode only: requires N^{2d} <= 1e4.
CrwGenerator build_crw_generator(const TorusSpec& spec);

// Law of (X_t, Y_t) from (0,0); probability vector over ordered pairs.
std::vector<double> crw_pair_kernel(const CrwGenerator& crw, double t, double tol = 1e-12);

// max over neighbor pairs {x,y} of E[(eta_t(0,x) - eta_t(0,y))^2], evaluated
// from a pair-kernel snapshot K: K(x,x) - 2K(x,y) + K(y,y).
double max_sq_gradient(std::span<const double> pair_kernel, const TorusSpec& spec);
double mean_sq_gradient(std::span<const double> pair_kernel, const TorusSpec& spec);

} // namespace avgtorus
