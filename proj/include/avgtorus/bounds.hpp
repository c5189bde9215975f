#pragma once

#include "avgtorus/diffkernel.hpp"
#include "avgtorus/grid.hpp"
#include "avgtorus/torus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace avgtorus {

// Self-contained verification record: grid, both sides of the inequality or
// identity, per-point pass flags, fitted constants, and the inputs that
// produced it.
struct BoundReport {
    BoundReport(std::string n, const TorusSpec& s) : name(std::move(n)), spec(s) {}

    std::string name;
    TorusSpec spec;
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<uint8_t> pass;
    bool all_pass = true;
    double fitted_c = 0.0;
    double fitted_b = 0.0;
    int64_t replicas = 0;
    uint64_t seed = 0;
    std::string note;

    void push(double t, double l, double r, bool ok) {
        times.push_back(t);
        lhs.push_back(l);
        rhs.push_back(r);
        pass.push_back(ok ? 1 : 0);
        all_pass = all_pass && ok;
    }
};

// Exact curves reused across the harness.
struct ExactCurves {
    TimeGrid grid;
    SampledFunction u;       // S_t(0,0) - S_t(e,0)
    SampledFunction g;       // S_t^0(0,0) - S_t^0(e,0)
    SampledFunction f;
    SampledFunction conv_ug; // (u*g), so that N_t = d N^d (u*g)(t)
};
ExactCurves exact_curves(const TorusSpec& spec, const TimeGrid& grid, double tol = 1e-12);

// Concentration functional N_t = d N^d (u*g)(t) at one time (convolution grid
// step h).
double concentration_exact(const TorusSpec& spec, double t, double h = 1.0 / 256.0);

// int_t^infty d N^d u(s) ds, Simpson on [t, horizon] plus a fitted
// exponential tail.
double integrated_dirichlet(const TorusSpec& spec, double t, double horizon = 48.0,
                            double h = 1.0 / 64.0);

// Theorem "local smoothness" chain on the grid:
//   g <= u,   u(t) >= max_{grid s <= t} e^{s f(s)} g(t),   u <= sum_k gt^{*k}.
BoundReport verify_local_smoothness(const TorusSpec& spec, const TimeGrid& grid,
                                    double series_tol = 1e-13);

// Concentration: exact N_t vs Monte Carlo within 3 SE; ratio N_t/((1^t)Xi(t))
// reported via fitted min/max constants.
BoundReport verify_concentration(const TorusSpec& spec, std::span<const double> times,
                                 int64_t replicas, uint64_t seed, int threads = 1);

// Pointwise gradient estimates: exact E[(eta_t(0,x)-eta_t(0,y))^2] via the
// pair kernel when N^{2d} <= 1e4, otherwise a Monte Carlo fallback with the
// given replica budget; shape ratio against the bound envelope, decay fit.
BoundReport verify_gradient(const TorusSpec& spec, std::span<const double> times,
                            int64_t replicas = 10000, uint64_t seed = 1,
                            double tol = 1e-12, int threads = 1);

// L2 bound / identity: ||pi_t/pi-1||_2^2 + N_t vs int_t^infty d N^d u ds,
// and ratio against the corollary envelope.
BoundReport verify_l2_bound(const TorusSpec& spec, std::span<const double> times,
                            double rel_tol = 1e-4);

} // namespace avgtorus
