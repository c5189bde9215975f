#pragma once

#include "avgtorus/torus.hpp"

#include <vector>

namespace avgtorus {

// Spectrum of the 1D cycle walk: lambda_j = 1 - cos(2 pi j / N).
struct SpectralData {
    int side;
    std::vector<double> eigenvalues; // lambda_0..lambda_{N-1}
    double gap;                      // lambda_1
    double t_rel;                    // 1/gap
};

SpectralData spectral_data(int side);

// Probability vector S_t(.,0) (or S_t^0(.,0)) over torus vertices at time t.
struct KernelVector {
    double t;
    std::vector<double> values;
};

// 1D cycle kernel at the doubled rate (generator of Z^0 restricted to one
// coordinate): p_t(i) = (1/N) sum_j cos(2 pi i j / N) exp(-2 lambda_j t).
// Negative rounding down to -1e-12 is clamped to 0; anything lower throws.
double kernel_1d(double t, long i, int side);

// Heat flow of the single walk started at 0: pi_t(0,x) = prod_l p_{t/2}(i_l).
// (The single walk jumps to each neighbor at rate 1/2; halving time halves rate.)
MassProfile heat_flow_profile(double t, const TorusSpec& spec);

// E(pi_t(0,.)/pi) = d N^d p_t(0)^{d-1} (p_t(0) - p_t(1)), strictly decreasing.
double dirichlet_heat(double t, const TorusSpec& spec);

// Benchmark envelope Xi(t) = N^d exp(-2t/t_rel) / ((N^{d+2} ^ t^{d/2+1}) v 1).
double xi(double t, const TorusSpec& spec);

// ||pi_t(0,.)/pi - 1||_2^2 = N^d p_t(0)^d - 1 (Parseval route, exact).
double heat_l2_sq(double t, const TorusSpec& spec);

} // namespace avgtorus
