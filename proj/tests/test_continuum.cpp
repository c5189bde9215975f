#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "avgtorus/bounds.hpp"
#include "avgtorus/continuum.hpp"
#include "avgtorus/heat.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace avgtorus;

TEST_CASE("fourier and gaussian-image forms agree around the crossover") {
    const double t0 = 1.0 / (2.0 * std::numbers::pi);
    for (double t : {t0 / 2.0, 0.8 * t0, t0, 1.3 * t0, 2.0 * t0}) {
        for (double u = 0.0; u < 1.0; u += 0.0625) {
            // Fourier form evaluated directly, regardless of the crossover
            double fourier = 1.0;
            for (int k = 1; k < 60; ++k)
                fourier += 2.0 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * k * k * t) *
                           std::cos(2.0 * std::numbers::pi * k * u);
            double gauss = 0.0;
            for (int m = -40; m <= 40; ++m)
                gauss += std::exp(-(u + m) * (u + m) / (2.0 * t)) /
                         std::sqrt(2.0 * std::numbers::pi * t);
            CHECK(std::abs(fourier - gauss) < 1e-10);
            CHECK(std::abs(heat_kernel_1d_factor(t, u) - fourier) < 1e-10);
        }
    }
}

TEST_CASE("continuum kernel basics") {
    CHECK_THROWS_AS(heat_kernel_1d_factor(0.0, 0.3), std::invalid_argument);
    // uniform limit
    for (double u = 0.0; u < 1.0; u += 0.1)
        CHECK(std::abs(heat_kernel_1d_factor(10.0, u) - 1.0) < 1e-8);
    // reflection symmetry
    for (double t : {0.05, 0.25, 1.0})
        for (double u = 0.01; u < 0.5; u += 0.07)
            CHECK(heat_kernel_1d_factor(t, u) ==
                  doctest::Approx(heat_kernel_1d_factor(t, 1.0 - u)).epsilon(1e-12));
    // normalization by quadrature, d = 1 and d = 2
    for (double t : {0.02, 0.25}) {
        const int m = 2048;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += heat_kernel_1d_factor(t, (i + 0.5) / m);
        CHECK(std::abs(acc / m - 1.0) < 1e-8);
        std::vector<double> u2 = {0.0, 0.0};
        double acc2 = 0.0;
        const int m2 = 128;
        for (int i = 0; i < m2; ++i)
            for (int j = 0; j < m2; ++j) {
                u2[0] = (i + 0.5) / m2;
                u2[1] = (j + 0.5) / m2;
                acc2 += heat_kernel_continuum(t, u2);
            }
        CHECK(std::abs(acc2 / (m2 * m2) - 1.0) < 1e-8);
    }
}

TEST_CASE("continuum Lp norms") {
    // Parseval cross-check at p = 2
    for (int d : {1, 2}) {
        for (double t : {0.1, 0.25, 0.5}) {
            double s = 1.0;
            for (int k = 1; k < 60; ++k)
                s += 2.0 * std::exp(-4.0 * std::numbers::pi * std::numbers::pi * k * k * t);
            double expect = std::sqrt(std::pow(s, d) - 1.0);
            CHECK(lp_norm_continuum(t, 2.0, d) == doctest::Approx(expect).epsilon(1e-8));
        }
    }
    // norm monotonicity in p and in t
    double prev = 1e300;
    for (double t : {0.1, 0.2, 0.4, 0.8, 1.6}) {
        double n1 = lp_norm_continuum(t, 1.0, 1);
        double n2 = lp_norm_continuum(t, 2.0, 1);
        CHECK(n1 <= n2 + 1e-12);
        CHECK(n2 <= prev + 1e-12);
        prev = n2;
    }
    CHECK(lp_norm_continuum(4.0, 1.0, 1) < 1e-8);
}

TEST_CASE("deterministic limit profile discrepancy decays") {
    // The symmetric walk's local-CLT error makes the deterministic part
    // O(1/N^2): doubling N divides the discrepancy by about four.
    std::vector<int> sides = {16, 32};
    std::vector<double> times = {0.25};
    for (double p : {1.0, 2.0}) {
        auto rows = limit_profile_compare(1, sides, times, p, 0, 0);
        REQUIRE(rows.size() == 2);
        double ratio = rows[1].discrepancy / rows[0].discrepancy;
        CHECK(ratio > 0.2);
        CHECK(ratio < 0.3);
        // the O(1/N) bound claimed by the limit profile holds a fortiori
        CHECK(rows[1].discrepancy_times_n <= rows[0].discrepancy_times_n);
    }
    // large diffusive time: both sides nearly flat
    auto late = limit_profile_compare(1, std::vector<int>{16}, std::vector<double>{1.5}, 2.0, 0, 0);
    CHECK(late[0].discrepancy < 1e-3);
}

TEST_CASE("discrete-to-continuum kernel convergence (local CLT surrogate)") {
    double c_ref = 0.0;
    for (int n : {8, 16, 32}) {
        TorusSpec s(1, n);
        double t = 0.25;
        auto flow = heat_flow_profile(t * n * n, s);
        double worst = 0.0;
        for (long x = 0; x < n; ++x) {
            double h = heat_kernel_1d_factor(t, static_cast<double>(x) / n);
            worst = std::max(worst, std::abs(n * flow[x] - h));
        }
        if (n == 8) c_ref = worst * n;
        CHECK(worst * n <= c_ref + 1e-12); // discrepancy * N does not grow
    }
}

TEST_CASE("stochastic correction at diffusive times is O(1/N)") {
    // sqrt(N_t) at t N^2 scaled by N must not grow with N
    double t = 0.25;
    std::vector<double> scaled;
    for (int n : {8, 16}) {
        TorusSpec s(1, n);
        scaled.push_back(n * std::sqrt(concentration_exact(s, t * n * n)));
    }
    CHECK(scaled[1] <= scaled[0] * 1.05);
}

TEST_CASE("heat solution pairing: single mode decays at exp(-2 pi^2 k^2 t)") {
    TorusField g = [](std::span<const double> u) {
        return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * u[0]);
    };
    TorusField cosmode = [](std::span<const double> u) {
        return std::cos(2.0 * std::numbers::pi * u[0]);
    };
    for (double t : {0.1, 0.25, 0.5}) {
        double expect = 0.25 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * t);
        CHECK(heat_solution_pairing(g, cosmode, t, 1) == doctest::Approx(expect).epsilon(1e-8));
    }
    // pairing with 1 returns total mass
    TorusField one = [](std::span<const double>) { return 1.0; };
    CHECK(heat_solution_pairing(g, one, 0.3, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("hydrodynamic check: conservation and scaling") {
    TorusField gflat = [](std::span<const double>) { return 1.0; };
    TorusField one = [](std::span<const double>) { return 1.0; };
    std::vector<int> sides = {8};
    std::vector<double> times = {0.25};
    // Psi = 1: the pairing error is exactly zero by mass conservation
    auto rows = hydrodynamic_check(gflat, one, 1, sides, times, 200, 5, 2);
    CHECK(rows[0].mc_mean_abs_error < 1e-12);

    // cosine mode: scaled error stays bounded as N doubles
    TorusField g = [](std::span<const double> u) {
        return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * u[0]);
    };
    TorusField cosmode = [](std::span<const double> u) {
        return std::cos(2.0 * std::numbers::pi * u[0]);
    };
    std::vector<int> pair = {8, 16};
    auto rows2 = hydrodynamic_check(g, cosmode, 1, pair, times, 2000, 11, 2);
    REQUIRE(rows2.size() == 2);
    CHECK(rows2[1].scaled <= 2.0 * rows2[0].scaled + 3.0 * rows2[1].std_error * 16);
}

TEST_CASE("discretized density is O(1/N)-close in the L1 sense") {
    TorusField g = [](std::span<const double> u) {
        return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * u[0]);
    };
    for (int n : {8, 16, 32}) {
        TorusSpec s(1, n);
        auto xi = discretize_density(g, s);
        // || xi/pi - g(./N)/pi ||_1 = sum_x |xi(x) - g(x/N)/sum|
        double dev = 0.0;
        std::vector<double> u(1);
        for (long x = 0; x < n; ++x) {
            u[0] = static_cast<double>(x) / n;
            dev += std::abs(n * xi[x] - g(u));
        }
        CHECK(dev / n < 2.0 / n);
    }
}
