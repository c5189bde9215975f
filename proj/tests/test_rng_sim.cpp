#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "avgtorus/heat.hpp"
#include "avgtorus/sim.hpp"
#include "avgtorus/stats.hpp"

#include <cmath>
#include <numeric>
#include <vector>

using namespace avgtorus;

TEST_CASE("replica streams are reproducible and distinct") {
    auto a = RngStream::for_replica(42, 7);
    auto b = RngStream::for_replica(42, 7);
    auto c = RngStream::for_replica(42, 8);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
        all_equal = all_equal && (x == y);
        any_equal_c = any_equal_c || (x == z);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniform_below stays in range and is roughly uniform") {
    RngStream rng(3);
    std::vector<int> counts(7, 0);
    const int trials = 70000;
    for (int i = 0; i < trials; ++i) {
        auto v = rng.uniform_below(7);
        REQUIRE(v < 7);
        ++counts[static_cast<size_t>(v)];
    }
    for (int c : counts) CHECK(std::abs(c - trials / 7) < 5 * std::sqrt(trials / 7.0));
}

TEST_CASE("exponential moments") {
    RngStream rng(17);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += rng.exponential(4.0);
    CHECK(acc / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("apply_update") {
    TorusSpec s(1, 3);
    MassProfile eta({1.0, 0.0, 0.0}, s);
    auto one = apply_update(eta, 0, 1);
    CHECK(one[0] == 0.5);
    CHECK(one[1] == 0.5);
    CHECK(one[2] == 0.0);
    auto two = apply_update(apply_update(eta, 0, 1), 1, 2);
    CHECK(two[0] == 0.5);
    CHECK(two[1] == 0.25);
    CHECK(two[2] == 0.25);
    auto pi = MassProfile::uniform(s);
    auto same = apply_update(pi, 2, 0);
    for (long v = 0; v < 3; ++v) CHECK(same[v] == pi[v]);
    TorusSpec s5(1, 5);
    CHECK_THROWS_AS(apply_update(MassProfile::uniform(s5), 0, 2), std::invalid_argument);
}

TEST_CASE("simulate endpoint basics") {
    TorusSpec s(1, 6);
    auto xi = MassProfile::dirac(s);
    auto rng = RngStream::for_replica(1, 0);
    auto at0 = simulate(xi, 0.0, rng, s);
    for (long v = 0; v < 6; ++v) CHECK(at0[v] == xi[v]);
    auto pi = MassProfile::uniform(s);
    auto flat = simulate(pi, 3.0, rng, s);
    for (long v = 0; v < 6; ++v) CHECK(flat[v] == pi[v]);
}

TEST_CASE("mass conservation over many updates") {
    TorusSpec s(2, 8);
    auto rng = RngStream::for_replica(123, 0);
    // ~3e7 events at rate d*N^d = 128
    auto eta = simulate(MassProfile::dirac(s), 2.4e5, rng, s);
    double sum = std::accumulate(eta.values().begin(), eta.values().end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("event counts follow the total rate") {
    TorusSpec s(1, 8);
    double t = 2.0;
    const int reps = 4000;
    double mean = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto rng = RngStream::for_replica(777, static_cast<uint64_t>(r));
        mean += static_cast<double>(simulate_events(t, rng, s).size());
    }
    mean /= reps;
    double target = static_cast<double>(s.edge_count()) * t; // Poisson mean 16
    double se = std::sqrt(target / reps);
    CHECK(std::abs(mean - target) < 4.0 * se);
}

TEST_CASE("monte carlo mean recovers the heat flow") {
    TorusSpec s(1, 6);
    double t = 1.0;
    auto est = mc_mean_profile(MassProfile::dirac(s), t, 20000, 2024, s, 2);
    auto flow = heat_flow_profile(t, s);
    for (long v = 0; v < 6; ++v) {
        CHECK(std::abs(est[static_cast<size_t>(v)].mean - flow[v]) <=
              3.0 * est[static_cast<size_t>(v)].std_error + 1e-12);
    }
}

TEST_CASE("chunk walk distribution matches the quenched profile") {
    TorusSpec s(1, 8);
    {
        // no events: walker stays at the origin
        std::vector<UpdateEvent> none;
        RngStream rng(5);
        auto emp = chunk_walk_empirical(none, 1000, rng, s);
        CHECK(emp[0] == 1.0);
    }
    {
        // a single update on {0,1} splits the walker evenly
        std::vector<UpdateEvent> one = {{0.5, 0, 1}};
        RngStream rng(6);
        auto emp = chunk_walk_empirical(one, 200000, rng, s);
        CHECK(emp[0] == doctest::Approx(0.5).epsilon(0.02));
        CHECK(emp[1] == doctest::Approx(0.5).epsilon(0.02));
        for (long v = 2; v < 8; ++v) CHECK(emp[static_cast<size_t>(v)] == 0.0);
    }
    // generic quenched sequence: per-site multinomial bands and a merged-cell
    // chi-square statistic
    auto rng_events = RngStream::for_replica(31337, 0);
    auto events = simulate_events(2.0, rng_events, s);
    auto quenched = apply_events(MassProfile::dirac(s), events);
    const int64_t walkers = 100000;
    RngStream rng(8);
    auto emp = chunk_walk_empirical(events, walkers, rng, s);
    double chi2 = 0.0;
    int cells = 0;
    double small_obs = 0.0, small_exp = 0.0;
    for (long v = 0; v < 8; ++v) {
        double p = quenched[v];
        if (p == 0.0) {
            CHECK(emp[static_cast<size_t>(v)] == 0.0);
            continue;
        }
        double se = std::sqrt(p * (1.0 - p) / static_cast<double>(walkers));
        CHECK(std::abs(emp[static_cast<size_t>(v)] - p) <= 3.0 * se + 1e-12);
        double expect = p * static_cast<double>(walkers);
        double observed = emp[static_cast<size_t>(v)] * static_cast<double>(walkers);
        if (expect < 10.0) {
            small_obs += observed;
            small_exp += expect;
        } else {
            chi2 += (observed - expect) * (observed - expect) / expect;
            ++cells;
        }
    }
    if (small_exp > 0.0) {
        chi2 += (small_obs - small_exp) * (small_obs - small_exp) / small_exp;
        ++cells;
    }
    double dof = std::max(cells - 1, 1);
    CHECK(chi2 <= dof + 3.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("mc_functionals at t=0 is deterministic") {
    TorusSpec s(1, 8);
    std::vector<double> grid = {0.0};
    auto table = mc_functionals(MassProfile::dirac(s), grid, 16, 9, s);
    CHECK(table.at(0, 1).mean == doctest::Approx(7.0).epsilon(1e-12)); // N^d - 1
    CHECK(table.at(0, 1).std_error == 0.0);
    CHECK(table.at(0, 3).mean < 1e-24); // eta_0 = pi_0 up to profile rounding
    CHECK(table.at(0, 3).std_error == 0.0);
}

TEST_CASE("mc_functionals moment inequalities within 3 SE") {
    TorusSpec s(1, 8);
    std::vector<double> grid = {1.0, 4.0};
    auto table = mc_functionals(MassProfile::dirac(s), grid, 4000, 77, s, 2);
    auto uniform = MassProfile::uniform(s);
    for (size_t k = 0; k < grid.size(); ++k) {
        auto flow = heat_flow_profile(grid[k], s);
        const auto& conc = table.at(k, 3);
        for (double p : {1.0, 2.0}) {
            const auto& est = table.at(k, p == 1.0 ? 0 : 1);
            double mean_norm = std::pow(est.mean, 1.0 / p);
            double se_norm = est.std_error * std::pow(est.mean, 1.0 / p - 1.0) / p;
            double heat_norm = lp_distance(flow, uniform, p, s);
            // Jensen lower bound
            CHECK(heat_norm <= mean_norm + 3.0 * se_norm + 1e-12);
            // triangle upper bound
            CHECK(mean_norm <= heat_norm + std::sqrt(conc.mean) + 3.0 * (se_norm + conc.std_error) + 1e-12);
        }
        // Pythagoras identity
        const auto& l2 = table.at(k, 1);
        double pyth = heat_l2_sq(grid[k], s) + conc.mean;
        CHECK(std::abs(l2.mean - pyth) <= 3.0 * (l2.std_error + conc.std_error));
    }
}

TEST_CASE("mc results are identical across thread counts") {
    TorusSpec s(1, 8);
    std::vector<double> grid = {0.5, 2.0};
    auto a = mc_functionals(MassProfile::dirac(s), grid, 600, 5150, s, 1);
    auto b = mc_functionals(MassProfile::dirac(s), grid, 600, 5150, s, 4);
    for (size_t i = 0; i < a.estimates.size(); ++i) {
        CHECK(a.estimates[i].mean == b.estimates[i].mean);
        CHECK(a.estimates[i].std_error == b.estimates[i].std_error);
    }
}
