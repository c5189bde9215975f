#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "avgtorus/diffkernel.hpp"
#include "avgtorus/heat.hpp"
#include "oracle.hpp"

#include <cmath>
#include <vector>

using namespace avgtorus;

namespace {

// The piecewise definition A = A0 + R applied to basis vectors, as an
// independent route to the rate table.
Eigen::MatrixXd defect_dense_from_definition(const TorusSpec& spec) {
    const long V = spec.volume();
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(V, V);
    for (long z = 0; z < V; ++z)
        for (long w : neighbors(z, spec)) a0(z, w) += 1.0; // A0 = 2 L^RW
    for (long z = 0; z < V; ++z) a0(z, z) = -a0.row(z).sum();

    std::vector<long> units;
    std::vector<long> c(static_cast<size_t>(spec.dim), 0);
    for (int ax = 0; ax < spec.dim; ++ax)
        for (long sgn : {+1L, -1L}) {
            c[static_cast<size_t>(ax)] = sgn;
            units.push_back(canonical_index(c, spec));
            c[static_cast<size_t>(ax)] = 0;
        }

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(V, V);
    // R psi(0) = -1/2 A0 psi(0)
    r.row(0) = -0.5 * a0.row(0);
    // R psi(z) = -1/2 (psi(0) - psi(z)) + 1/4 (psi(-z) - psi(z)), |z| = 1
    for (long z : units) {
        auto cz = coords_of(z, spec);
        for (auto& q : cz) q = -q;
        long mz = canonical_index(cz, spec);
        r(z, 0) += -0.5;
        r(z, z) += 0.5;
        r(z, mz) += 0.25;
        r(z, z) += -0.25;
    }
    return a0 + r;
}

} // namespace

TEST_CASE("defect generator rate table") {
    TorusSpec s(1, 8);
    auto dg = build_defect_generator(s);
    CHECK(dg.gen.uniform_rate == 2.0);
    CHECK(dg.gen.exit[1] == doctest::Approx(1.75).epsilon(1e-15)); // 1/2 + 1/4 + 1
    CHECK(dg.gen.entry(0, 1) == 0.5);
    CHECK(dg.gen.entry(1, 0) == 0.5);
    CHECK(dg.gen.entry(1, 7) == 0.25); // rate to -z
    CHECK(dg.gen.entry(1, 2) == 1.0);
    CHECK_THROWS_AS(build_defect_generator(TorusSpec(1, 3)), std::invalid_argument);
}

TEST_CASE("defect generator equals A0 + R entrywise") {
    for (const TorusSpec& s : {TorusSpec(1, 8), TorusSpec(2, 4), TorusSpec(2, 5)}) {
        auto dg = build_defect_generator(s);
        auto dense = oracle::dense_generator(dg.gen);
        auto def = defect_dense_from_definition(s);
        CHECK((dense - def).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(dense.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("kernel_vector against the dense expm oracle") {
    TorusSpec s(1, 8);
    auto dg = build_defect_generator(s);
    auto at0 = kernel_vector(dg, 0.0);
    CHECK(at0.values[0] == 1.0);
    auto late = kernel_vector(dg, 300.0, 1e-12);
    for (double v : late.values) CHECK(v == doctest::Approx(0.125).epsilon(1e-8));

    for (double t : {0.3, 1.0, 2.5}) {
        auto kv = kernel_vector(dg, t, 1e-12);
        auto ref = oracle::expm_row(dg.gen, t, 0);
        double sum = 0.0;
        for (size_t i = 0; i < kv.values.size(); ++i) {
            CHECK(std::abs(kv.values[i] - ref[i]) < 1e-10);
            sum += kv.values[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-11); // within 10*tol
        CHECK(kv.values[1] == doctest::Approx(kv.values[7]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernel_vector(dg, 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(kernel_vector(dg, 1e6, 1e-12), CapExceededError);
}

TEST_CASE("u_exact basics and grid stepping consistency") {
    TorusSpec s(2, 4);
    auto grid = TimeGrid(0.25, 41);
    auto u = u_exact(grid, s);
    CHECK(u.values[0] == 1.0);
    auto dg = build_defect_generator(s);
    for (size_t k : {size_t(3), size_t(17), size_t(40)}) {
        auto kv = kernel_vector(dg, grid.time(k), 1e-13);
        long e = canonical_index(std::vector<long>{1, 0}, s);
        CHECK(std::abs(u.values[k] - (kv.values[0] - kv.values[static_cast<size_t>(e)])) <
              1e-11);
        CHECK(u.values[k] >= 0.0);
        CHECK(u.values[k] <= 1.0);
    }
}

TEST_CASE("f and g closed forms") {
    for (int d : {1, 2, 3}) {
        TorusSpec s(d, d < 3 ? 6 : 4);
        auto [f0, g0] = f_g_closed(0.0, s);
        CHECK(f0 == doctest::Approx(d + 0.5).epsilon(1e-12));
        CHECK(g0 == doctest::Approx(1.0).epsilon(1e-12));
    }
    TorusSpec s(1, 4);
    auto [f1, g1] = f_g_closed(1.0, s);
    CHECK(g1 == doctest::Approx((std::exp(-2.0) + std::exp(-4.0)) / 2.0).epsilon(1e-13));
    CHECK(f1 == doctest::Approx((std::exp(-2.0) + 2.0 * std::exp(-4.0)) / 2.0).epsilon(1e-13));
}

TEST_CASE("f, g positive, decreasing, with f <= (d+1/2) g") {
    for (const TorusSpec& s : {TorusSpec(1, 8), TorusSpec(2, 4), TorusSpec(2, 6)}) {
        // stay above the cancellation floor: e^{-2 lambda t} >= ~1e-12
        double horizon = std::min(24.0, 13.0 * spectral_data(s.side).t_rel);
        double pf = 1e300, pg = 1e300;
        for (double t = 0.0; t <= horizon; t += 0.125) {
            auto [f, g] = f_g_closed(t, s);
            CHECK(f > 0.0);
            CHECK(g > 0.0);
            CHECK(f <= pf + 1e-15);
            CHECK(g <= pg + 1e-15);
            CHECK(f <= (s.dim + 0.5) * g + 1e-14);
            pf = f;
            pg = g;
        }
    }
}

TEST_CASE("renewal solver") {
    TimeGrid grid(1.0 / 64.0, 1281);
    // f = 0: u = g
    {
        std::vector<double> gv(grid.count), fv(grid.count, 0.0);
        for (size_t k = 0; k < grid.count; ++k) gv[k] = std::exp(-0.3 * grid.time(k));
        auto u = renewal_solve(SampledFunction(grid, gv), SampledFunction(grid, fv));
        for (size_t k = 0; k < grid.count; ++k) CHECK(u.values[k] == gv[k]);
    }
    // g = 1, f = c: u = e^{ct}
    {
        const double c = 0.4;
        std::vector<double> gv(grid.count, 1.0), fv(grid.count, c);
        auto u = renewal_solve(SampledFunction(grid, gv), SampledFunction(grid, fv));
        for (size_t k = 0; k < grid.count; k += 64)
            CHECK(u.values[k] == doctest::Approx(std::exp(c * grid.time(k))).epsilon(1e-4));
    }
    // mismatched grids
    {
        TimeGrid other(1.0 / 32.0, 641);
        CHECK_THROWS_AS(renewal_solve(SampledFunction(grid, std::vector<double>(grid.count, 1.0)),
                                      SampledFunction(other, std::vector<double>(other.count, 0.0))),
                        std::invalid_argument);
    }
    // divergence flag: f(0) tiny but f large later makes the solution blow
    // past the f(0)-based sanity cap
    {
        TimeGrid gr(0.125, 81);
        std::vector<double> gv(gr.count, 1.0), fv(gr.count, 5.0);
        fv[0] = 0.01;
        CHECK_THROWS_AS(renewal_solve(SampledFunction(gr, gv), SampledFunction(gr, fv)),
                        std::runtime_error);
    }
}

TEST_CASE("renewal solve matches u_exact") {
    for (const TorusSpec& s : {TorusSpec(1, 8), TorusSpec(2, 4)}) {
        auto grid = TimeGrid::up_to(20.0, 1.0 / 64.0);
        auto u_num = renewal_solve(g_on_grid(grid, s), f_on_grid(grid, s));
        auto u_ref = u_exact(grid, s);
        double sup = 0.0;
        for (size_t k = 0; k < grid.count; ++k)
            sup = std::max(sup, std::abs(u_num.values[k] - u_ref.values[k]));
        CHECK(sup < 1e-4);
    }
}

TEST_CASE("series sum") {
    TimeGrid grid(1.0 / 32.0, 161);
    // constant gt: partial sums approach c e^{ct}
    {
        const double c = 0.35;
        std::vector<double> gv(grid.count, c);
        auto total = series_sum(SampledFunction(grid, gv), 400, 1e-12);
        for (size_t k = 16; k < grid.count; k += 32)
            CHECK(total.values[k] ==
                  doctest::Approx(c * std::exp(c * grid.time(k))).epsilon(1e-3));
        CHECK_THROWS_AS(series_sum(SampledFunction(grid, gv), 2, 1e-12), CapExceededError);
    }
    // ordering around u for the real inputs
    TorusSpec s(1, 8);
    auto g = g_on_grid(grid, s);
    std::vector<double> gt(g.values);
    for (auto& x : gt) x *= 1.5;
    auto series = series_sum(SampledFunction(grid, gt), 400, 1e-13);
    auto u = u_exact(grid, s);
    for (size_t k = 0; k < grid.count; ++k) {
        CHECK(g.values[k] <= u.values[k] + 1e-12);
        CHECK(u.values[k] <= series.values[k] + 1e-12);
    }
}

TEST_CASE("integral of g matches (N^d-1)/(2 d N^d)") {
    {
        TorusSpec s(1, 8);
        CHECK(g_integral(s) == doctest::Approx(7.0 / 16.0).epsilon(1e-6));
    }
    {
        TorusSpec s(2, 6);
        CHECK(g_integral(s) == doctest::Approx(35.0 / 144.0).epsilon(1e-6));
    }
}

TEST_CASE("coupled walk pair kernel") {
    TorusSpec s(1, 6);
    auto crw = build_crw_generator(s);
    const long V = 6;
    // symmetric generator, conservative rows
    auto dense = oracle::dense_generator(crw.gen);
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dense.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);

    auto at0 = crw_pair_kernel(crw, 0.0);
    CHECK(at0[0] == 1.0);

    double t = 0.7;
    auto k = crw_pair_kernel(crw, t, 1e-12);
    // exchange symmetry
    for (long a = 0; a < V; ++a)
        for (long b = 0; b < V; ++b)
            CHECK(std::abs(k[static_cast<size_t>(a * V + b)] -
                           k[static_cast<size_t>(b * V + a)]) < 1e-12);
    // marginals are the single-walk heat flow
    auto flow = heat_flow_profile(t, s);
    for (long a = 0; a < V; ++a) {
        double row = 0.0;
        for (long b = 0; b < V; ++b) row += k[static_cast<size_t>(a * V + b)];
        CHECK(row == doctest::Approx(flow[a]).epsilon(1e-9));
    }
    // difference law reproduces the defect kernel
    auto dg = build_defect_generator(s);
    auto kv = kernel_vector(dg, t, 1e-13);
    for (long z = 0; z < V; ++z) {
        double acc = 0.0;
        for (long a = 0; a < V; ++a) acc += k[static_cast<size_t>(a * V + ((a - z + V) % V))];
        CHECK(std::abs(acc - kv.values[static_cast<size_t>(z)]) < 1e-10);
    }
    // pair kernel against the dense oracle
    auto ref = oracle::expm_row(crw.gen, t, 0);
    for (size_t i = 0; i < k.size(); ++i) CHECK(std::abs(k[i] - ref[i]) < 1e-10);

    CHECK_THROWS_AS(build_crw_generator(TorusSpec(1, 101)), CapExceededError);
}

TEST_CASE("gradient identities from the pair kernel") {
    TorusSpec s(1, 8);
    auto crw = build_crw_generator(s);
    double t = 1.3;
    auto k = crw_pair_kernel(crw, t, 1e-13);
    auto grid = TimeGrid(t / 64.0, 65);
    auto u = u_exact(grid, s);
    // mean squared gradient unwinds the Dirichlet identity: 2 u(t) / N^d
    CHECK(mean_sq_gradient(k, s) ==
          doctest::Approx(2.0 * u.values.back() / 8.0).epsilon(1e-9));
    // t=0: zero for edges away from the origin, by direct entries
    auto k0 = crw_pair_kernel(crw, 0.0);
    auto val = [&](long x, long y) {
        return k0[static_cast<size_t>(x * 8 + x)] - 2.0 * k0[static_cast<size_t>(x * 8 + y)] +
               k0[static_cast<size_t>(y * 8 + y)];
    };
    CHECK(val(3, 4) == 0.0);
    CHECK(val(2, 3) == 0.0);
}
