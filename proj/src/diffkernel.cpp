#include "avgtorus/diffkernel.hpp"

#include "avgtorus/stats.hpp"

#include <algorithm>
#include <cmath>

namespace avgtorus {

DefectGenerator build_defect_generator(const TorusSpec& spec) {
    if (spec.side < 4)
        throw std::invalid_argument(
            "build_defect_generator: N >= 4 required (slow-bond structure degenerates)");
    const long V = spec.volume();
    const int deg = 2 * spec.dim;
    auto tab = neighbor_table(spec);
    GeneratorBuilder b(V);

    // unit vectors and their antipodes, as flat indices
    std::vector<long> units, anti;
    {
        std::vector<long> c(static_cast<size_t>(spec.dim), 0);
        for (int ax = 0; ax < spec.dim; ++ax) {
            for (long s : {+1L, -1L}) {
                c[static_cast<size_t>(ax)] = s;
                units.push_back(canonical_index(c, spec));
                c[static_cast<size_t>(ax)] = -s;
                anti.push_back(canonical_index(c, spec));
                c[static_cast<size_t>(ax)] = 0;
            }
        }
    }

    std::vector<char> is_unit(static_cast<size_t>(V), 0);
    for (long u : units) is_unit[static_cast<size_t>(u)] = 1;

    for (long z = 0; z < V; ++z) {
        if (z == 0) {
            for (int j = 0; j < deg; ++j)
                b.add(0, tab[static_cast<size_t>(z * deg + j)], 0.5);
        } else if (is_unit[static_cast<size_t>(z)]) {
            long mz = anti[static_cast<size_t>(
                std::find(units.begin(), units.end(), z) - units.begin())];
            b.add(z, 0, 0.5);
            b.add(z, mz, 0.25);
            for (int j = 0; j < deg; ++j) {
                long w = tab[static_cast<size_t>(z * deg + j)];
                if (w != 0) b.add(z, w, 1.0);
            }
        } else {
            for (int j = 0; j < deg; ++j)
                b.add(z, tab[static_cast<size_t>(z * deg + j)], 1.0);
        }
    }
    return DefectGenerator{spec, b.build(2.0 * spec.dim)};
}

KernelVector kernel_vector(const DefectGenerator& gen, double t, double tol) {
    if (t < 0.0) throw std::invalid_argument("kernel_vector: negative time");
    std::vector<double> w0(static_cast<size_t>(gen.gen.n), 0.0);
    w0[0] = 1.0;
    auto v = evolve_distribution(gen.gen, std::move(w0), t, tol);
    return KernelVector{t, std::move(v)};
}

SampledFunction u_exact(const TimeGrid& grid, const TorusSpec& spec, double tol) {
    auto dg = build_defect_generator(spec);
    std::vector<long> e_coords(static_cast<size_t>(spec.dim), 0);
    e_coords[0] = 1;
    const auto e = static_cast<size_t>(canonical_index(e_coords, spec));
    std::vector<double> u(grid.count);
    std::vector<double> w0(static_cast<size_t>(spec.volume()), 0.0);
    w0[0] = 1.0;
    auto times = grid.times();
    evolve_distribution_grid(
        dg.gen, std::move(w0), times,
        [&](size_t k, std::span<const double> w) { u[k] = w[0] - w[e]; },
        tol / static_cast<double>(grid.count));
    return SampledFunction(grid, std::move(u));
}

std::pair<double, double> f_g_closed(double t, const TorusSpec& spec) {
    const int n = spec.side;
    const double p0 = kernel_1d(t, 0, n);
    const double p1 = kernel_1d(t, 1, n);
    const double p2 = kernel_1d(t, 2, n);
    double g = std::pow(p0, spec.dim - 1) * (p0 - p1);
    double f;
    if (spec.dim == 1) {
        f = 1.5 * p0 - 2.0 * p1 + 0.5 * p2;
    } else {
        f = std::pow(p0, spec.dim - 2) *
            (spec.dim * (p0 - p1) * (p0 - p1) +
             0.5 * (p0 * p0 - 2.0 * p1 * p1 + p0 * p2));
    }
    // both are nonnegative for N >= 4; cancellation near equilibrium can leave
    // rounding residue of either sign (same clamping convention as kernel_1d)
    for (double* v : {&f, &g}) {
        if (*v < 0.0) {
            if (*v < -1e-12) throw std::runtime_error("f_g_closed: negative beyond rounding");
            *v = 0.0;
        }
    }
    return {f, g};
}

SampledFunction g_on_grid(const TimeGrid& grid, const TorusSpec& spec) {
    std::vector<double> v(grid.count);
    for (size_t k = 0; k < grid.count; ++k) v[k] = f_g_closed(grid.time(k), spec).second;
    return SampledFunction(grid, std::move(v));
}

SampledFunction f_on_grid(const TimeGrid& grid, const TorusSpec& spec) {
    std::vector<double> v(grid.count);
    for (size_t k = 0; k < grid.count; ++k) v[k] = f_g_closed(grid.time(k), spec).first;
    return SampledFunction(grid, std::move(v));
}

SampledFunction renewal_solve(const SampledFunction& g, const SampledFunction& f) {
    if (!(g.grid == f.grid)) throw std::invalid_argument("renewal_solve: grids differ");
    for (size_t k = 0; k < g.grid.count; ++k)
        if (g.values[k] < 0.0 || f.values[k] < 0.0)
            throw std::invalid_argument("renewal_solve: f, g must be nonnegative");
    const double h = g.grid.step;
    const size_t n = g.grid.count;
    const double cap =
        10.0 * std::max(g.sup(), 1e-300) * std::exp(f.values[0] * g.grid.horizon());
    std::vector<double> u(n);
    u[0] = g.values[0];
    const double denom = 1.0 - 0.5 * h * f.values[0];
    for (size_t k = 1; k < n; ++k) {
        double s = 0.5 * u[0] * f.values[k];
        for (size_t m = 1; m < k; ++m) s += u[m] * f.values[k - m];
        u[k] = (g.values[k] + h * s) / denom;
        if (!(std::abs(u[k]) <= cap))
            throw std::runtime_error("renewal_solve: solution diverged past sanity cap");
    }
    return SampledFunction(g.grid, std::move(u));
}

SampledFunction series_sum(const SampledFunction& gt, int k_cap, double tol) {
    for (double x : gt.values)
        if (x < 0.0) throw std::invalid_argument("series_sum: gt must be nonnegative");
    SampledFunction term = gt;
    std::vector<double> total = gt.values;
    for (int k = 2;; ++k) {
        if (term.sup() < tol) break;
        if (k > k_cap)
            throw CapExceededError("series_sum: term cap reached before tolerance");
        term = convolve(term, gt);
        for (size_t i = 0; i < total.size(); ++i) total[i] += term.values[i];
    }
    return SampledFunction(gt.grid, std::move(total));
}

double g_integral(const TorusSpec& spec, double horizon, double h) {
    auto grid = TimeGrid::up_to(horizon, h);
    if (grid.count % 2 == 0) grid = TimeGrid(h, grid.count + 1);
    std::vector<double> v(grid.count);
    for (size_t k = 0; k < grid.count; ++k) v[k] = f_g_closed(grid.time(k), spec).second;
    double head = simpson(v, h);
    double t_rel = spectral_data(spec.side).t_rel;
    double tail = v.back() * t_rel / 2.0; // g(t) <= g(T) e^{-2(t-T)/t_rel} for t >= T
    return head + tail;
}

CrwGenerator build_crw_generator(const TorusSpec& spec) {
    const long V = spec.volume();
    if (V * V > 10000)
        throw CapExceededError("build_crw_generator: N^{2d} > 1e4, exact mode unavailable");
    const int deg = 2 * spec.dim;
    auto tab = neighbor_table(spec);
    GeneratorBuilder b(V * V);

    // When edge {x,y} fires, each particle on the edge flips side with
    // probability 1/2, independently. Edge id: ax*V + base for {base, base+e_ax}.
    auto other = [&](long v, long x, long y) { return v == x ? y : x; };
    std::vector<long> edge_ids;
    for (long a = 0; a < V; ++a) {
        for (long bb = 0; bb < V; ++bb) {
            const long s = a * V + bb;
            edge_ids.clear();
            for (long anchor : {a, bb}) {
                for (int ax = 0; ax < spec.dim; ++ax) {
                    edge_ids.push_back(ax * V + anchor);
                    edge_ids.push_back(ax * V + tab[static_cast<size_t>(anchor * deg + 2 * ax + 1)]);
                }
                if (bb == a) break;
            }
            std::sort(edge_ids.begin(), edge_ids.end());
            edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
            for (long id : edge_ids) {
                long x = id % V;
                int ax = static_cast<int>(id / V);
                long y = tab[static_cast<size_t>(x * deg + 2 * ax)];
                bool a_in = (a == x || a == y);
                bool b_in = (bb == x || bb == y);
                if (a_in && b_in) {
                    long fa = other(a, x, y), fb = other(bb, x, y);
                    b.add(s, fa * V + bb, 0.25);
                    b.add(s, a * V + fb, 0.25);
                    b.add(s, fa * V + fb, 0.25);
                } else if (a_in) {
                    b.add(s, other(a, x, y) * V + bb, 0.5);
                } else if (b_in) {
                    b.add(s, a * V + other(bb, x, y), 0.5);
                }
            }
        }
    }
    return CrwGenerator{spec, b.build(static_cast<double>(spec.edge_count()))};
}

std::vector<double> crw_pair_kernel(const CrwGenerator& crw, double t, double tol) {
    std::vector<double> w0(static_cast<size_t>(crw.gen.n), 0.0);
    w0[0] = 1.0; // (0,0)
    return evolve_distribution(crw.gen, std::move(w0), t, tol);
}

double max_sq_gradient(std::span<const double> pair_kernel, const TorusSpec& spec) {
    const long V = spec.volume();
    auto tab = neighbor_table(spec);
    double best = 0.0;
    for (long x = 0; x < V; ++x)
        for (int ax = 0; ax < spec.dim; ++ax) {
            long y = tab[static_cast<size_t>(x * 2 * spec.dim + 2 * ax)];
            double v = pair_kernel[static_cast<size_t>(x * V + x)] -
                       2.0 * pair_kernel[static_cast<size_t>(x * V + y)] +
                       pair_kernel[static_cast<size_t>(y * V + y)];
            best = std::max(best, v);
        }
    return best;
}

double mean_sq_gradient(std::span<const double> pair_kernel, const TorusSpec& spec) {
    const long V = spec.volume();
    auto tab = neighbor_table(spec);
    double acc = 0.0;
    long edges = 0;
    for (long x = 0; x < V; ++x)
        for (int ax = 0; ax < spec.dim; ++ax) {
            long y = tab[static_cast<size_t>(x * 2 * spec.dim + 2 * ax)];
            acc += pair_kernel[static_cast<size_t>(x * V + x)] -
                   2.0 * pair_kernel[static_cast<size_t>(x * V + y)] +
                   pair_kernel[static_cast<size_t>(y * V + y)];
            ++edges;
        }
    return acc / static_cast<double>(edges);
}

} // namespace avgtorus
