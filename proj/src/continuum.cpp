#include "avgtorus/continuum.hpp"

#include "avgtorus/heat.hpp"
#include "avgtorus/sim.hpp"

#include <cmath>
#include <numbers>

namespace avgtorus {

namespace {

constexpr double kCrossover = 1.0 / (2.0 * std::numbers::pi);

int quad_points(int dim) { return dim == 1 ? 1024 : 64; }

double frac(double u) {
    double f = u - std::floor(u);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace

double heat_kernel_1d_factor(double t, double u) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_1d_factor: t must be positive");
    u = frac(u);
    if (t >= kCrossover) {
        double acc = 1.0;
        for (int k = 1;; ++k) {
            double amp = 2.0 * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * k * k * t);
            if (amp < 1e-16) break;
            acc += amp * std::cos(2.0 * std::numbers::pi * k * u);
        }
        return acc;
    }
    // Gaussian image sum, variance t
    double acc = 0.0;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
    const int m_max = static_cast<int>(std::ceil(std::sqrt(150.0 * t))) + 1;
    for (int m = -m_max; m <= m_max; ++m) {
        double z = u + m;
        acc += norm * std::exp(-z * z / (2.0 * t));
    }
    return acc;
}

double heat_kernel_continuum(double t, std::span<const double> u) {
    double prod = 1.0;
    for (double c : u) prod *= heat_kernel_1d_factor(t, c);
    return prod;
}

namespace {

double lp_norm_on_grid(double t, double p, int dim, int m) {
    // midpoint tensor grid; the 1D factor is evaluated once per axis point
    std::vector<double> factor(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        factor[static_cast<size_t>(i)] = heat_kernel_1d_factor(t, (i + 0.5) / m);
    double acc = 0.0;
    if (dim == 1) {
        for (int i = 0; i < m; ++i)
            acc += std::pow(std::abs(factor[static_cast<size_t>(i)] - 1.0), p);
        return std::pow(acc / m, 1.0 / p);
    }
    if (dim == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                acc += std::pow(std::abs(factor[static_cast<size_t>(i)] *
                                             factor[static_cast<size_t>(j)] - 1.0), p);
        return std::pow(acc / (static_cast<double>(m) * m), 1.0 / p);
    }
    throw std::invalid_argument("lp_norm_continuum: quadrature supports d in {1,2}");
}

} // namespace

double lp_norm_continuum(double t, double p, int dim) {
    if (!(t > 0.0)) throw std::invalid_argument("lp_norm_continuum: t must be positive");
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("lp_norm_continuum: p outside [1,2]");
    const int m = quad_points(dim);
    double fine = lp_norm_on_grid(t, p, dim, m);
    double coarse = lp_norm_on_grid(t, p, dim, m / 2);
    if (std::abs(fine - coarse) > 1e-6)
        throw std::runtime_error("lp_norm_continuum: quadrature did not converge");
    return fine;
}

std::vector<LimitProfileRow> limit_profile_compare(int dim, std::span<const int> sides,
                                                   std::span<const double> diffusive_times,
                                                   double p, int64_t replicas, uint64_t seed,
                                                   int threads) {
    std::vector<LimitProfileRow> rows;
    for (int n : sides) {
        TorusSpec spec(dim, n);
        for (double t : diffusive_times) {
            const double s = t * n * n;
            LimitProfileRow row;
            row.side = n;
            row.t = t;
            row.p = p;
            row.continuum = lp_norm_continuum(t, p, dim);
            if (replicas == 0) {
                auto flow = heat_flow_profile(s, spec);
                row.discrete = lp_distance(flow, MassProfile::uniform(spec), p, spec);
                row.std_error = 0.0;
            } else {
                const double V = static_cast<double>(spec.volume());
                auto est = mc_endpoint_scalar(
                    MassProfile::dirac(spec), s, replicas, seed, spec,
                    [&](std::span<const double> eta) {
                        double acc = 0.0;
                        for (double e : eta) acc += std::pow(std::abs(V * e - 1.0), p);
                        return acc / V;
                    },
                    threads);
                row.discrete = std::pow(est.mean, 1.0 / p);
                // delta method for the p-th root
                row.std_error = est.mean > 0.0
                                    ? est.std_error * std::pow(est.mean, 1.0 / p - 1.0) / p
                                    : est.std_error;
            }
            row.discrepancy = std::abs(row.discrete - row.continuum);
            row.discrepancy_times_n = row.discrepancy * n;
            rows.push_back(row);
        }
    }
    return rows;
}

MassProfile discretize_density(const TorusField& g, const TorusSpec& spec) {
    const long V = spec.volume();
    std::vector<double> vals(static_cast<size_t>(V));
    std::vector<double> u(static_cast<size_t>(spec.dim));
    double sum = 0.0;
    for (long v = 0; v < V; ++v) {
        auto c = coords_of(v, spec);
        for (int ax = 0; ax < spec.dim; ++ax)
            u[static_cast<size_t>(ax)] =
                static_cast<double>(c[static_cast<size_t>(ax)]) / spec.side;
        double gv = g(u);
        if (gv < 0.0) throw std::invalid_argument("discretize_density: g must be nonnegative");
        vals[static_cast<size_t>(v)] = gv;
        sum += gv;
    }
    if (sum <= 0.0) throw std::invalid_argument("discretize_density: g vanishes on the lattice");
    for (double& x : vals) x /= sum;
    return MassProfile(std::move(vals), spec);
}

double heat_solution_pairing(const TorusField& g, const TorusField& psi, double t, int dim) {
    if (dim < 1 || dim > 2)
        throw std::invalid_argument("heat_solution_pairing: d in {1,2} only");
    const int m = quad_points(dim);
    std::vector<double> u(static_cast<size_t>(dim));
    if (dim == 1) {
        // h^g = theta_t (*) g by periodic convolution on the grid, then pair with psi
        std::vector<double> gv(static_cast<size_t>(m)), theta(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            u[0] = (i + 0.5) / m;
            gv[static_cast<size_t>(i)] = g(u);
            theta[static_cast<size_t>(i)] = heat_kernel_1d_factor(t, static_cast<double>(i) / m);
        }
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            double hg = 0.0;
            for (int j = 0; j < m; ++j) {
                int diff = i - j;
                if (diff < 0) diff += m;
                hg += theta[static_cast<size_t>(diff)] * gv[static_cast<size_t>(j)];
            }
            hg /= m;
            u[0] = (i + 0.5) / m;
            acc += hg * psi(u);
        }
        return acc / m;
    }
    // d = 2: separable kernel, convolve along each axis in turn
    std::vector<double> field(static_cast<size_t>(m) * m), tmp(static_cast<size_t>(m) * m);
    std::vector<double> theta(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        theta[static_cast<size_t>(i)] = heat_kernel_1d_factor(t, static_cast<double>(i) / m);
        for (int j = 0; j < m; ++j) {
            u[0] = (i + 0.5) / m;
            u[1] = (j + 0.5) / m;
            field[static_cast<size_t>(i * m + j)] = g(u);
        }
    }
    auto convolve_axis0 = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double acc = 0.0;
                for (int l = 0; l < m; ++l) {
                    int diff = i - l;
                    if (diff < 0) diff += m;
                    acc += theta[static_cast<size_t>(diff)] * in[static_cast<size_t>(l * m + j)];
                }
                out[static_cast<size_t>(i * m + j)] = acc / m;
            }
    };
    convolve_axis0(field, tmp);
    // transpose, convolve, transpose back == convolve along axis 1
    auto transpose = [&](std::vector<double>& a) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                std::swap(a[static_cast<size_t>(i * m + j)], a[static_cast<size_t>(j * m + i)]);
    };
    transpose(tmp);
    convolve_axis0(tmp, field);
    transpose(field);
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            u[0] = (i + 0.5) / m;
            u[1] = (j + 0.5) / m;
            acc += field[static_cast<size_t>(i * m + j)] * psi(u);
        }
    return acc / (static_cast<double>(m) * m);
}

std::vector<HydrodynamicRow> hydrodynamic_check(const TorusField& g, const TorusField& psi,
                                                int dim, std::span<const int> sides,
                                                std::span<const double> diffusive_times,
                                                int64_t replicas, uint64_t seed,
                                                int threads) {
    std::vector<HydrodynamicRow> rows;
    std::vector<double> u(static_cast<size_t>(dim));
    for (int n : sides) {
        TorusSpec spec(dim, n);
        auto xi = discretize_density(g, spec);
        const long V = spec.volume();
        // Psi evaluated on lattice points x/N
        std::vector<double> psi_lattice(static_cast<size_t>(V));
        for (long v = 0; v < V; ++v) {
            auto c = coords_of(v, spec);
            for (int ax = 0; ax < spec.dim; ++ax)
                u[static_cast<size_t>(ax)] =
                    static_cast<double>(c[static_cast<size_t>(ax)]) / n;
            psi_lattice[static_cast<size_t>(v)] = psi(u);
        }
        for (double t : diffusive_times) {
            double target = heat_solution_pairing(g, psi, t, dim);
            auto est = mc_endpoint_scalar(
                xi, t * n * n, replicas, seed, spec,
                [&](std::span<const double> eta) {
                    double acc = 0.0;
                    for (long v = 0; v < V; ++v)
                        acc += eta[static_cast<size_t>(v)] * psi_lattice[static_cast<size_t>(v)];
                    return std::abs(acc - target);
                },
                threads);
            rows.push_back({n, t, est.mean, est.std_error, est.mean * n});
        }
    }
    return rows;
}

} // namespace avgtorus
