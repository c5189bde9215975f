#include "avgtorus/torus.hpp"

#include <cmath>
#include <cstdlib>

namespace avgtorus {

static long wrap(long c, long n) {
    long r = c % n;
    return r < 0 ? r + n : r;
}

long canonical_index(std::span<const long> coords, const TorusSpec& spec) {
    if (static_cast<int>(coords.size()) != spec.dim)
        throw std::invalid_argument("canonical_index: coordinate count != dimension");
    long flat = 0;
    for (long c : coords) flat = flat * spec.side + wrap(c, spec.side);
    return flat;
}

std::vector<long> coords_of(long v, const TorusSpec& spec) {
    std::vector<long> c(static_cast<size_t>(spec.dim));
    for (int ax = spec.dim - 1; ax >= 0; --ax) {
        c[static_cast<size_t>(ax)] = v % spec.side;
        v /= spec.side;
    }
    return c;
}

std::vector<long> neighbors(long v, const TorusSpec& spec) {
    std::vector<long> out;
    out.reserve(static_cast<size_t>(2 * spec.dim));
    auto c = coords_of(v, spec);
    for (int ax = 0; ax < spec.dim; ++ax) {
        long orig = c[static_cast<size_t>(ax)];
        for (long step : {+1L, -1L}) {
            c[static_cast<size_t>(ax)] = wrap(orig + step, spec.side);
            out.push_back(canonical_index(c, spec));
        }
        c[static_cast<size_t>(ax)] = orig;
    }
    return out;
}

std::vector<long> neighbor_table(const TorusSpec& spec) {
    const long V = spec.volume();
    std::vector<long> tab(static_cast<size_t>(V * 2 * spec.dim));
    // strides: axis ax has stride side^(dim-1-ax) in row-major order
    std::vector<long> stride(static_cast<size_t>(spec.dim), 1);
    for (int ax = spec.dim - 2; ax >= 0; --ax)
        stride[static_cast<size_t>(ax)] = stride[static_cast<size_t>(ax + 1)] * spec.side;
    for (long v = 0; v < V; ++v) {
        for (int ax = 0; ax < spec.dim; ++ax) {
            long s = stride[static_cast<size_t>(ax)];
            long coord = (v / s) % spec.side;
            long up = (coord + 1 == spec.side) ? v - (spec.side - 1) * s : v + s;
            long dn = (coord == 0) ? v + (spec.side - 1) * s : v - s;
            tab[static_cast<size_t>(v * 2 * spec.dim + 2 * ax)] = up;
            tab[static_cast<size_t>(v * 2 * spec.dim + 2 * ax + 1)] = dn;
        }
    }
    return tab;
}

MassProfile::MassProfile(std::vector<double> values, const TorusSpec& spec)
    : spec_(spec), values_(std::move(values)) {
    if (static_cast<long>(values_.size()) != spec.volume())
        throw std::invalid_argument("MassProfile: length != N^d");
    double sum = 0.0;
    for (double x : values_) {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("MassProfile: entry outside [0,1]");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("MassProfile: total mass differs from 1 by more than 1e-9");
}

MassProfile MassProfile::dirac(const TorusSpec& spec, long vertex) {
    std::vector<double> v(static_cast<size_t>(spec.volume()), 0.0);
    v.at(static_cast<size_t>(vertex)) = 1.0;
    return MassProfile(std::move(v), spec);
}

MassProfile MassProfile::uniform(const TorusSpec& spec) {
    std::vector<double> v(static_cast<size_t>(spec.volume()),
                          1.0 / static_cast<double>(spec.volume()));
    return MassProfile(std::move(v), spec);
}

double lp_distance(const MassProfile& eta, const MassProfile& rho, double p,
                   const TorusSpec& spec) {
    if (!(p >= 1.0 && p <= 2.0))
        throw std::invalid_argument("lp_distance: p outside [1,2]");
    if (eta.spec() != spec || rho.spec() != spec)
        throw std::invalid_argument("lp_distance: profile spec mismatch");
    const double V = static_cast<double>(spec.volume());
    double acc = 0.0;
    auto a = eta.values(), b = rho.values();
    if (p == 1.0) {
        for (size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
        return acc; // (1/V) * sum |V (a-b)| = sum |a-b|
    }
    if (p == 2.0) {
        for (size_t i = 0; i < a.size(); ++i) {
            double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(V * acc);
    }
    for (size_t i = 0; i < a.size(); ++i)
        acc += std::pow(std::abs(V * (a[i] - b[i])), p);
    return std::pow(acc / V, 1.0 / p);
}

double dirichlet_form(std::span<const double> psi, const TorusSpec& spec) {
    const long V = spec.volume();
    if (static_cast<long>(psi.size()) != V)
        throw std::invalid_argument("dirichlet_form: length != N^d");
    auto tab = neighbor_table(spec);
    double acc = 0.0;
    for (long v = 0; v < V; ++v) {
        for (int ax = 0; ax < spec.dim; ++ax) {
            long u = tab[static_cast<size_t>(v * 2 * spec.dim + 2 * ax)];
            double d = psi[static_cast<size_t>(v)] - psi[static_cast<size_t>(u)];
            acc += d * d; // each unordered edge once; double sum counts it twice
        }
    }
    return 2.0 * acc / (4.0 * static_cast<double>(V));
}

DirichletTracker::DirichletTracker(std::span<const double> eta, const TorusSpec& spec)
    : spec_(spec), nbr_(neighbor_table(spec)), pair_sum_(0.0) {
    const long V = spec.volume();
    for (long v = 0; v < V; ++v)
        for (int ax = 0; ax < spec.dim; ++ax) {
            long u = nbr_[static_cast<size_t>(v * 2 * spec.dim + 2 * ax)];
            double d = eta[static_cast<size_t>(v)] - eta[static_cast<size_t>(u)];
            pair_sum_ += 2.0 * d * d;
        }
}

void DirichletTracker::apply_update(std::span<double> eta, long x, long y) {
    const int deg = 2 * spec_.dim;
    auto edge_sum_at = [&](long v) {
        double s = 0.0;
        for (int j = 0; j < deg; ++j) {
            long u = nbr_[static_cast<size_t>(v * deg + j)];
            double d = eta[static_cast<size_t>(v)] - eta[static_cast<size_t>(u)];
            s += d * d;
        }
        return s;
    };
    // ordered pairs touching {x,y}: 2*(edge_sum(x)+edge_sum(y)) counts the
    // pair (x,y)+(y,x) twice, subtract one copy
    double dxy = eta[static_cast<size_t>(x)] - eta[static_cast<size_t>(y)];
    double before = 2.0 * (edge_sum_at(x) + edge_sum_at(y)) - 2.0 * dxy * dxy;
    double m = 0.5 * (eta[static_cast<size_t>(x)] + eta[static_cast<size_t>(y)]);
    eta[static_cast<size_t>(x)] = m;
    eta[static_cast<size_t>(y)] = m;
    double after = 2.0 * (edge_sum_at(x) + edge_sum_at(y)); // (x,y) term is now 0
    pair_sum_ += after - before;
}

double DirichletTracker::dirichlet() const {
    // psi = V * eta, E(psi) = (1/4V) * V^2 * pair_sum
    const double V = static_cast<double>(spec_.volume());
    return V * pair_sum_ / 4.0;
}

} // namespace avgtorus
