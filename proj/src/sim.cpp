#include "avgtorus/sim.hpp"

#include "avgtorus/heat.hpp"

#include <algorithm>
#include <cmath>

namespace avgtorus {

namespace {

bool adjacent(long x, long y, const TorusSpec& spec) {
    auto nb = neighbors(x, spec);
    return std::find(nb.begin(), nb.end(), y) != nb.end();
}

// Chunked Monte Carlo over replicas: fill(r, slot) writes k_out doubles for
// replica r; folding happens sequentially in replica order, so the estimates
// do not depend on thread count, and buffer memory stays bounded.
std::vector<McEstimate> mc_vector_observable(
    int64_t replicas, size_t k_out, int threads,
    const std::function<void(int64_t, double*)>& fill) {
    const int64_t chunk = std::max<int64_t>(
        1, std::min<int64_t>(replicas, (1 << 22) / static_cast<int64_t>(std::max<size_t>(k_out, 1))));
    std::vector<double> buffer(static_cast<size_t>(chunk) * k_out);
    std::vector<RunningStat> stats(k_out);
    for (int64_t start = 0; start < replicas; start += chunk) {
        const int64_t n = std::min<int64_t>(chunk, replicas - start);
        parallel_for_index(n, threads, [&](int64_t i) {
            fill(start + i, &buffer[static_cast<size_t>(i) * k_out]);
        });
        for (int64_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k_out; ++j)
                stats[j].add(buffer[static_cast<size_t>(i) * k_out + j]);
    }
    std::vector<McEstimate> out(k_out);
    for (size_t j = 0; j < k_out; ++j) out[j] = to_estimate(stats[j]);
    return out;
}

// Shared trajectory driver: runs one replica, calling on_time(k, eta) at each
// requested time (ascending). eta is the raw mass vector.
template <typename Visit>
void run_replica(const std::vector<double>& xi, std::span<const double> times,
                 RngStream& rng, const TorusSpec& spec, const std::vector<long>& nbr,
                 Visit&& on_time) {
    const long V = spec.volume();
    const int deg = 2 * spec.dim;
    const auto edges = static_cast<uint64_t>(spec.edge_count());
    const double total_rate = static_cast<double>(edges);
    std::vector<double> eta = xi;
    double clock = rng.exponential(total_rate);
    for (size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        while (clock <= t) {
            uint64_t id = rng.uniform_below(edges);
            long x = static_cast<long>(id % static_cast<uint64_t>(V));
            int ax = static_cast<int>(id / static_cast<uint64_t>(V));
            long y = nbr[static_cast<size_t>(x * deg + 2 * ax)];
            double m = 0.5 * (eta[static_cast<size_t>(x)] + eta[static_cast<size_t>(y)]);
            eta[static_cast<size_t>(x)] = m;
            eta[static_cast<size_t>(y)] = m;
            clock += rng.exponential(total_rate);
        }
        on_time(k, std::span<const double>(eta));
    }
}

} // namespace

MassProfile apply_update(const MassProfile& eta, long x, long y) {
    if (!adjacent(x, y, eta.spec()))
        throw std::invalid_argument("apply_update: vertices are not nearest neighbors");
    std::vector<double> v(eta.values().begin(), eta.values().end());
    double m = 0.5 * (v[static_cast<size_t>(x)] + v[static_cast<size_t>(y)]);
    v[static_cast<size_t>(x)] = m;
    v[static_cast<size_t>(y)] = m;
    return MassProfile(std::move(v), eta.spec());
}

MassProfile simulate(const MassProfile& xi, double t, RngStream& rng, const TorusSpec& spec) {
    if (t < 0.0) throw std::invalid_argument("simulate: negative time");
    if (xi.spec() != spec) throw std::invalid_argument("simulate: profile spec mismatch");
    auto nbr = neighbor_table(spec);
    std::vector<double> xv(xi.values().begin(), xi.values().end());
    std::vector<double> out;
    const double times[1] = {t};
    run_replica(xv, times, rng, spec, nbr,
                [&](size_t, std::span<const double> eta) { out.assign(eta.begin(), eta.end()); });
    return MassProfile(std::move(out), spec);
}

std::vector<UpdateEvent> simulate_events(double t, RngStream& rng, const TorusSpec& spec) {
    if (t < 0.0) throw std::invalid_argument("simulate_events: negative time");
    const long V = spec.volume();
    const int deg = 2 * spec.dim;
    auto nbr = neighbor_table(spec);
    const auto edges = static_cast<uint64_t>(spec.edge_count());
    const double total_rate = static_cast<double>(edges);
    std::vector<UpdateEvent> out;
    double clock = rng.exponential(total_rate);
    while (clock <= t) {
        uint64_t id = rng.uniform_below(edges);
        long x = static_cast<long>(id % static_cast<uint64_t>(V));
        int ax = static_cast<int>(id / static_cast<uint64_t>(V));
        out.push_back({clock, x, nbr[static_cast<size_t>(x * deg + 2 * ax)]});
        clock += rng.exponential(total_rate);
    }
    return out;
}

static void validate_events(std::span<const UpdateEvent> events, const TorusSpec& spec) {
    double prev = 0.0;
    for (const auto& ev : events) {
        if (ev.x < 0 || ev.x >= spec.volume() || ev.y < 0 || ev.y >= spec.volume() ||
            !adjacent(ev.x, ev.y, spec))
            throw std::invalid_argument("event sequence does not match the torus spec");
        if (ev.time < prev)
            throw std::invalid_argument("event times must be nondecreasing");
        prev = ev.time;
    }
}

MassProfile apply_events(const MassProfile& xi, std::span<const UpdateEvent> events) {
    validate_events(events, xi.spec());
    std::vector<double> v(xi.values().begin(), xi.values().end());
    for (const auto& ev : events) {
        double m = 0.5 * (v[static_cast<size_t>(ev.x)] + v[static_cast<size_t>(ev.y)]);
        v[static_cast<size_t>(ev.x)] = m;
        v[static_cast<size_t>(ev.y)] = m;
    }
    return MassProfile(std::move(v), xi.spec());
}

std::vector<double> chunk_walk_empirical(std::span<const UpdateEvent> events,
                                         int64_t walkers, RngStream& rng,
                                         const TorusSpec& spec) {
    validate_events(events, spec);
    const long V = spec.volume();
    std::vector<int64_t> counts(static_cast<size_t>(V), 0);
    for (int64_t w = 0; w < walkers; ++w) {
        long pos = 0;
        for (const auto& ev : events) {
            if (pos == ev.x) {
                if (rng.coin()) pos = ev.y;
            } else if (pos == ev.y) {
                if (rng.coin()) pos = ev.x;
            }
        }
        ++counts[static_cast<size_t>(pos)];
    }
    std::vector<double> freq(static_cast<size_t>(V));
    for (long v = 0; v < V; ++v)
        freq[static_cast<size_t>(v)] =
            static_cast<double>(counts[static_cast<size_t>(v)]) / static_cast<double>(walkers);
    return freq;
}

McFunctionalsTable mc_functionals(const MassProfile& xi, std::span<const double> tgrid,
                                  int64_t replicas, uint64_t seed, const TorusSpec& spec,
                                  int threads) {
    if (replicas < 2) throw std::invalid_argument("mc_functionals: replicas must be >= 2");
    if (tgrid.empty()) throw std::invalid_argument("mc_functionals: empty time grid");
    for (size_t k = 1; k < tgrid.size(); ++k)
        if (tgrid[k] < tgrid[k - 1])
            throw std::invalid_argument("mc_functionals: time grid must be ascending");

    McFunctionalsTable table;
    table.times.assign(tgrid.begin(), tgrid.end());
    table.functionals = {Functional::L1Pow, Functional::L2Sq, Functional::Dirichlet,
                         Functional::ConcL2Sq};
    table.seed = seed;
    const size_t F = table.functionals.size();
    const size_t T = tgrid.size();
    const long V = spec.volume();
    const double Vd = static_cast<double>(V);
    auto nbr = neighbor_table(spec);
    const int deg = 2 * spec.dim;

    // heat flow at each grid time, for the concentration functional
    std::vector<std::vector<double>> flows(T);
    for (size_t k = 0; k < T; ++k) {
        auto prof = heat_flow_profile(tgrid[k], spec);
        flows[k].assign(prof.values().begin(), prof.values().end());
    }

    std::vector<double> xv(xi.values().begin(), xi.values().end());
    table.estimates = mc_vector_observable(replicas, T * F, threads, [&](int64_t r, double* slot) {
        auto rng = RngStream::for_replica(seed, static_cast<uint64_t>(r));
        run_replica(xv, tgrid, rng, spec, nbr, [&](size_t k, std::span<const double> eta) {
            double l1 = 0.0, l2 = 0.0, dir = 0.0, conc = 0.0;
            for (long v = 0; v < V; ++v) {
                double dev = Vd * eta[static_cast<size_t>(v)] - 1.0;
                l1 += std::abs(dev);
                l2 += dev * dev;
                double dc = eta[static_cast<size_t>(v)] - flows[k][static_cast<size_t>(v)];
                conc += dc * dc;
                for (int ax = 0; ax < spec.dim; ++ax) {
                    long u = nbr[static_cast<size_t>(v * deg + 2 * ax)];
                    double de = eta[static_cast<size_t>(v)] - eta[static_cast<size_t>(u)];
                    dir += de * de;
                }
            }
            slot[k * F + 0] = l1 / Vd;
            slot[k * F + 1] = l2 / Vd;
            slot[k * F + 2] = Vd * dir / 2.0; // (1/4V) * V^2 * 2 * sum_unordered
            slot[k * F + 3] = Vd * conc;
        });
    });
    return table;
}

PairMomentTable mc_pair_moments(const MassProfile& xi, double t, int64_t replicas,
                                uint64_t seed, const TorusSpec& spec, int threads) {
    const long V = spec.volume();
    auto nbr = neighbor_table(spec);
    std::vector<double> xv(xi.values().begin(), xi.values().end());
    const auto P = static_cast<size_t>(V * V);
    const double times[1] = {t};
    PairMomentTable out;
    out.volume = V;
    out.moments = mc_vector_observable(replicas, P, threads, [&](int64_t r, double* slot) {
        auto rng = RngStream::for_replica(seed, static_cast<uint64_t>(r));
        run_replica(xv, times, rng, spec, nbr, [&](size_t, std::span<const double> eta) {
            for (long x = 0; x < V; ++x)
                for (long y = 0; y < V; ++y)
                    slot[static_cast<size_t>(x * V + y)] =
                        eta[static_cast<size_t>(x)] * eta[static_cast<size_t>(y)];
        });
    });
    return out;
}

std::vector<McEstimate> mc_mean_profile(const MassProfile& xi, double t, int64_t replicas,
                                        uint64_t seed, const TorusSpec& spec, int threads) {
    const long V = spec.volume();
    auto nbr = neighbor_table(spec);
    std::vector<double> xv(xi.values().begin(), xi.values().end());
    const double times[1] = {t};
    return mc_vector_observable(replicas, static_cast<size_t>(V), threads,
                                [&](int64_t r, double* slot) {
        auto rng = RngStream::for_replica(seed, static_cast<uint64_t>(r));
        run_replica(xv, times, rng, spec, nbr, [&](size_t, std::span<const double> eta) {
            std::copy(eta.begin(), eta.end(), slot);
        });
    });
}

McEstimate mc_endpoint_scalar(const MassProfile& xi, double t, int64_t replicas,
                              uint64_t seed, const TorusSpec& spec,
                              const std::function<double(std::span<const double>)>& observable,
                              int threads) {
    auto nbr = neighbor_table(spec);
    std::vector<double> xv(xi.values().begin(), xi.values().end());
    const double times[1] = {t};
    return mc_vector_observable(replicas, 1, threads, [&](int64_t r, double* slot) {
        auto rng = RngStream::for_replica(seed, static_cast<uint64_t>(r));
        run_replica(xv, times, rng, spec, nbr, [&](size_t, std::span<const double> eta) {
            *slot = observable(eta);
        });
    })[0];
}

std::vector<McEstimate> mc_endpoint_vector(
    const MassProfile& xi, double t, int64_t replicas, uint64_t seed, const TorusSpec& spec,
    size_t k_out, const std::function<void(std::span<const double>, double*)>& fill,
    int threads) {
    auto nbr = neighbor_table(spec);
    std::vector<double> xv(xi.values().begin(), xi.values().end());
    const double times[1] = {t};
    return mc_vector_observable(replicas, k_out, threads, [&](int64_t r, double* slot) {
        auto rng = RngStream::for_replica(seed, static_cast<uint64_t>(r));
        run_replica(xv, times, rng, spec, nbr, [&](size_t, std::span<const double> eta) {
            fill(eta, slot);
        });
    });
}

} // namespace avgtorus
