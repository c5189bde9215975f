#include "avgtorus/splitting.hpp"

#include "avgtorus/diffkernel.hpp"
#include "avgtorus/heat.hpp"
#include "avgtorus/sim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace avgtorus {

OccupancySpace::OccupancySpace(const TorusSpec& spec, int k) : spec_(spec), k_(k) {
    if (k < 1) throw std::invalid_argument("OccupancySpace: k must be >= 1");
    const long V = spec.volume();
    // occ_[c][r] = number of ways to place c particles in r cells = C(c+r-1, c)
    occ_.assign(static_cast<size_t>(k + 1), std::vector<long>(static_cast<size_t>(V + 1), 0));
    for (long r = 0; r <= V; ++r) occ_[0][static_cast<size_t>(r)] = 1;
    for (int c = 1; c <= k; ++c) {
        occ_[static_cast<size_t>(c)][0] = 0;
        for (long r = 1; r <= V; ++r) {
            long val = occ_[static_cast<size_t>(c - 1)][static_cast<size_t>(r)] +
                       occ_[static_cast<size_t>(c)][static_cast<size_t>(r - 1)];
            occ_[static_cast<size_t>(c)][static_cast<size_t>(r)] = val;
            if (val > 100000000L)
                throw CapExceededError("OccupancySpace: state space too large");
        }
    }
    count_ = occ_[static_cast<size_t>(k)][static_cast<size_t>(V)];
    if (count_ > 20000)
        throw CapExceededError("OccupancySpace: |Omega_k| exceeds the 2e4 exact-mode cap");
}

long OccupancySpace::index_of(std::span<const int> config) const {
    const long V = spec_.volume();
    if (static_cast<long>(config.size()) != V)
        throw std::invalid_argument("OccupancySpace::index_of: length mismatch");
    long idx = 0;
    int remaining = k_;
    for (long cell = 0; cell < V; ++cell) {
        int c = config[static_cast<size_t>(cell)];
        // configs that put a smaller count in this cell come first... but
        // lexicographic order on count vectors means larger first value sorts
        // later; count vectors with first entry < c precede those with c.
        for (int smaller = 0; smaller < c; ++smaller)
            idx += occ_[static_cast<size_t>(remaining - smaller)][static_cast<size_t>(V - cell - 1)];
        remaining -= c;
    }
    if (remaining != 0)
        throw std::invalid_argument("OccupancySpace::index_of: counts do not sum to k");
    return idx;
}

std::vector<int> OccupancySpace::config_of(long index) const {
    const long V = spec_.volume();
    std::vector<int> config(static_cast<size_t>(V), 0);
    int remaining = k_;
    for (long cell = 0; cell < V; ++cell) {
        int c = 0;
        while (true) {
            long block = occ_[static_cast<size_t>(remaining - c)][static_cast<size_t>(V - cell - 1)];
            if (index < block) break;
            index -= block;
            ++c;
        }
        config[static_cast<size_t>(cell)] = c;
        remaining -= c;
    }
    return config;
}

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

SplittingModel build_splitting_generator(const TorusSpec& spec, int k) {
    OccupancySpace space(spec, k);
    const long S = space.count();
    const long V = spec.volume();
    const int deg = 2 * spec.dim;
    auto tab = neighbor_table(spec);

    GeneratorBuilder b(S);
    std::vector<int> cfg;
    for (long s = 0; s < S; ++s) {
        cfg = space.config_of(s);
        for (long x = 0; x < V; ++x) {
            for (int ax = 0; ax < spec.dim; ++ax) {
                long y = tab[static_cast<size_t>(x * deg + 2 * ax)];
                int m = cfg[static_cast<size_t>(x)] + cfg[static_cast<size_t>(y)];
                if (m == 0) continue;
                // B ~ Binomial(m, 1/2) particles end up on x
                double pow2 = std::ldexp(1.0, -m);
                double binom = 1.0; // C(m, 0)
                for (int B = 0; B <= m; ++B) {
                    if (B != cfg[static_cast<size_t>(x)]) {
                        auto nxt = cfg;
                        nxt[static_cast<size_t>(x)] = B;
                        nxt[static_cast<size_t>(y)] = m - B;
                        b.add(s, space.index_of(nxt), binom * pow2);
                    }
                    binom = binom * (m - B) / (B + 1);
                }
            }
        }
    }

    SplittingModel model{std::move(space), b.build(static_cast<double>(spec.edge_count())), {}};
    // stationary: Multinomial(k, uniform)
    model.stationary.resize(static_cast<size_t>(S));
    const double logV = std::log(static_cast<double>(V));
    for (long s = 0; s < S; ++s) {
        auto c = model.space.config_of(s);
        double lg = log_factorial(k) - k * logV;
        for (int ci : c) lg -= log_factorial(ci);
        model.stationary[static_cast<size_t>(s)] = std::exp(lg);
    }
    return model;
}

std::vector<double> multinomial_pmf(const OccupancySpace& space, std::span<const double> eta) {
    const long S = space.count();
    std::vector<double> out(static_cast<size_t>(S));
    const int k = space.particles();
    for (long s = 0; s < S; ++s) {
        auto c = space.config_of(s);
        double lg = log_factorial(k);
        double prod = 1.0;
        bool zero = false;
        for (size_t x = 0; x < c.size(); ++x) {
            int ci = c[x];
            if (ci == 0) continue;
            if (eta[x] == 0.0) {
                zero = true;
                break;
            }
            lg -= log_factorial(ci);
            prod *= std::pow(eta[x], ci);
        }
        out[static_cast<size_t>(s)] = zero ? 0.0 : std::exp(lg) * prod;
    }
    return out;
}

double detailed_balance_error(const SplittingModel& model) {
    double worst = 0.0;
    const auto& g = model.gen;
    for (long i = 0; i < g.n; ++i) {
        for (long kk = g.row_ptr[static_cast<size_t>(i)]; kk < g.row_ptr[static_cast<size_t>(i + 1)]; ++kk) {
            long j = g.col[static_cast<size_t>(kk)];
            double lhs = model.stationary[static_cast<size_t>(i)] * g.rate[static_cast<size_t>(kk)];
            double rhs = model.stationary[static_cast<size_t>(j)] * g.entry(j, i);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double tv_from_start(const SplittingModel& model, std::vector<double> start, double t, double tol) {
    auto w = evolve_distribution(model.gen, std::move(start), t, tol);
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) acc += std::abs(w[i] - model.stationary[i]);
    return 0.5 * acc;
}

std::vector<double> exact_tv_curve(const SplittingModel& model, std::span<const double> tgrid,
                                   double tol) {
    const long S = model.space.count();
    std::vector<double> out(tgrid.size(), 0.0);
    for (long s = 0; s < S; ++s) {
        std::vector<double> w0(static_cast<size_t>(S), 0.0);
        w0[static_cast<size_t>(s)] = 1.0;
        evolve_distribution_grid(
            model.gen, std::move(w0), tgrid,
            [&](size_t k, std::span<const double> w) {
                double acc = 0.0;
                for (size_t i = 0; i < w.size(); ++i)
                    acc += std::abs(w[i] - model.stationary[i]);
                out[k] = std::max(out[k], 0.5 * acc);
            },
            tol / static_cast<double>(std::max<size_t>(tgrid.size(), 1)));
    }
    return out;
}

GapReport spectral_gap_check(const SplittingModel& model) {
    const long S = model.space.count();
    if (S > 2000)
        throw CapExceededError("spectral_gap_check: |Omega_k| > 2000, dense eigensolve refused");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(S, S);
    const auto& g = model.gen;
    for (long i = 0; i < S; ++i) {
        M(i, i) = g.exit[static_cast<size_t>(i)];
        double sqi = std::sqrt(model.stationary[static_cast<size_t>(i)]);
        for (long kk = g.row_ptr[static_cast<size_t>(i)]; kk < g.row_ptr[static_cast<size_t>(i + 1)]; ++kk) {
            long j = g.col[static_cast<size_t>(kk)];
            double sqj = std::sqrt(model.stationary[static_cast<size_t>(j)]);
            M(i, j) = -g.rate[static_cast<size_t>(kk)] * sqi / sqj;
        }
    }
    // detailed balance makes M symmetric up to rounding; symmetrize
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap_check: eigensolve failed");
    GapReport rep;
    rep.zero_mode = es.eigenvalues()(0);
    rep.gap = es.eigenvalues()(1);
    rep.expected = spectral_data(model.space.spec().side).gap;
    rep.error = std::abs(rep.gap - rep.expected);
    return rep;
}

IntertwiningReport intertwining_check(const MassProfile& xi, int k, double t,
                                      int64_t replicas, uint64_t seed, int threads) {
    const TorusSpec& spec = xi.spec();
    auto model = build_splitting_generator(spec, k);
    const long S = model.space.count();

    IntertwiningReport rep;
    rep.lhs = evolve_distribution(model.gen, multinomial_pmf(model.space, xi.values()), t);

    // RHS: average of Multinomial(k, eta_t) over replicas. Configurations and
    // log-multinomial coefficients are precomputed once.
    std::vector<std::vector<int>> configs(static_cast<size_t>(S));
    std::vector<double> logcoef(static_cast<size_t>(S));
    for (long s = 0; s < S; ++s) {
        configs[static_cast<size_t>(s)] = model.space.config_of(s);
        double lg = log_factorial(k);
        for (int ci : configs[static_cast<size_t>(s)]) lg -= log_factorial(ci);
        logcoef[static_cast<size_t>(s)] = lg;
    }
    rep.rhs = mc_endpoint_vector(
        xi, t, replicas, seed, spec, static_cast<size_t>(S),
        [&](std::span<const double> eta, double* slot) {
            for (long s = 0; s < S; ++s) {
                double prod = 1.0;
                const auto& c = configs[static_cast<size_t>(s)];
                for (size_t x = 0; x < c.size(); ++x)
                    for (int rep_i = 0; rep_i < c[x]; ++rep_i) prod *= eta[x];
                slot[s] = std::exp(logcoef[static_cast<size_t>(s)]) * prod;
            }
        },
        threads);
    double worst = 0.0;
    bool ok = true;
    for (long s = 0; s < S; ++s) {
        double se = rep.rhs[static_cast<size_t>(s)].std_error;
        double dev = std::abs(rep.lhs[static_cast<size_t>(s)] - rep.rhs[static_cast<size_t>(s)].mean);
        if (se == 0.0) {
            if (dev > 1e-12) ok = false;
            continue;
        }
        worst = std::max(worst, dev / se);
        if (dev > 3.0 * se) ok = false;
    }
    rep.max_sigma_deviation = worst;
    rep.pass = ok;
    return rep;
}

std::vector<CutoffPoint> cutoff_curve(const TorusSpec& spec, int k, std::span<const double> a_grid,
                                      const SplittingModel* model, double tol) {
    if (k < 2) throw std::invalid_argument("cutoff_curve: k must be >= 2");
    const auto sd = spectral_data(spec.side);
    const double logk = std::log(static_cast<double>(k));
    const double wk = std::max(1.0, logk / static_cast<double>(spec.volume()));

    // exact L2 distance of the averaging process on a grid covering max T(a)
    double tmax = 0.0;
    for (double a : a_grid) tmax = std::max(tmax, (sd.t_rel / 2.0) * (logk + a * wk));
    tmax = std::max(tmax, 1.0);
    const double h = 1.0 / 64.0;
    auto grid = TimeGrid::up_to(tmax + h, h);
    auto u = u_exact(grid, spec, tol);
    auto g = g_on_grid(grid, spec);
    auto conv = convolve(u, g);
    const double edges = static_cast<double>(spec.edge_count());

    std::vector<CutoffPoint> out;
    out.reserve(a_grid.size());
    for (double a : a_grid) {
        CutoffPoint pt;
        pt.a = a;
        double T = (sd.t_rel / 2.0) * (logk + a * wk);
        pt.clipped = T < 0.0;
        pt.time = std::max(T, 0.0);
        double l2sq = heat_l2_sq(pt.time, spec) + edges * conv.interp(pt.time);
        pt.l2_upper = std::sqrt(std::exp(1.0) * static_cast<double>(k)) *
                      std::sqrt(std::max(l2sq, 0.0));
        pt.tv_exact = std::numeric_limits<double>::quiet_NaN();
        if (model != nullptr) {
            const double tv_grid[1] = {pt.time};
            pt.tv_exact = exact_tv_curve(*model, tv_grid, tol)[0];
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace avgtorus
