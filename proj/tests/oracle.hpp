// Test-only oracles, kept independent of the library's uniformization path.
#pragma once

#include "avgtorus/markov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace oracle {

// Dense matrix exponential by scaling and squaring with a Taylor core.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXd b = a * scale;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-19) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Dense view of a sparse generator (off-diagonals plus the implied diagonal).
inline Eigen::MatrixXd dense_generator(const avgtorus::SparseGenerator& g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.n, g.n);
    for (long i = 0; i < g.n; ++i) {
        m(i, i) = -g.exit[static_cast<size_t>(i)];
        for (long k = g.row_ptr[static_cast<size_t>(i)]; k < g.row_ptr[static_cast<size_t>(i + 1)]; ++k)
            m(i, g.col[static_cast<size_t>(k)]) += g.rate[static_cast<size_t>(k)];
    }
    return m;
}

// Row `from` of e^{tQ} computed densely.
inline std::vector<double> expm_row(const avgtorus::SparseGenerator& g, double t, long from) {
    Eigen::MatrixXd e = expm(dense_generator(g) * t);
    std::vector<double> out(static_cast<size_t>(g.n));
    for (long j = 0; j < g.n; ++j) out[static_cast<size_t>(j)] = e(from, j);
    return out;
}

} // namespace oracle
