#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "heatcut/graph.hpp"
#include "heatcut/linops.hpp"
#include "heatcut/rng.hpp"
#include "heatcut/sym_eig.hpp"

namespace testing {

using heatcut::Graph;
using heatcut::Rng;
using heatcut::SmallSymmetric;

// Dense n x n row-major helpers for oracles.

inline std::vector<double> dense_laplacian(const Graph& g) {
    const int n = g.n();
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int v = 0; v < n; ++v) {
        a[static_cast<std::size_t>(v) * n + v] = g.deg(v);
        for (int w : g.neighbors(v)) a[static_cast<std::size_t>(v) * n + w] = -1.0;
    }
    return a;
}

inline std::vector<double> dense_matvec(const std::vector<double>& a, int n,
                                        const std::vector<double>& x) {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += a[static_cast<std::size_t>(i) * n + j] * x[j];
    return y;
}

// Gaussian elimination with partial pivoting; independent of the library's
// iterative solvers.
inline std::vector<double> dense_solve(std::vector<double> a, int n, std::vector<double> b) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(col) * n + c],
                          a[static_cast<std::size_t>(piv) * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        if (d == 0.0) throw std::runtime_error("dense_solve: singular");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -=
                    f * a[static_cast<std::size_t>(col) * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[static_cast<std::size_t>(r) * n + c] * x[c];
        x[r] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return x;
}

// Random symmetric PSD matrix with spectrum uniform in [0, norm]: Q L Q^T
// with Q from Gram-Schmidt on Gaussian columns.
inline SmallSymmetric random_psd(int n, double norm, Rng& rng) {
    std::vector<std::vector<double>> q(n);
    for (int j = 0; j < n; ++j) {
        q[j] = rng.gaussian_vector(n);
        for (int i = 0; i < j; ++i) {
            double dot = 0;
            for (int r = 0; r < n; ++r) dot += q[i][r] * q[j][r];
            for (int r = 0; r < n; ++r) q[j][r] -= dot * q[i][r];
        }
        double nn = 0;
        for (double v : q[j]) nn += v * v;
        nn = std::sqrt(nn);
        for (double& v : q[j]) v /= nn;
    }
    std::vector<double> lam(n);
    for (int j = 0; j < n; ++j) lam[j] = norm * rng.uniform();
    lam[0] = norm;  // pin the top of the spectrum
    SmallSymmetric m;
    m.order = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                m.a[static_cast<std::size_t>(r) * n + c] += lam[j] * q[j][r] * q[j][c];
    return m;
}

inline double l2_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double l2_norm(const std::vector<double>& a) {
    double s = 0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

// Erdos-Renyi-ish connected test graph for randomized invariants.
inline Graph random_connected_graph(int n, double extra_edge_prob, Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v)
        edges.emplace_back(static_cast<int>(rng.below(v)), v);  // random spanning tree
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < extra_edge_prob) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

}  // namespace testing
