#include "heatcut/sym_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heatcut {

SmallSymmetric SmallSymmetric::tridiagonal(const std::vector<double>& diag,
                                           const std::vector<double>& offdiag) {
    const int n = static_cast<int>(diag.size());
    if (static_cast<int>(offdiag.size()) + 1 != n && !(n == 1 && offdiag.empty()))
        throw std::invalid_argument("tridiagonal: offdiag must have order-1 entries");
    SmallSymmetric t;
    t.order = n;
    t.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        t.a[static_cast<std::size_t>(i) * n + i] = diag[i];
        if (i + 1 < n) {
            t.a[static_cast<std::size_t>(i) * n + i + 1] = offdiag[i];
            t.a[static_cast<std::size_t>(i + 1) * n + i] = offdiag[i];
        }
    }
    return t;
}

bool SmallSymmetric::is_tridiagonal() const {
    for (int i = 0; i < order; ++i)
        for (int j = i + 2; j < order; ++j)
            if (at(i, j) != 0.0 || at(j, i) != 0.0) return false;
    return true;
}

namespace {

void sort_eig(SymEigResult& r) {
    const int n = r.order;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return r.values[a] < r.values[b]; });
    std::vector<double> vals(n);
    std::vector<double> vecs(r.vectors.size());
    for (int j = 0; j < n; ++j) {
        vals[j] = r.values[perm[j]];
        for (int i = 0; i < n; ++i)
            vecs[static_cast<std::size_t>(j) * n + i] =
                r.vectors[static_cast<std::size_t>(perm[j]) * n + i];
    }
    r.values = std::move(vals);
    r.vectors = std::move(vecs);
}

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Implicit-shift QL for a symmetric tridiagonal matrix; classic tql2 scheme.
SymEigResult tridiag_ql(const SmallSymmetric& t) {
    const int n = t.order;
    std::vector<double> d(n), e(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = t.at(i, i);
    for (int i = 0; i + 1 < n; ++i) e[i] = t.at(i, i + 1);

    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto zref = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter > 50) throw std::runtime_error("sym_eig: QL iteration cap exceeded");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = zref(k, i + 1);
                        zref(k, i + 1) = s * zref(k, i) + c * f;
                        zref(k, i) = c * zref(k, i) - s * f;
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    SymEigResult res;
    res.order = n;
    res.values = std::move(d);
    res.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    // z is row-major with eigenvector j in column j; re-pack column-major
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            res.vectors[static_cast<std::size_t>(j) * n + i] = z[static_cast<std::size_t>(i) * n + j];
    sort_eig(res);
    return res;
}

SymEigResult jacobi(const SmallSymmetric& t) {
    const int n = t.order;
    std::vector<double> a = t.a;
    auto aref = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto qref = [&](int i, int j) -> double& { return q[static_cast<std::size_t>(i) * n + j]; };

    double fro = 0;
    for (double v : a) fro += v * v;
    fro = std::sqrt(fro);
    const double target = 1e-14 * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2 * aref(i, j) * aref(i, j);
        if (std::sqrt(off) <= target) {
            SymEigResult res;
            res.order = n;
            res.values.resize(n);
            for (int i = 0; i < n; ++i) res.values[i] = aref(i, i);
            res.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    res.vectors[static_cast<std::size_t>(j) * n + i] = qref(i, j);
            sort_eig(res);
            return res;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apq = aref(p, r);
                if (apq == 0.0) continue;
                const double app = aref(p, p), aqq = aref(r, r);
                const double theta = (aqq - app) / (2.0 * apq);
                const double tt = (theta >= 0 ? 1.0 : -1.0) /
                                  (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double s = tt * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = aref(k, p), akq = aref(k, r);
                    aref(k, p) = c * akp - s * akq;
                    aref(k, r) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = aref(p, k), aqk = aref(r, k);
                    aref(p, k) = c * apk - s * aqk;
                    aref(r, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = qref(k, p), qkq = qref(k, r);
                    qref(k, p) = c * qkp - s * qkq;
                    qref(k, r) = s * qkp + c * qkq;
                }
            }
        }
    }
    throw std::runtime_error("sym_eig: Jacobi sweeps did not converge");
}

}  // namespace

SymEigResult sym_eig(const SmallSymmetric& t) {
    if (t.order < 1) throw std::invalid_argument("sym_eig: empty matrix");
    if (t.order > kSymEigMaxOrder) throw std::invalid_argument("sym_eig: order above cap");
    if (static_cast<int>(t.a.size()) != t.order * t.order)
        throw std::invalid_argument("sym_eig: bad storage size");
    if (t.order == 1) {
        SymEigResult r;
        r.order = 1;
        r.values = {t.a[0]};
        r.vectors = {1.0};
        return r;
    }
    if (t.is_tridiagonal()) return tridiag_ql(t);
    return jacobi(t);
}

}  // namespace heatcut
