#include "heatcut/expmv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatcut {

namespace {

constexpr double kBreakdownRel = 1e-12;

double log2d(double x) { return std::log2(x); }

// f(T) e1 for tridiagonal T given by (alpha, beta) of order k+1.
std::vector<double> tridiag_f_e1(const std::vector<double>& alpha,
                                 const std::vector<double>& beta,
                                 const std::function<double(double)>& f,
                                 double* min_ritz = nullptr) {
    const int ord = static_cast<int>(alpha.size());
    SymEigResult eig = sym_eig(SmallSymmetric::tridiagonal(
        alpha, std::vector<double>(beta.begin(), beta.begin() + (ord - 1))));
    if (min_ritz) *min_ritz = eig.values.front();
    std::vector<double> out(ord, 0.0);
    for (int j = 0; j < ord; ++j) {
        const double fj = f(eig.values[j]);
        const double q0 = eig.vector_entry(0, j);
        for (int i = 0; i < ord; ++i) out[i] += fj * q0 * eig.vector_entry(i, j);
    }
    return out;
}

}  // namespace

ExpmParams choose_params(double a_norm, double delta) {
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("choose_params: delta in (0,1]");
    if (a_norm < 0) throw std::invalid_argument("choose_params: a_norm must be >= 0");
    const double base = 8.0 / delta;
    const double k_raw = log2d(base) + 2.0 * log2d(log2d(std::max(base, 4.0)));
    ExpmParams p;
    p.k = std::max(8, static_cast<int>(std::ceil(k_raw)));
    const double k = p.k;
    const double nominal = (delta / 32.0) * std::pow(k + 1.0, -2.5) /
                           (1.0 + a_norm / k) * std::pow(2.0 * k, -(k + 1.0));
    p.eps1 = std::max(kEpsMachineGuard, nominal);
    return p;
}

KrylovFactorization lanczos_factorize(const LinearOperator& b, const std::vector<double>& v,
                                      int k) {
    const int n = b.dim();
    if (k < 0) throw std::invalid_argument("lanczos_factorize: order must be >= 0");
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("lanczos_factorize: dimension mismatch");
    const double nv = vec::norm(v);
    if (std::abs(nv - 1.0) > 1e-8)
        throw std::invalid_argument("lanczos_factorize: v must be a unit vector");
    k = std::min(k, n - 1);

    KrylovFactorization fac;
    fac.basis.reserve(static_cast<std::size_t>(n) * (k + 1));
    fac.basis.insert(fac.basis.end(), v.begin(), v.end());
    std::vector<double> prev = v;
    std::vector<double> w(n);

    b.apply(prev.data(), w.data());
    double pre_norm = vec::norm(w);  // ||w_i|| before orthogonalization
    fac.alpha.push_back(vec::dot(prev, w));
    vec::axpy(-fac.alpha[0], prev, w);
    for (int i = 1; i <= k; ++i) {
        const double nb = vec::norm(w);
        if (nb <= kBreakdownRel * std::max(pre_norm, 1e-300)) break;
        fac.beta.push_back(nb);
        std::vector<double> vi = w;
        vec::scale(1.0 / nb, vi);
        b.apply(vi.data(), w.data());
        vec::axpy(-nb, prev, w);
        pre_norm = vec::norm(w);
        const double a = vec::dot(vi, w);
        vec::axpy(-a, vi, w);
        fac.alpha.push_back(a);
        fac.basis.insert(fac.basis.end(), vi.begin(), vi.end());
        prev = std::move(vi);
    }
    fac.effective_order = static_cast<int>(fac.alpha.size()) - 1;
    return fac;
}

std::vector<double> lanczos_fv(const LinearOperator& b, const std::vector<double>& v, int k,
                               const std::function<double(double)>& f) {
    const int n = b.dim();
    KrylovFactorization fac = lanczos_factorize(b, v, k);
    std::vector<double> coef = tridiag_f_e1(fac.alpha, fac.beta, f);
    std::vector<double> u(n, 0.0);
    for (int col = 0; col <= fac.effective_order; ++col)
        for (int i = 0; i < n; ++i)
            u[i] += coef[col] * fac.basis_entry(i, col, n);
    for (double x : u)
        if (!std::isfinite(x)) throw std::runtime_error("lanczos_fv: non-finite result from f");
    return u;
}

std::vector<double> expmv_lanczos(const LinearOperator& a, const std::vector<double>& v,
                                  double delta, double c0) {
    const int n = a.dim();
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("expmv_lanczos: dimension mismatch");
    if (!(delta > 0 && delta <= 1))
        throw std::invalid_argument("expmv_lanczos: delta in (0,1]");
    const double nv = vec::norm(v);
    if (nv == 0) return std::vector<double>(n, 0.0);

    double width;
    if (auto h = a.norm_hint()) width = h->value;
    else width = power_norm_estimate(a).value;

    const double L = std::log(1.0 / delta);
    const double loglog = std::log(std::log(std::max(1.0 / delta, 3.0)));
    const double raw =
        c0 * std::sqrt(std::max(L * L, width * L)) * L * std::max(loglog, 1e-2);
    const int k_target = std::min<long long>(n - 1, static_cast<long long>(std::ceil(raw)));

    std::vector<double> v0 = v;
    vec::scale(1.0 / nv, v0);

    // incremental three-term recurrence, checkpoints on a geometric schedule
    std::vector<std::vector<double>> basis{v0};
    std::vector<double> alpha, beta;
    std::vector<double> w(n);
    a.apply(v0.data(), w.data());
    double pre_norm = vec::norm(w);
    alpha.push_back(vec::dot(v0, w));
    vec::axpy(-alpha[0], v0, w);

    std::vector<double> prev_coef;
    bool done = false;
    int next_checkpoint = std::min(8, std::max(1, k_target));
    for (int i = 1; !done; ++i) {
        bool at_order = static_cast<int>(alpha.size()) - 1 >= k_target;
        if (!at_order) {
            const double nb = vec::norm(w);
            if (nb <= kBreakdownRel * std::max(pre_norm, 1e-300)) {
                at_order = true;  // invariant subspace; result is exact there
            } else {
                beta.push_back(nb);
                std::vector<double> vi = w;
                vec::scale(1.0 / nb, vi);
                a.apply(vi.data(), w.data());
                vec::axpy(-nb, basis.back(), w);
                pre_norm = vec::norm(w);
                const double al = vec::dot(vi, w);
                vec::axpy(-al, vi, w);
                alpha.push_back(al);
                basis.push_back(std::move(vi));
            }
        }
        const int order = static_cast<int>(alpha.size()) - 1;
        if (at_order || order >= next_checkpoint) {
            double min_ritz = 0;
            std::vector<double> coef = tridiag_f_e1(
                alpha, beta, [](double x) { return std::exp(-x); }, &min_ritz);
            const double scale = std::exp(-std::max(min_ritz, 0.0));
            if (!prev_coef.empty()) {
                double diff2 = 0;
                for (std::size_t j = 0; j < coef.size(); ++j) {
                    const double p = j < prev_coef.size() ? prev_coef[j] : 0.0;
                    diff2 += (coef[j] - p) * (coef[j] - p);
                }
                if (std::sqrt(diff2) <= 0.25 * delta * scale) done = true;
            }
            prev_coef = std::move(coef);
            next_checkpoint = std::max(next_checkpoint + 2,
                                       static_cast<int>(std::ceil(next_checkpoint * 1.4)));
            if (at_order) done = true;
        }
    }

    std::vector<double> u(n, 0.0);
    for (std::size_t i = 0; i < basis.size() && i < prev_coef.size(); ++i)
        vec::axpy(prev_coef[i], basis[i], u);
    vec::scale(nv, u);
    return u;
}

std::vector<double> expmv_rational(const LinearOperator& a, const InvertFn& inv,
                                const std::vector<double>& v, double delta,
                                RationalExpmvReport* report) {
    const int n = a.dim();
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("expmv_rational: dimension mismatch");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("expmv_rational: delta in (0,1]");
    const double nv = vec::norm(v);
    if (nv == 0) return std::vector<double>(n, 0.0);

    double a_norm;
    if (auto h = a.norm_hint()) a_norm = h->value;
    else a_norm = power_norm_estimate(a).value;
    const ExpmParams params = choose_params(a_norm, delta);
    // k may exceed n; the basis loop then ends by breakdown on the invariant
    // subspace and the restriction is exact there
    const int k = params.k;

    std::vector<std::vector<double>> basis;
    {
        std::vector<double> v0 = v;
        vec::scale(1.0 / nv, v0);
        basis.push_back(std::move(v0));
    }
    const int tk = k + 1;
    std::vector<double> t(static_cast<std::size_t>(tk) * tk, 0.0);
    auto tref = [&](int i, int j) -> double& { return t[static_cast<std::size_t>(i) * tk + j]; };

    int order = k;
    for (int i = 0; i <= k; ++i) {
        std::vector<double> w = inv(basis[i], k, params.eps1);
        const double w_norm = vec::norm(w);
        // full Gram-Schmidt, done twice; second-pass corrections fold into T
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j <= i; ++j) {
                const double c = vec::dot(basis[j], w);
                tref(j, i) += c;
                vec::axpy(-c, basis[j], w);
            }
        }
        if (i == k) break;
        const double nb = vec::norm(w);
        if (nb <= kBreakdownRel * std::max(w_norm, 1e-300)) {
            order = i;  // Krylov space is invariant; approximation is exact there
            break;
        }
        tref(i + 1, i) = nb;
        vec::scale(1.0 / nb, w);
        basis.push_back(std::move(w));
    }

    const int ord = order + 1;
    SmallSymmetric that;
    that.order = ord;
    that.a.resize(static_cast<std::size_t>(ord) * ord);
    for (int i = 0; i < ord; ++i)
        for (int j = 0; j < ord; ++j)
            that.a[static_cast<std::size_t>(i) * ord + j] = 0.5 * (tref(i, j) + tref(j, i));

    SymEigResult eig = sym_eig(that);
    if (report) {
        report->k = k;
        report->eps1 = params.eps1;
        report->effective_order = order;
        report->coeff_eigenvalues = eig.values;
    }

    // certified spectral window for the symmetrized coefficients; the slack
    // floor covers inner solves running at the attainable-accuracy guard
    const double base_lo = 1.0 / (1.0 + a_norm / k);
    const double slack = std::max(params.eps1, 1e-12) * std::sqrt(static_cast<double>(ord));
    const double window_lo = base_lo - slack;
    const double window_hi = 1.0 + slack;
    const double t_floor = 0.5 * base_lo;
    std::vector<double> clamped(ord);
    for (int j = 0; j < ord; ++j) {
        double lam = eig.values[j];
        if (lam < window_lo)
            throw std::runtime_error(
                "expmv_rational: eigenvalues of the symmetrized coefficient matrix lie below the "
                "certified interval (" + std::to_string(lam) + " < " +
                std::to_string(window_lo) + ")");
        lam = std::max(lam, t_floor);
        lam = std::min(lam, window_hi);
        clamped[j] = lam;
    }

    std::vector<double> coef(ord, 0.0);
    for (int j = 0; j < ord; ++j) {
        const double fj = std::exp(k * (1.0 - 1.0 / clamped[j]));
        const double q0 = eig.vector_entry(0, j);
        for (int i = 0; i < ord; ++i) coef[i] += fj * q0 * eig.vector_entry(i, j);
    }
    std::vector<double> u(n, 0.0);
    for (int i = 0; i < ord; ++i) vec::axpy(coef[i], basis[i], u);
    vec::scale(nv, u);
    return u;
}

std::vector<double> expmv_rational_shifted(const LinearOperator& a, const std::vector<double>& v,
                                        double delta) {
    InvertFn inv = [&a](const std::vector<double>& y, int k, double eps1) {
        return invert_shifted(a, k, eps1, y);
    };
    return expmv_rational(a, inv, v, delta);
}

std::vector<double> expmv_rational_projected(const ProjectedExponent& p,
                                          const std::vector<double>& v, double delta) {
    ExponentOperator a(p);
    double a_norm;
    if (auto h = a.norm_hint()) a_norm = h->value;
    else a_norm = 1.0;
    const ExpmParams params = choose_params(a_norm, delta);
    ProjectedInverter inverter(p, params.k, params.eps1);
    InvertFn inv = [&inverter](const std::vector<double>& y, int, double) {
        return inverter.apply(y);
    };
    return expmv_rational(a, inv, v, delta);
}

std::vector<double> expmv_taylor(const LinearOperator& a, const std::vector<double>& v,
                                 double delta, int term_cap) {
    const int n = a.dim();
    if (static_cast<int>(v.size()) != n)
        throw std::invalid_argument("expmv_taylor: dimension mismatch");
    double norm;
    if (auto h = a.norm_hint()) norm = h->value;
    else throw std::invalid_argument("expmv_taylor: operator norm hint required");
    const double e2 = 7.389056098930650227;
    const long long k = static_cast<long long>(
        std::ceil(std::max(e2 * norm / 2.0, std::log(1.0 / delta)))) + 1;
    if (k > term_cap)
        throw std::invalid_argument("expmv_taylor: required terms " + std::to_string(k) +
                                    " exceed cap " + std::to_string(term_cap));
    std::vector<double> term = v, u = v, tmp(n);
    for (long long i = 1; i <= k; ++i) {
        a.apply(term.data(), tmp.data());
        for (int j = 0; j < n; ++j) term[j] = -tmp[j] / static_cast<double>(i);
        vec::axpy(1.0, term, u);
    }
    return u;
}

std::vector<double> dense_expmv(const SmallSymmetric& a, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != a.order)
        throw std::invalid_argument("dense_expmv: dimension mismatch");
    SymEigResult eig = sym_eig(a);
    const int n = a.order;
    std::vector<double> u(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double proj = 0;
        for (int i = 0; i < n; ++i) proj += eig.vector_entry(i, j) * v[i];
        const double fj = std::exp(-eig.values[j]);
        for (int i = 0; i < n; ++i) u[i] += fj * proj * eig.vector_entry(i, j);
    }
    return u;
}

SmallSymmetric dense_from_operator(const LinearOperator& a) {
    const int n = a.dim();
    SmallSymmetric m;
    m.order = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> e(n, 0.0), col(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        a.apply(e.data(), col.data());
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i) * n + j] = col[i];
    }
    // exact symmetrization kills roundoff asymmetry from the column probes
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (m.a[static_cast<std::size_t>(i) * n + j] +
                                    m.a[static_cast<std::size_t>(j) * n + i]);
            m.a[static_cast<std::size_t>(i) * n + j] = s;
            m.a[static_cast<std::size_t>(j) * n + i] = s;
        }
    return m;
}

SmallSymmetric dense_projected_exponent(const ProjectedExponent& p) {
    ExponentOperator a(p);
    return dense_from_operator(a);
}

}  // namespace heatcut
