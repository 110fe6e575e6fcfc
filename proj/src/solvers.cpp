#include "heatcut/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatcut {

namespace {
constexpr double kInnerTolGuard = 1e-14;  // attainable-accuracy guard for inner solves
}

std::vector<double> cg_solve(const LinearOperator& m, const std::vector<double>& b,
                             const CgOptions& opts, CgStats* stats) {
    const int n = m.dim();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("cg_solve: dimension mismatch");
    vec::check_finite(b, "cg_solve rhs");
    if (opts.tol <= 0) throw std::invalid_argument("cg_solve: tol must be positive");

    const double nb = vec::norm(b);
    if (nb == 0) {
        if (stats) *stats = {0, 0.0};
        return std::vector<double>(n, 0.0);
    }

    // Convert the M-norm target into a residual threshold.
    double cond_slack = 1.0;
    if (opts.lambda_lo && opts.lambda_hi && *opts.lambda_lo > 0)
        cond_slack = std::sqrt(*opts.lambda_lo / *opts.lambda_hi);
    const double stop = opts.tol * nb * cond_slack;

    int max_iter = opts.max_iter;
    if (max_iter <= 0) {
        double kappa = (opts.lambda_lo && opts.lambda_hi && *opts.lambda_lo > 0)
                           ? *opts.lambda_hi / *opts.lambda_lo
                           : 1e6;
        max_iter = static_cast<int>(20 + 4.0 * std::sqrt(kappa) *
                                             std::log(1.0 / std::min(stop / nb, 0.5)));
        max_iter = std::min(std::max(max_iter, 50), 200000);
    }

    const std::vector<double>* jacobi = m.diagonal();

    std::vector<double> x(n, 0.0), r = b, z(n), p(n), ap(n);
    auto precondition = [&](const std::vector<double>& rr, std::vector<double>& zz) {
        if (jacobi) {
            for (int i = 0; i < n; ++i)
                zz[i] = (*jacobi)[i] != 0.0 ? rr[i] / (*jacobi)[i] : rr[i];
        } else {
            zz = rr;
        }
    };
    precondition(r, z);
    p = z;
    double rz = vec::dot(r, z);
    double rnorm = nb;

    int it = 0;
    for (; it < max_iter && rnorm > stop; ++it) {
        m.apply(p, ap);
        const double pap = vec::dot(p, ap);
        if (!(pap > 0))
            throw std::runtime_error("cg_solve: operator not positive definite (p^T M p = " +
                                     std::to_string(pap) + ")");
        const double alpha = rz / pap;
        vec::axpy(alpha, p, x);
        vec::axpy(-alpha, ap, r);
        rnorm = vec::norm(r);
        if (rnorm <= stop) break;
        precondition(r, z);
        const double rz_new = vec::dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (stats) *stats = {it, rnorm / nb};
    if (rnorm > stop && !opts.best_effort)
        throw std::runtime_error("cg_solve: no convergence in " + std::to_string(max_iter) +
                                 " iterations (relative residual " +
                                 std::to_string(rnorm / nb) + ")");
    return x;
}

std::vector<double> invert_shifted(const LinearOperator& a, int k, double eps1,
                                   const std::vector<double>& y) {
    if (k < 1) throw std::invalid_argument("invert_shifted: k must be positive");
    ShiftedOp shifted(a, k);
    double hi = 2.0;
    if (auto h = shifted.norm_hint()) hi = h->value;
    else hi = power_norm_estimate(shifted).value;
    CgOptions opts;
    // M = I + A/k >= I, so an eps1 M-norm error implies Euclidean error
    // <= eps1 ||y||.
    opts.tol = std::max(eps1, kInnerTolGuard);
    opts.lambda_lo = 1.0;
    opts.lambda_hi = std::max(hi, 1.0);
    return cg_solve(shifted, y, opts);
}

ProjectedExponent ProjectedExponent::from_graph(const Graph& g, const std::vector<double>& beta,
                                                double tau) {
    const int n = g.n();
    if (static_cast<int>(beta.size()) != n)
        throw std::invalid_argument("ProjectedExponent: beta size mismatch");
    if (tau < 0) throw std::invalid_argument("ProjectedExponent: tau must be nonnegative");
    const double twom = static_cast<double>(g.total_volume());
    double s = 0;
    double beta_max = 0;
    for (int i = 0; i < n; ++i) {
        if (beta[i] < 0) throw std::invalid_argument("ProjectedExponent: beta must be >= 0");
        s += beta[i] * g.deg(i);
        beta_max = std::max(beta_max, beta[i]);
    }
    s /= twom;

    std::vector<double> h(n), w(n), diag(n);
    for (int i = 0; i < n; ++i) {
        const double d = static_cast<double>(g.deg(i));
        h[i] = 1.0 / std::sqrt(d);
        w[i] = std::sqrt(d / twom);
        diag[i] = tau * d * (1.0 + s + beta[i]);
    }
    std::vector<double> beta_copy = beta;
    auto m_apply = [&g, beta_copy, s, tau, n](const double* x, double* y) {
        for (int v = 0; v < n; ++v) {
            const double d = static_cast<double>(g.deg(v));
            double acc = d * x[v];
            for (int u : g.neighbors(v)) acc -= x[u];
            acc += (s + beta_copy[v]) * d * x[v];
            y[v] = tau * acc;
        }
    };
    // ||M|| <= tau * max_d * (2 + s + max beta), while the conjugated core
    // H M H = tau (N + sI + diag(beta)) is bounded by tau (2 + s + max beta)
    // independently of the degree spread.
    double max_d = 0;
    for (int i = 0; i < n; ++i) max_d = std::max(max_d, static_cast<double>(g.deg(i)));
    const double m_bound = tau * max_d * (2.0 + s + beta_max);
    const double hmh_bound = tau * (2.0 + s + beta_max);
    return ProjectedExponent(std::move(h), std::move(w), std::move(m_apply), std::move(diag),
                             m_bound, hmh_bound);
}

ProjectedExponent::ProjectedExponent(std::vector<double> h, std::vector<double> w,
                                     std::function<void(const double*, double*)> m_apply,
                                     std::vector<double> m_diag, double m_norm_bound,
                                     double hmh_norm_bound)
    : h_(std::move(h)),
      w_(std::move(w)),
      m_apply_(std::move(m_apply)),
      m_diag_(std::move(m_diag)),
      m_norm_bound_(m_norm_bound) {
    const int n = dim();
    if (static_cast<int>(w_.size()) != n || static_cast<int>(m_diag_.size()) != n)
        throw std::invalid_argument("ProjectedExponent: size mismatch");
    double wn = 0, hmin = 1e300, hmax = 0;
    for (int i = 0; i < n; ++i) {
        if (!(h_[i] > 0)) throw std::invalid_argument("ProjectedExponent: H must be positive");
        wn += w_[i] * w_[i];
        hmin = std::min(hmin, h_[i]);
        hmax = std::max(hmax, h_[i]);
    }
    if (std::abs(wn - 1.0) > 1e-8)
        throw std::invalid_argument("ProjectedExponent: w must be a unit vector");
    a_norm_bound_ = hmh_norm_bound > 0 ? hmh_norm_bound : m_norm_bound_ * hmax * hmax;
}

void ProjectedExponent::apply_hmh(const double* x, double* y) const {
    const int n = dim();
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = h_[i] * x[i];
    std::vector<double> u(n);
    m_apply_(t.data(), u.data());
    for (int i = 0; i < n; ++i) y[i] = h_[i] * u[i];
}

void ProjectedExponent::apply_a(const double* x, double* y) const {
    const int n = dim();
    std::vector<double> p(n);
    double wx = 0;
    for (int i = 0; i < n; ++i) wx += w_[i] * x[i];
    for (int i = 0; i < n; ++i) p[i] = x[i] - wx * w_[i];
    apply_hmh(p.data(), y);
    double wy = 0;
    for (int i = 0; i < n; ++i) wy += w_[i] * y[i];
    for (int i = 0; i < n; ++i) y[i] -= wy * w_[i];
}

namespace {

// H^{-2} + M/k: the SDD core behind (I + M1) = H (H^{-2} + M/k) H.
class InnerSddOp final : public LinearOperator {
public:
    InnerSddOp(const ProjectedExponent& p, int k) : p_(p), k_(k) {
        const int n = p.dim();
        diag_.resize(n);
        for (int i = 0; i < n; ++i) {
            const double hinv2 = 1.0 / (p.h()[i] * p.h()[i]);
            diag_[i] = hinv2 + p.m_diag()[i] / k_;
        }
    }
    int dim() const override { return p_.dim(); }
    void apply(const double* x, double* y) const override {
        const int n = dim();
        p_.apply_m(x, y);
        for (int i = 0; i < n; ++i) {
            const double hinv2 = 1.0 / (p_.h()[i] * p_.h()[i]);
            y[i] = hinv2 * x[i] + y[i] / k_;
        }
    }
    const std::vector<double>* diagonal() const override { return &diag_; }

private:
    const ProjectedExponent& p_;
    int k_;
    std::vector<double> diag_;
};

}  // namespace

ProjectedInverter::ProjectedInverter(const ProjectedExponent& p, int k, double eps1)
    : p_(p), k_(k), eps1_(eps1) {
    if (k < 1) throw std::invalid_argument("invert_projected: k must be positive");
    if (!(eps1 > 0 && eps1 < 1))
        throw std::invalid_argument("invert_projected: eps1 must lie in (0,1)");

    // ||M1|| estimate: power iteration on HMH/k, inflated, capped by the
    // analytic bound. An over-estimate only tightens the inner tolerance.
    class HmhOp final : public LinearOperator {
    public:
        HmhOp(const ProjectedExponent& p, int k) : p_(p), k_(k) {}
        int dim() const override { return p_.dim(); }
        void apply(const double* x, double* y) const override {
            p_.apply_hmh(x, y);
            for (int i = 0; i < dim(); ++i) y[i] /= k_;
        }
        std::optional<NormHint> norm_hint() const override {
            return NormHint{p_.a_norm_bound() / k_, NormHint::Source::gershgorin};
        }

    private:
        const ProjectedExponent& p_;
        int k_;
    };
    HmhOp m1(p_, k_);
    m1_norm_ = power_norm_estimate(m1, 20).value;
    inner_tol_ = std::max(eps1_ / (6.0 * (1.0 + m1_norm_)), kInnerTolGuard);

    double hmin2 = 1e300, hmax2 = 0;
    for (double h : p_.h()) {
        hmin2 = std::min(hmin2, 1.0 / (h * h));
        hmax2 = std::max(hmax2, 1.0 / (h * h));
    }
    lambda_lo_ = hmin2;  // M is PSD, so H^{-2} + M/k >= H^{-2}
    lambda_hi_ = hmax2 + p_.m_norm_bound() / k_;

    beta2_ = solve_inner(p_.w());
    std::vector<double> m1b2 = apply_m1(beta2_);
    // w^T M1 (I+M1)^{-1} w lies in [0,1), so the denominator is safe
    denom_ = 1.0 - vec::dot(p_.w(), m1b2);
}

std::vector<double> ProjectedInverter::apply_m1(const std::vector<double>& x) const {
    std::vector<double> y(p_.dim());
    p_.apply_hmh(x.data(), y.data());
    for (auto& v : y) v /= k_;
    return y;
}

std::vector<double> ProjectedInverter::solve_inner(const std::vector<double>& rhs) const {
    const int n = p_.dim();
    // (I + M1)^{-1} rhs = H^{-1} (H^{-2} + M/k)^{-1} H^{-1} rhs
    std::vector<double> scaled(n);
    for (int i = 0; i < n; ++i) scaled[i] = rhs[i] / p_.h()[i];
    InnerSddOp inner(p_, k_);
    CgOptions opts;
    opts.tol = inner_tol_;
    opts.lambda_lo = lambda_lo_;
    opts.lambda_hi = lambda_hi_;
    std::vector<double> xi = cg_solve(inner, scaled, opts);
    for (int i = 0; i < n; ++i) xi[i] /= p_.h()[i];
    return xi;
}

std::vector<double> ProjectedInverter::apply(const std::vector<double>& y) const {
    const int n = p_.dim();
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("invert_projected: dimension mismatch");
    const double wy = vec::dot(p_.w(), y);
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = y[i] - wy * p_.w()[i];

    std::vector<double> beta1 = solve_inner(z);
    std::vector<double> m1b1 = apply_m1(beta1);
    const double num = vec::dot(p_.w(), m1b1);

    std::vector<double> u = beta1;
    vec::axpy(num / denom_, beta2_, u);
    vec::axpy(wy, p_.w(), u);
    return u;
}

std::vector<double> invert_projected(const ProjectedExponent& p, int k, double eps1,
                                     const std::vector<double>& y) {
    ProjectedInverter inv(p, k, eps1);
    return inv.apply(y);
}

}  // namespace heatcut
