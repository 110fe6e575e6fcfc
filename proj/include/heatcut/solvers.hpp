#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "heatcut/graph.hpp"
#include "heatcut/linops.hpp"

namespace heatcut {

struct CgOptions {
    double tol = 1e-10;   // relative error in the M-norm
    int max_iter = 0;     // 0 = choose from the condition bound
    // Spectral bounds of M, when known; they certify the M-norm stopping
    // rule via ||e||_M <= ||r|| / sqrt(lambda_lo) and
    // ||x||_M >= ||b|| / sqrt(lambda_hi).
    std::optional<double> lambda_lo;
    std::optional<double> lambda_hi;
    // Return the iterate at max_iter instead of throwing (instrumentation).
    bool best_effort = false;
};

struct CgStats {
    int iterations = 0;
    double rel_residual = 0;  // ||r|| / ||b||
};

// Conjugate gradient with optional Jacobi preconditioning (used whenever the
// operator exposes its diagonal). Returns u with
// ||u - M^{-1} b||_M <= tol * ||M^{-1} b||_M, or throws on non-convergence.
std::vector<double> cg_solve(const LinearOperator& m, const std::vector<double>& b,
                             const CgOptions& opts, CgStats* stats = nullptr);

// u with ||(I + A/k)^{-1} y - u|| <= eps1 ||y||, for PSD A.
std::vector<double> invert_shifted(const LinearOperator& a, int k, double eps1,
                                   const std::vector<double>& y);

// Exponent of the accelerated walk in factored form: A = Pi H M H Pi with
// H = D^{-1/2}, M = tau (L + s D + diag(beta_i d_i)), s = sum_i beta_i d_i / 2m,
// and Pi = I - w w^T for w = D^{1/2} 1 / sqrt(2m).
class ProjectedExponent {
public:
    static ProjectedExponent from_graph(const Graph& g, const std::vector<double>& beta,
                                        double tau);
    // Raw form for tests and non-graph uses: M given as a callback plus its
    // diagonal and an upper bound on ||M||. A tighter bound on ||H M H|| can
    // be supplied when known; otherwise ||M|| max(h)^2 is used.
    ProjectedExponent(std::vector<double> h, std::vector<double> w,
                      std::function<void(const double*, double*)> m_apply,
                      std::vector<double> m_diag, double m_norm_bound,
                      double hmh_norm_bound = -1.0);

    int dim() const { return static_cast<int>(h_.size()); }
    const std::vector<double>& h() const { return h_; }
    const std::vector<double>& w() const { return w_; }
    const std::vector<double>& m_diag() const { return m_diag_; }
    double m_norm_bound() const { return m_norm_bound_; }

    void apply_m(const double* x, double* y) const { m_apply_(x, y); }
    // y = H M H x
    void apply_hmh(const double* x, double* y) const;
    // y = Pi H M H Pi x
    void apply_a(const double* x, double* y) const;
    // Upper bound on ||Pi H M H Pi|| (= ||H M H|| bound scaled by H).
    double a_norm_bound() const { return a_norm_bound_; }

private:
    std::vector<double> h_, w_;
    std::function<void(const double*, double*)> m_apply_;
    std::vector<double> m_diag_;
    double m_norm_bound_ = 0;
    double a_norm_bound_ = 0;
};

// LinearOperator view of Pi H M H Pi (thread-safe; per-call scratch).
class ExponentOperator final : public LinearOperator {
public:
    explicit ExponentOperator(const ProjectedExponent& p) : p_(p) {}
    int dim() const override { return p_.dim(); }
    void apply(const double* x, double* y) const override { p_.apply_a(x, y); }
    std::optional<NormHint> norm_hint() const override {
        return NormHint{p_.a_norm_bound(), NormHint::Source::gershgorin};
    }

private:
    const ProjectedExponent& p_;
};

// Inverter for (I + (1/k) Pi H M H Pi). Splits off the w-component, solves
// the two inner systems (I + M1) beta = {z, w} through the H-conjugated
// form H (H^{-2} + M/k) H with preconditioned CG, and recombines with the
// Sherman-Morrison expression. The w-system solution is cached at
// construction, so instances are immutable and shareable across threads.
class ProjectedInverter {
public:
    ProjectedInverter(const ProjectedExponent& p, int k, double eps1);

    std::vector<double> apply(const std::vector<double>& y) const;
    double m1_norm() const { return m1_norm_; }
    double inner_tol() const { return inner_tol_; }

private:
    std::vector<double> solve_inner(const std::vector<double>& rhs) const;
    std::vector<double> apply_m1(const std::vector<double>& x) const;

    const ProjectedExponent& p_;
    int k_;
    double eps1_;
    double m1_norm_ = 0;
    double inner_tol_ = 0;
    double lambda_lo_ = 0, lambda_hi_ = 0;
    std::vector<double> inner_diag_;
    std::vector<double> beta2_;      // cached solve for rhs = w
    double denom_ = 1.0;             // 1 + w^T M1 beta2
};

// One-shot form of the above.
std::vector<double> invert_projected(const ProjectedExponent& p, int k, double eps1,
                                     const std::vector<double>& y);

}  // namespace heatcut
