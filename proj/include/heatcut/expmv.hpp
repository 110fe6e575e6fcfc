#pragma once

#include <functional>
#include <vector>

#include "heatcut/linops.hpp"
#include "heatcut/solvers.hpp"
#include "heatcut/sym_eig.hpp"

namespace heatcut {

// Krylov order and inner-solve tolerance for the rational method.
struct ExpmParams {
    int k = 8;
    double eps1 = 1e-14;
};

// k = max(8, ceil(log2(8/delta) + 2 log2 log2 max(8/delta, 4))) and the
// matching inner tolerance, floored at the machine guard (the nominal value
// underflows for k beyond ~15; the floor is validated empirically by the
// acceptance suite).
ExpmParams choose_params(double a_norm, double delta);

inline constexpr double kEpsMachineGuard = 1e-14;

// Orthonormal Krylov basis with its tridiagonal restriction.
struct KrylovFactorization {
    int effective_order = 0;     // basis holds effective_order + 1 columns
    std::vector<double> basis;   // n x (effective_order+1), column-major
    std::vector<double> alpha;   // diagonal of the restriction
    std::vector<double> beta;    // off-diagonal (nonnegative by construction)
    double basis_entry(int i, int col, int n) const {
        return basis[static_cast<std::size_t>(col) * n + i];
    }
};

// Three-term recurrence (no re-orthogonalization) for symmetric B, unit v.
KrylovFactorization lanczos_factorize(const LinearOperator& b, const std::vector<double>& v,
                                      int k);

// Krylov approximation of f(B) v for symmetric B and unit v, order k. On
// breakdown the approximation from the invariant subspace found so far is
// returned, which is exact for the polynomial part.
std::vector<double> lanczos_fv(const LinearOperator& b, const std::vector<double>& v, int k,
                               const std::function<double(double)>& f);

// u with ||exp(-A) v - u|| <= delta ||exp(-A)|| ||v|| for PSD A. The order
// target follows the sqrt(max(log^2(1/delta), width * log(1/delta))) shape
// with prefactor c0; a successive-difference monitor stops early once the
// visible increment falls below delta/4 of the output scale.
std::vector<double> expmv_lanczos(const LinearOperator& a, const std::vector<double>& v,
                                  double delta, double c0 = 1.0);

// Inversion oracle contract: y, k, eps1 -> u with ||(I+A/k)^{-1} y - u|| <= eps1 ||y||.
using InvertFn =
    std::function<std::vector<double>(const std::vector<double>&, int, double)>;

struct RationalExpmvReport {
    int k = 0;
    double eps1 = 0;
    int effective_order = 0;
    std::vector<double> coeff_eigenvalues;  // spectrum of the symmetrized restriction
};

// Rational-Krylov approximation of exp(-A) v: Krylov space of (I + A/k)^{-1}
// built with inexact inversion and doubled full Gram-Schmidt, symmetrized
// coefficient matrix, f(t) = exp(k (1 - 1/t)) on its clamped spectrum.
// Guarantees ||exp(-A) v - u|| <= delta ||v||.
std::vector<double> expmv_rational(const LinearOperator& a, const InvertFn& inv,
                                const std::vector<double>& v, double delta,
                                RationalExpmvReport* report = nullptr);

// Convenience: expmv_rational with invert_shifted / invert_projected backends.
std::vector<double> expmv_rational_shifted(const LinearOperator& a, const std::vector<double>& v,
                                        double delta);
std::vector<double> expmv_rational_projected(const ProjectedExponent& p,
                                          const std::vector<double>& v, double delta);

// Truncated-series baseline; independent slow oracle for moderate ||A||.
std::vector<double> expmv_taylor(const LinearOperator& a, const std::vector<double>& v,
                                 double delta, int term_cap = 30000);

// Dense oracle: exp(-A) v through the full eigendecomposition of A.
std::vector<double> dense_expmv(const SmallSymmetric& a, const std::vector<double>& v);

// Dense assembly helpers for oracles over the factored exponent.
SmallSymmetric dense_from_operator(const LinearOperator& a);
SmallSymmetric dense_projected_exponent(const ProjectedExponent& p);

}  // namespace heatcut
