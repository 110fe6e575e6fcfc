#pragma once

#include <functional>
#include <vector>

namespace heatcut {

// An evaluable polynomial on an interval together with its measured
// uniform residual on a recorded validation grid.
struct PolynomialApprox {
    double a = 0, b = 0;
    int degree = 0;
    std::function<double(double)> eval;
    double measured_error = 0;  // sup-norm residual on the grid
    long grid_size = 0;
};

// Chebyshev-based polynomial q with sup_{x in [a,b]} |x q(x) - 1| <= eps and
// degree exactly ceil(sqrt(b/a) ln(2/eps)). measured_error holds the grid
// value of |x q(x) - 1|.
PolynomialApprox q_inverse(double a, double b, double eps);

// q*(x) = q_inverse(1+nu a, 1+nu b, eps)(1+nu x);
// sup |(1+nu x) q*(x) - 1| <= eps on [a,b].
PolynomialApprox q_star(double nu, double a, double b, double eps);

// Scaling guides for the degree needed to approximate exp(-x) on [a,b] to a
// relative error delta (relative to exp(-a)); all hidden constants set to 1.
int degree_upper_bound(double a, double b, double delta);

struct LowerBound {
    int degree = 0;
    bool applicable = false;  // requires b >= a + ln 4 and delta <= 1/8
};
LowerBound degree_lower_bound(double a, double b, double delta);

// Degree-d Chebyshev interpolant of exp(-x) on [a,b]; measured_error is the
// grid sup-residual relative to exp(-a), on a 10(d+1)+1000 point grid.
PolynomialApprox cheb_interpolate_exp(double a, double b, int d);

// Smallest degree whose interpolant meets the relative target delta.
// Residuals are smoothed over a 3-wide degree window before the search to
// absorb non-monotone dips.
int minimal_degree_empirical(double a, double b, double delta, int cap = 2000);

// de la Vallee Poussin certificate: if the residual exp(-x) - p(x)
// alternates in sign on >= d+2 grid segments, returns the best min-amplitude
// over a (d+2)-segment window, a lower bound on the degree-d minimax error.
// Returns 0 when no alternation set exists.
double lower_bound_witness(const PolynomialApprox& p, int d);

}  // namespace heatcut
