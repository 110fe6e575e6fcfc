#include "heatcut/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heatcut {

namespace {

// Chebyshev T_k(y) by the three-term recurrence; |y| may exceed 1.
double cheb_t(int k, double y) {
    if (k == 0) return 1.0;
    double tm = 1.0, t = y;
    for (int i = 2; i <= k; ++i) {
        const double next = 2.0 * y * t - tm;
        tm = t;
        t = next;
    }
    return t;
}

// T_k and T_k' together (derivative via the U recurrence).
void cheb_t_and_deriv(int k, double y, double& t, double& dt) {
    if (k == 0) {
        t = 1.0;
        dt = 0.0;
        return;
    }
    double tm = 1.0, tc = y;      // T_0, T_1
    double um = 1.0, uc = 2.0 * y;  // U_0, U_1
    for (int i = 2; i <= k; ++i) {
        const double tn = 2.0 * y * tc - tm;
        tm = tc;
        tc = tn;
        const double un = 2.0 * y * uc - um;
        um = uc;
        uc = un;
    }
    t = tc;
    dt = static_cast<double>(k) * (k >= 2 ? um : 1.0);  // T_k' = k U_{k-1}
}

double measure_on_grid(const std::function<double(double)>& residual, double a, double b,
                       long points) {
    double worst = 0;
    for (long i = 0; i < points; ++i) {
        const double x = points == 1 ? a : a + (b - a) * static_cast<double>(i) / (points - 1);
        worst = std::max(worst, std::abs(residual(x)));
    }
    return worst;
}

}  // namespace

PolynomialApprox q_inverse(double a, double b, double eps) {
    if (!(a > 0) || !(b > a)) throw std::invalid_argument("q_inverse: need 0 < a < b");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("q_inverse: eps in (0,1)");
    const int k = static_cast<int>(std::ceil(std::sqrt(b / a) * std::log(2.0 / eps)));
    const double y0 = (b + a) / (b - a);
    const double tk1_y0 = cheb_t(k + 1, y0);

    PolynomialApprox p;
    p.a = a;
    p.b = b;
    p.degree = k;
    p.eval = [k, a, b, y0, tk1_y0](double x) {
        const double y = (b + a - 2.0 * x) / (b - a);
        if (std::abs(x) < 1e-12 * a) {
            // removable singularity: the numerator vanishes at x = 0
            double t, dt;
            cheb_t_and_deriv(k + 1, y0, t, dt);
            (void)t;
            return (2.0 / (b - a)) * dt / tk1_y0;
        }
        return (1.0 - cheb_t(k + 1, y) / tk1_y0) / x;
    };
    const auto eval = p.eval;
    p.grid_size = 100000;
    p.measured_error =
        measure_on_grid([eval](double x) { return x * eval(x) - 1.0; }, a, b, p.grid_size);
    return p;
}

PolynomialApprox q_star(double nu, double a, double b, double eps) {
    if (!(nu > 0)) throw std::invalid_argument("q_star: nu must be positive");
    if (!(a >= 0) || !(b > a)) throw std::invalid_argument("q_star: need 0 <= a < b");
    PolynomialApprox base = q_inverse(1.0 + nu * a, 1.0 + nu * b, eps);
    PolynomialApprox p;
    p.a = a;
    p.b = b;
    p.degree = base.degree;
    const auto base_eval = base.eval;
    p.eval = [base_eval, nu](double x) { return base_eval(1.0 + nu * x); };
    const auto eval = p.eval;
    p.grid_size = 100000;
    p.measured_error = measure_on_grid(
        [eval, nu](double x) { return (1.0 + nu * x) * eval(x) - 1.0; }, a, b, p.grid_size);
    return p;
}

int degree_upper_bound(double a, double b, double delta) {
    if (!(delta > 0 && delta <= 1))
        throw std::invalid_argument("degree_upper_bound: delta in (0,1]");
    if (!(b >= a)) throw std::invalid_argument("degree_upper_bound: need b >= a");
    const double L = std::log(1.0 / delta);
    const double width = b - a;
    const double inner = std::sqrt(std::max(L * L, width * L));
    const double loglog = std::log(std::log(std::max(1.0 / delta, 3.0)));
    return static_cast<int>(std::ceil(inner * L * loglog));
}

LowerBound degree_lower_bound(double a, double b, double delta) {
    LowerBound r;
    const double ln4 = 1.3862943611198906;
    if (b < a + ln4 || !(delta > 0) || delta > 0.125) return r;  // not applicable
    r.applicable = true;
    r.degree = static_cast<int>(std::ceil(0.5 * std::sqrt(b - a)));
    return r;
}

PolynomialApprox cheb_interpolate_exp(double a, double b, int d) {
    if (d < 0) throw std::invalid_argument("cheb_interpolate_exp: degree must be >= 0");
    if (b < a) throw std::invalid_argument("cheb_interpolate_exp: need b >= a");
    PolynomialApprox p;
    p.a = a;
    p.b = b;
    p.degree = d;
    if (b == a) {
        const double c = std::exp(-a);
        p.eval = [c](double) { return c; };
        p.measured_error = 0.0;
        p.grid_size = 1;
        return p;
    }
    if (a < -745.0 || std::exp(-a) == 0.0)
        throw std::invalid_argument("cheb_interpolate_exp: interval overflows exp");

    const int m = d + 1;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double pi = 3.14159265358979323846;
    // values at Chebyshev points, then the interpolant's Chebyshev coefficients
    std::vector<double> fv(m);
    for (int j = 0; j < m; ++j) {
        const double theta = (2.0 * j + 1.0) * pi / (2.0 * m);
        fv[j] = std::exp(-(mid + half * std::cos(theta)));
    }
    std::vector<double> coef(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double s = 0;
        for (int j = 0; j < m; ++j)
            s += fv[j] * std::cos(i * (2.0 * j + 1.0) * pi / (2.0 * m));
        coef[i] = 2.0 * s / m;
    }
    coef[0] *= 0.5;

    p.eval = [coef, mid, half](double x) {
        // Clenshaw on the mapped variable
        const double y = (x - mid) / half;
        double b1 = 0, b2 = 0;
        for (int i = static_cast<int>(coef.size()) - 1; i >= 1; --i) {
            const double t = 2.0 * y * b1 - b2 + coef[i];
            b2 = b1;
            b1 = t;
        }
        return y * b1 - b2 + coef[0];
    };
    const auto eval = p.eval;
    p.grid_size = 10L * m + 1000;
    const double scale = std::exp(-a);
    p.measured_error = measure_on_grid(
                           [eval](double x) { return eval(x) - std::exp(-x); }, a, b,
                           p.grid_size) /
                       scale;
    return p;
}

int minimal_degree_empirical(double a, double b, double delta, int cap) {
    if (!(b > a)) throw std::invalid_argument("minimal_degree_empirical: need b > a");
    if (!(delta > 0 && delta < 1))
        throw std::invalid_argument("minimal_degree_empirical: delta in (0,1)");
    auto smoothed = [&](int d) {
        double w[3] = {cheb_interpolate_exp(a, b, std::max(0, d - 1)).measured_error,
                       cheb_interpolate_exp(a, b, d).measured_error,
                       cheb_interpolate_exp(a, b, d + 1).measured_error};
        std::sort(w, w + 3);
        return w[1];  // median of the 3-wide window
    };
    // bracket geometrically from below, then bisect inside the bracket
    int hi = 1;
    while (smoothed(hi) > delta) {
        hi = hi * 2;
        if (hi > cap) throw std::runtime_error("minimal_degree_empirical: cap exceeded");
    }
    int lo = hi / 2;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (smoothed(mid) <= delta)
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

double lower_bound_witness(const PolynomialApprox& p, int d) {
    if (d < 0) return 0.0;
    const long points = std::max<long>(10L * (d + 1) + 1000, p.grid_size);
    // amplitude of each maximal same-sign run of the residual
    std::vector<double> amplitudes;
    int last_sign = 0;
    double run_max = 0;
    for (long i = 0; i < points; ++i) {
        const double x = p.a + (p.b - p.a) * static_cast<double>(i) / (points - 1);
        const double r = std::exp(-x) - p.eval(x);
        const int sign = r > 0 ? 1 : (r < 0 ? -1 : 0);
        if (sign == 0) continue;
        if (sign != last_sign && last_sign != 0) {
            amplitudes.push_back(run_max);
            run_max = 0;
        }
        last_sign = sign;
        run_max = std::max(run_max, std::abs(r));
    }
    if (last_sign != 0) amplitudes.push_back(run_max);

    const int need = d + 2;
    if (static_cast<int>(amplitudes.size()) < need) return 0.0;
    double best = 0;
    for (std::size_t start = 0; start + need <= amplitudes.size(); ++start) {
        double worst = amplitudes[start];
        for (int j = 1; j < need; ++j) worst = std::min(worst, amplitudes[start + j]);
        best = std::max(best, worst);
    }
    return best;
}

}  // namespace heatcut
