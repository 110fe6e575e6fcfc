#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace heatcut::vec {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// y += alpha x
inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::vector<double>& x) {
    for (auto& v : x) v *= alpha;
}

inline bool finite(const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void check_finite(const std::vector<double>& x, const char* what) {
    if (!finite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace heatcut::vec
