#pragma once

#include <vector>

namespace heatcut {

// Small dense symmetric matrix (row-major), order capped by kSymEigMaxOrder.
struct SmallSymmetric {
    int order = 0;
    std::vector<double> a;  // order x order, symmetric

    static SmallSymmetric tridiagonal(const std::vector<double>& diag,
                                      const std::vector<double>& offdiag);
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * order + j]; }
    bool is_tridiagonal() const;
};

struct SymEigResult {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major; column j pairs with values[j]
    int order = 0;
    double vector_entry(int i, int j) const {
        return vectors[static_cast<std::size_t>(j) * order + i];
    }
};

inline constexpr int kSymEigMaxOrder = 1024;

// Full eigendecomposition T = Q diag(values) Q^T. Cyclic Jacobi sweeps with
// an implicit-shift QL fast path when T is exactly tridiagonal. Converges to
// off-diagonal Frobenius mass below 1e-14 * ||T||_F or throws.
SymEigResult sym_eig(const SmallSymmetric& t);

}  // namespace heatcut
