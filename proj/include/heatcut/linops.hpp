#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "heatcut/rng.hpp"
#include "heatcut/vec.hpp"

namespace heatcut {

struct NormHint {
    enum class Source { exact, gershgorin, power };
    double value = 0;
    Source source = Source::gershgorin;
};

// Matrix-free symmetric operator contract. Implementations used as exponent
// arguments must be symmetric; linearity and symmetry are checked
// stochastically in the test suite.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual int dim() const = 0;
    virtual void apply(const double* x, double* y) const = 0;

    virtual std::optional<NormHint> norm_hint() const { return std::nullopt; }
    // Diagonal entries, when cheaply available (enables Jacobi preconditioning).
    virtual const std::vector<double>* diagonal() const { return nullptr; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        if (static_cast<int>(x.size()) != dim() || static_cast<int>(y.size()) != dim())
            throw std::invalid_argument("operator apply: dimension mismatch");
        apply(x.data(), y.data());
    }
    std::vector<double> operator()(const std::vector<double>& x) const {
        std::vector<double> y(dim());
        apply(x, y);
        return y;
    }
};

class DiagonalOp final : public LinearOperator {
public:
    explicit DiagonalOp(std::vector<double> d) : d_(std::move(d)) {}
    int dim() const override { return static_cast<int>(d_.size()); }
    void apply(const double* x, double* y) const override {
        for (std::size_t i = 0; i < d_.size(); ++i) y[i] = d_[i] * x[i];
    }
    std::optional<NormHint> norm_hint() const override {
        double m = 0;
        for (double v : d_) m = std::max(m, std::abs(v));
        return NormHint{m, NormHint::Source::exact};
    }
    const std::vector<double>* diagonal() const override { return &d_; }

private:
    std::vector<double> d_;
};

// Dense symmetric matrix, row-major. Used by tests, oracles and small cases.
class DenseSymOp final : public LinearOperator {
public:
    DenseSymOp(int n, std::vector<double> a) : n_(n), a_(std::move(a)) {
        if (static_cast<int>(a_.size()) != n * n)
            throw std::invalid_argument("DenseSymOp: size mismatch");
        diag_.resize(n_);
        for (int i = 0; i < n_; ++i) diag_[i] = a_[static_cast<std::size_t>(i) * n_ + i];
    }
    int dim() const override { return n_; }
    void apply(const double* x, double* y) const override {
        for (int i = 0; i < n_; ++i) {
            const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
            double s = 0;
            for (int j = 0; j < n_; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    }
    std::optional<NormHint> norm_hint() const override {
        double m = 0;
        for (int i = 0; i < n_; ++i) {
            double row = 0;
            for (int j = 0; j < n_; ++j) row += std::abs(a_[static_cast<std::size_t>(i) * n_ + j]);
            m = std::max(m, row);
        }
        return NormHint{m, NormHint::Source::gershgorin};
    }
    const std::vector<double>* diagonal() const override { return &diag_; }
    const std::vector<double>& data() const { return a_; }

private:
    int n_;
    std::vector<double> a_;
    std::vector<double> diag_;
};

// (I + A/k) for a PSD operator A.
class ShiftedOp final : public LinearOperator {
public:
    ShiftedOp(const LinearOperator& a, int k) : a_(a), k_(k) {
        if (k < 1) throw std::invalid_argument("ShiftedOp: k must be positive");
        if (const auto* d = a.diagonal()) {
            diag_.resize(d->size());
            for (std::size_t i = 0; i < d->size(); ++i) diag_[i] = 1.0 + (*d)[i] / k_;
        }
    }
    int dim() const override { return a_.dim(); }
    void apply(const double* x, double* y) const override {
        a_.apply(x, y);
        const double inv_k = 1.0 / k_;
        for (int i = 0; i < dim(); ++i) y[i] = x[i] + inv_k * y[i];
    }
    std::optional<NormHint> norm_hint() const override {
        if (auto h = a_.norm_hint()) return NormHint{1.0 + h->value / k_, h->source};
        return std::nullopt;
    }
    const std::vector<double>* diagonal() const override {
        return diag_.empty() ? nullptr : &diag_;
    }

private:
    const LinearOperator& a_;
    int k_;
    std::vector<double> diag_;
};

// Rayleigh-quotient power iteration, deterministic seed, inflated so the
// returned value is an upper bound in practice. Falls back toward the
// Gershgorin hint by capping when one is available.
inline NormHint power_norm_estimate(const LinearOperator& op, int iters = 20,
                                    uint64_t seed = 0x5eedULL) {
    Rng rng = Rng::stream(seed, 0x4e04u);
    std::vector<double> x = rng.unit_vector(op.dim());
    std::vector<double> y(op.dim());
    double rayleigh = 0;
    for (int it = 0; it < iters; ++it) {
        op.apply(x.data(), y.data());
        rayleigh = std::abs(vec::dot(x, y));
        double ny = vec::norm(y);
        if (ny == 0) return NormHint{0.0, NormHint::Source::exact};
        for (int i = 0; i < op.dim(); ++i) x[i] = y[i] / ny;
    }
    double est = rayleigh * 1.05;
    if (auto h = op.norm_hint()) {
        if (!std::isfinite(est) || est <= 0) return *h;
        est = std::min(est, h->value);
    }
    return NormHint{est, NormHint::Source::power};
}

}  // namespace heatcut
