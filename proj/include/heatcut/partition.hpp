#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heatcut/graph.hpp"
#include "heatcut/rng.hpp"

namespace heatcut {

enum class ExpmvBackend { Rational, Lanczos };

struct SeparatorConfig {
    double alpha_factor = 48.0;   // Case-1 threshold: L.X > alpha_factor * gamma * psi fails
    double c_divisor = 100.0;     // output balance requirement c = b / c_divisor
    double jl_constant = 24.0;    // k_jl = ceil(jl_constant * ln n / eps^2), capped at n
    ExpmvBackend backend = ExpmvBackend::Rational;
    uint64_t seed = 0;
    int threads = 0;              // 0 = auto
    bool dense_oracle = false;    // record the exact potential each iteration (small n)
    double delta_floor = 1e-12;   // expmv accuracy floor; target is 1/n^3
    double c0_lanczos = 1.0;
};

// JL distortion is pinned so that (1+eps)/(1-eps) = 4/3.
inline constexpr double kJlEps = 1.0 / 7.0;

// Walk state across iterations of the outer loop.
struct WalkState {
    std::vector<double> beta;
    double tau = 0;
    int t = 1;
    std::vector<char> removed;  // union of cuts taken so far
    double gamma = 0;
    double b = 0;
};

// Low-dimensional vertex embedding: row-major, vertex i occupies
// coords[i*k .. i*k+k).
struct Embedding {
    int k = 0;
    std::vector<double> coords;
    std::vector<double> mean;    // degree-weighted mean vector
    std::vector<double> radii;   // ||v_i - mean||
    double psi = 0;              // sum_i d_i radii_i^2

    std::vector<double> vertex(int i) const {
        return {coords.begin() + static_cast<std::ptrdiff_t>(i) * k,
                coords.begin() + static_cast<std::ptrdiff_t>(i + 1) * k};
    }
};

// Sketched walk embedding at time state.tau: k_jl orthonormal directions
// (each marginally uniform on the sphere), one exponential-vector product
// per direction. Products run in parallel; assembly is sequential so the
// result is independent of thread count.
Embedding embed(const Graph& g, const WalkState& state, int k_jl, uint64_t master_seed,
                const SeparatorConfig& cfg);

// Mean, radii and potential for explicitly given coordinates (row-major,
// vertex i at coords[i*k .. i*k+k)).
Embedding assemble_embedding(const Graph& g, int k, std::vector<double> coords);

double total_deviation(const Graph& g, const Embedding& e);

// Minimum-conductance prefix cut of the score ordering (descending score,
// ties by vertex id). With a window only prefixes whose smaller-side volume
// interpretation lies inside it are eligible.
struct VolumeWindow {
    long long lo = 0, hi = 0;  // inclusive bounds on vol(prefix)
};
Cut sweep_cut(const Graph& g, const std::vector<double>& score,
              const std::optional<VolumeWindow>& window = std::nullopt);

// Projection rounding: ceil(4 ln n) random directions, sweep each within the
// balanced volume window [c 2m, (1-c) 2m], return the least-conductance cut.
Cut proj_round(const Graph& g, const Embedding& e, double c, uint64_t master_seed,
               int iteration);

struct FindCutResult {
    enum class Kind { Cut, Fail } kind = Kind::Fail;
    int case_taken = 0;  // 1 = objective too large, 2 = rounded, 3 = radius sweep
    std::optional<Cut> cut;
    std::string diagnostic;
};

FindCutResult find_cut(const Graph& g, double b, double gamma, const Embedding& e,
                       uint64_t master_seed, int iteration, const SeparatorConfig& cfg);

struct IterationRecord {
    int t = 0;
    double psi = 0;
    std::optional<double> psi_dense;
    int case_taken = 0;  // 0 = potential below threshold
    std::optional<Cut> cut;
    double cut_deviation_share = 0;  // sum_{i in cut} d_i r_i^2 / psi
    bool terminated = false;
    double millis = 0;
};

struct PartitionResult {
    enum class Kind { BalancedCut, NoCert, Fail } kind = Kind::NoCert;
    std::optional<Cut> cut;           // set for BalancedCut
    double final_psi = 0;             // last sketched potential
    std::vector<double> beta;         // final acceleration vector
    int iterations = 0;
    std::string diagnostic;           // set for Fail
    std::vector<IterationRecord> trace;
};

// The outer loop: T = ceil(12 ln n) iterations of embed / threshold test /
// find_cut / accumulate, with beta increments 72 gamma / T on each
// non-c-balanced cut.
PartitionResult balanced_separator(const Graph& g, double b, double gamma, const SeparatorConfig& cfg);

// Exact potential Tr exp(-2 tau C) - 1 for instrumentation (dense; small n).
double dense_potential(const Graph& g, const std::vector<double>& beta, double tau);

}  // namespace heatcut
