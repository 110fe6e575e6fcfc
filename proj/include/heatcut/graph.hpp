#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heatcut/rng.hpp"

namespace heatcut {

// A cut (S, S-bar) with its cached statistics.
struct Cut {
    std::vector<int> side;    // sorted vertex ids of S
    long long vol = 0;        // vol(S)
    long long boundary = 0;   // |E(S, S-bar)|
    double conductance = 0;   // boundary / min(vol, 2m - vol)
    double balance = 0;       // min(vol, 2m - vol) / 2m
};

// Immutable simple undirected graph in CSR form (each edge stored twice).
class Graph {
public:
    // Parses whitespace-separated "u v" pairs; '#' starts a comment line.
    // Arbitrary vertex ids are compacted to 0..n-1 in order of first
    // appearance; the mapping is kept in original_ids().
    static Graph load_edge_list(std::istream& in);
    static Graph load_edge_list_file(const std::string& path);

    // Builds from 0-based edge pairs over vertices 0..n-1.
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

    // Generators. All are deterministic for a fixed seed and validate the
    // Graph invariants (simple, connected).
    static Graph clique(int n);
    static Graph path(int n);
    // Configuration model with rejection of self-loops and multi-edges;
    // resamples whole matchings on collision and re-seeds until connected.
    static Graph random_regular(int n, int d, uint64_t seed);
    // Two random d-regular halves joined by `cross` extra edges.
    static Graph planted_bisection(int n, int d, int cross, uint64_t seed);
    // K_p and K_q joined by a single bridge edge (p-1, p).
    static Graph dumbbell(int p, int q);

    int n() const { return n_; }
    long long m() const { return m_; }
    long long total_volume() const { return 2 * m_; }
    int deg(int v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const int> neighbors(int v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    const std::vector<long long>& original_ids() const { return orig_ids_; }

    // y = (D - A) x
    void laplacian_apply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> laplacian_apply(const std::vector<double>& x) const;

    // Exact statistics of a nonempty proper subset.
    Cut cut_stats(const std::vector<int>& side) const;
    Cut cut_stats(const std::vector<char>& mask) const;

    void write_edge_list(std::ostream& out) const;

private:
    Graph() = default;
    void finalize(int n, std::vector<std::pair<int, int>>&& edges, bool require_connected);
    bool connected() const;

    int n_ = 0;
    long long m_ = 0;
    std::vector<int> offsets_;
    std::vector<int> adj_;
    std::vector<long long> orig_ids_;
};

}  // namespace heatcut
