#include "heatcut/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace heatcut {

void Graph::finalize(int n, std::vector<std::pair<int, int>>&& edges, bool require_connected) {
    if (n < 2) throw std::invalid_argument("graph: need at least 2 vertices");
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop rejected");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    n_ = n;
    m_ = static_cast<long long>(edges.size());
    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adj_.assign(2 * m_, 0);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
        adj_[fill[u]++] = v;
        adj_[fill[v]++] = u;
    }
    for (int i = 0; i < n; ++i)
        std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);

    if (require_connected && !connected())
        throw std::invalid_argument("graph: not connected");
}

bool Graph::connected() const {
    if (n_ == 0) return false;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n_;
}

Graph Graph::load_edge_list(std::istream& in) {
    std::vector<std::pair<long long, long long>> raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v))
            throw std::invalid_argument("edge list: missing second endpoint on line " +
                                        std::to_string(lineno));
        long long extra;
        if (ls >> extra)
            throw std::invalid_argument("edge list: trailing tokens on line " +
                                        std::to_string(lineno));
        if (u == v)
            throw std::invalid_argument("edge list: self-loop on line " + std::to_string(lineno));
        raw.emplace_back(u, v);
    }
    if (raw.empty()) throw std::invalid_argument("edge list: no edges");

    // Order-preserving compaction: ids already equal to 0..n-1 stay put, so
    // written graphs load back unchanged.
    std::vector<long long> orig;
    orig.reserve(2 * raw.size());
    for (auto [u, v] : raw) {
        orig.push_back(u);
        orig.push_back(v);
    }
    std::sort(orig.begin(), orig.end());
    orig.erase(std::unique(orig.begin(), orig.end()), orig.end());
    std::unordered_map<long long, int> compact;
    compact.reserve(orig.size());
    for (std::size_t i = 0; i < orig.size(); ++i) compact[orig[i]] = static_cast<int>(i);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) edges.emplace_back(compact[u], compact[v]);
    Graph g;
    g.finalize(static_cast<int>(orig.size()), std::move(edges), true);
    g.orig_ids_ = std::move(orig);
    return g;
}

Graph Graph::load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return load_edge_list(in);
}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.finalize(n, std::move(edges), true);
    return g;
}

Graph Graph::clique(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return from_edges(n, std::move(edges));
}

Graph Graph::path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return from_edges(n, std::move(edges));
}

Graph Graph::random_regular(int n, int d, uint64_t seed) {
    if (d < 1 || d >= n) throw std::invalid_argument("regular: need 1 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("regular: n*d must be even");
    for (uint64_t attempt = 0; attempt < 4000; ++attempt) {
        Rng rng = Rng::stream(seed, /*tag=*/0x9e67u, attempt);
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < d; ++j) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        std::vector<std::pair<int, int>> edges;
        edges.reserve(stubs.size() / 2);
        bool ok = true;
        std::vector<std::pair<int, int>> sorted;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!ok) continue;
        sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        Graph g;
        try {
            g.finalize(n, std::move(edges), true);
        } catch (const std::invalid_argument&) {
            continue;  // disconnected sample; redraw
        }
        return g;
    }
    throw std::runtime_error("regular: sampling did not produce a simple connected graph");
}

Graph Graph::planted_bisection(int n, int d, int cross, uint64_t seed) {
    if (n % 2 != 0) throw std::invalid_argument("planted: n must be even");
    if (cross < 1) throw std::invalid_argument("planted: need at least one cross edge");
    const int h = n / 2;
    Graph left = random_regular(h, d, Rng::mix(seed, 1));
    Graph right = random_regular(h, d, Rng::mix(seed, 2));
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < h; ++v)
        for (int w : left.neighbors(v))
            if (w > v) edges.emplace_back(v, w);
    for (int v = 0; v < h; ++v)
        for (int w : right.neighbors(v))
            if (w > v) edges.emplace_back(v + h, w + h);
    Rng rng = Rng::stream(seed, /*tag=*/0x9e68u);
    std::vector<std::pair<int, int>> taken;
    while (static_cast<int>(taken.size()) < cross) {
        int u = static_cast<int>(rng.below(h));
        int v = static_cast<int>(rng.below(h)) + h;
        if (std::find(taken.begin(), taken.end(), std::make_pair(u, v)) == taken.end())
            taken.emplace_back(u, v);
    }
    edges.insert(edges.end(), taken.begin(), taken.end());
    return from_edges(n, std::move(edges));
}

Graph Graph::dumbbell(int p, int q) {
    if (p < 2 || q < 2) throw std::invalid_argument("dumbbell: both cliques need >= 2 vertices");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) edges.emplace_back(i, j);
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) edges.emplace_back(p + i, p + j);
    edges.emplace_back(p - 1, p);
    return from_edges(p + q, std::move(edges));
}

void Graph::laplacian_apply(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
        throw std::invalid_argument("laplacian_apply: dimension mismatch");
    for (int v = 0; v < n_; ++v) {
        double s = static_cast<double>(deg(v)) * x[v];
        for (int w : neighbors(v)) s -= x[w];
        y[v] = s;
    }
}

std::vector<double> Graph::laplacian_apply(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    laplacian_apply(x, y);
    return y;
}

Cut Graph::cut_stats(const std::vector<int>& side) const {
    std::vector<char> mask(n_, 0);
    for (int v : side) {
        if (v < 0 || v >= n_) throw std::invalid_argument("cut_stats: vertex out of range");
        mask[v] = 1;
    }
    return cut_stats(mask);
}

Cut Graph::cut_stats(const std::vector<char>& mask) const {
    if (static_cast<int>(mask.size()) != n_)
        throw std::invalid_argument("cut_stats: mask size mismatch");
    Cut c;
    for (int v = 0; v < n_; ++v) {
        if (!mask[v]) continue;
        c.side.push_back(v);
        c.vol += deg(v);
        for (int w : neighbors(v))
            if (!mask[w]) ++c.boundary;
    }
    if (c.side.empty() || c.vol == total_volume())
        throw std::invalid_argument("cut_stats: side must be a nonempty proper subset");
    const long long small = std::min(c.vol, total_volume() - c.vol);
    c.conductance = static_cast<double>(c.boundary) / static_cast<double>(small);
    c.balance = static_cast<double>(small) / static_cast<double>(total_volume());
    return c;
}

void Graph::write_edge_list(std::ostream& out) const {
    for (int v = 0; v < n_; ++v)
        for (int w : neighbors(v))
            if (w > v) out << v << ' ' << w << '\n';
}

}  // namespace heatcut
