#include "heatcut/partition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "heatcut/expmv.hpp"
#include "heatcut/parallel.hpp"
#include "heatcut/solvers.hpp"
#include "heatcut/vec.hpp"

namespace heatcut {

namespace {

constexpr uint64_t kTagJl = 0x6a6cULL;
constexpr uint64_t kTagRound = 0x7072ULL;

// k_jl orthonormal rows, each marginally uniform on the unit sphere.
// Gaussian draws then modified Gram-Schmidt in a fixed order.
std::vector<std::vector<double>> jl_directions(int k_jl, int n, uint64_t master_seed,
                                               int iteration) {
    std::vector<std::vector<double>> u(k_jl);
    for (int j = 0; j < k_jl; ++j) {
        Rng rng = Rng::stream(Rng::mix(master_seed, iteration), kTagJl, j);
        u[j] = rng.gaussian_vector(n);
    }
    for (int j = 0; j < k_jl; ++j) {
        for (int i = 0; i < j; ++i) vec::axpy(-vec::dot(u[i], u[j]), u[i], u[j]);
        double norm = vec::norm(u[j]);
        if (norm < 1e-12) {  // regenerate a degenerate direction deterministically
            Rng rng = Rng::stream(Rng::mix(master_seed, iteration), kTagJl + 1, j);
            u[j] = rng.gaussian_vector(n);
            for (int i = 0; i < j; ++i) vec::axpy(-vec::dot(u[i], u[j]), u[i], u[j]);
            norm = vec::norm(u[j]);
        }
        vec::scale(1.0 / norm, u[j]);
    }
    return u;
}

struct SweepEntry {
    int vertex;
    long long vol;        // vol of the prefix ending here
    long long boundary;   // boundary of that prefix
};

// Prefix statistics of the descending-score order in O(m + n log n).
std::vector<SweepEntry> sweep_prefixes(const Graph& g, const std::vector<double>& score) {
    const int n = g.n();
    if (static_cast<int>(score.size()) != n)
        throw std::invalid_argument("sweep_cut: score size mismatch");
    for (double s : score)
        if (!std::isfinite(s)) throw std::invalid_argument("sweep_cut: non-finite score");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    std::vector<char> inside(n, 0);
    std::vector<SweepEntry> prefixes;
    prefixes.reserve(n);
    long long vol = 0, boundary = 0;
    for (int v : order) {
        long long into = 0;
        for (int w : g.neighbors(v))
            if (inside[w]) ++into;
        vol += g.deg(v);
        boundary += g.deg(v) - 2 * into;
        inside[v] = 1;
        prefixes.push_back({v, vol, boundary});
    }
    return prefixes;
}

Cut cut_from_prefix(const Graph& g, const std::vector<SweepEntry>& prefixes, int idx) {
    Cut c;
    c.side.reserve(idx + 1);
    for (int i = 0; i <= idx; ++i) c.side.push_back(prefixes[i].vertex);
    std::sort(c.side.begin(), c.side.end());
    c.vol = prefixes[idx].vol;
    c.boundary = prefixes[idx].boundary;
    const long long small = std::min(c.vol, g.total_volume() - c.vol);
    c.conductance = static_cast<double>(c.boundary) / static_cast<double>(small);
    c.balance = static_cast<double>(small) / static_cast<double>(g.total_volume());
    return c;
}

}  // namespace

Embedding embed(const Graph& g, const WalkState& state, int k_jl, uint64_t master_seed,
                const SeparatorConfig& cfg) {
    const int n = g.n();
    if (k_jl < 1 || k_jl > n) throw std::invalid_argument("embed: k_jl must lie in [1, n]");
    const double delta = std::max(1.0 / (static_cast<double>(n) * n * n), cfg.delta_floor);

    ProjectedExponent exponent = ProjectedExponent::from_graph(g, state.beta, state.tau);
    ExponentOperator a_op(exponent);

    // the rational backend shares one inverter across all directions
    std::optional<ProjectedInverter> inverter;
    ExpmParams params;
    if (cfg.backend == ExpmvBackend::Rational) {
        params = choose_params(a_op.norm_hint()->value, delta);
        inverter.emplace(exponent, params.k, params.eps1);
    }

    std::vector<std::vector<double>> u = jl_directions(k_jl, n, master_seed, state.t);
    std::vector<std::vector<double>> walked(k_jl);
    parallel_for(k_jl, cfg.threads, [&](int j) {
        if (cfg.backend == ExpmvBackend::Rational) {
            InvertFn inv = [&](const std::vector<double>& y, int, double) {
                return inverter->apply(y);
            };
            walked[j] = expmv_rational(a_op, inv, u[j], delta);
        } else {
            walked[j] = expmv_lanczos(a_op, u[j], delta, cfg.c0_lanczos);
        }
    });

    std::vector<double> coords(static_cast<std::size_t>(n) * k_jl, 0.0);
    const double scale = std::sqrt(static_cast<double>(n) / k_jl);
    for (int j = 0; j < k_jl; ++j)
        for (int i = 0; i < n; ++i)
            coords[static_cast<std::size_t>(i) * k_jl + j] =
                scale * walked[j][i] / std::sqrt(static_cast<double>(g.deg(i)));
    return assemble_embedding(g, k_jl, std::move(coords));
}

Embedding assemble_embedding(const Graph& g, int k, std::vector<double> coords) {
    const int n = g.n();
    if (static_cast<int>(coords.size()) != n * k)
        throw std::invalid_argument("assemble_embedding: size mismatch");
    Embedding e;
    e.k = k;
    e.coords = std::move(coords);
    const double twom = static_cast<double>(g.total_volume());
    e.mean.assign(k, 0.0);
    for (int i = 0; i < n; ++i) {
        const double wdeg = g.deg(i) / twom;
        for (int j = 0; j < k; ++j)
            e.mean[j] += wdeg * e.coords[static_cast<std::size_t>(i) * k + j];
    }
    e.radii.assign(n, 0.0);
    e.psi = 0;
    for (int i = 0; i < n; ++i) {
        double r2 = 0;
        for (int j = 0; j < k; ++j) {
            const double d = e.coords[static_cast<std::size_t>(i) * k + j] - e.mean[j];
            r2 += d * d;
        }
        e.radii[i] = std::sqrt(r2);
        e.psi += g.deg(i) * r2;
    }
    return e;
}

double total_deviation(const Graph& g, const Embedding& e) {
    double psi = 0;
    for (int i = 0; i < g.n(); ++i) psi += g.deg(i) * e.radii[i] * e.radii[i];
    return psi;
}

Cut sweep_cut(const Graph& g, const std::vector<double>& score,
              const std::optional<VolumeWindow>& window) {
    const auto prefixes = sweep_prefixes(g, score);
    int best = -1;
    double best_phi = 0;
    for (int i = 0; i + 1 < static_cast<int>(prefixes.size()); ++i) {
        const long long vol = prefixes[i].vol;
        if (window && (vol < window->lo || vol > window->hi)) continue;
        const double phi = static_cast<double>(prefixes[i].boundary) /
                           static_cast<double>(std::min(vol, g.total_volume() - vol));
        if (best < 0 || phi < best_phi) {
            best = i;
            best_phi = phi;
        }
    }
    if (best < 0) throw std::runtime_error("sweep_cut: no feasible prefix in the volume window");
    return cut_from_prefix(g, prefixes, best);
}

Cut proj_round(const Graph& g, const Embedding& e, double c, uint64_t master_seed,
               int iteration) {
    const int n = g.n();
    const int rounds = static_cast<int>(std::ceil(4.0 * std::log(n)));
    const double sqrt_h = std::sqrt(static_cast<double>(e.k));
    VolumeWindow window{static_cast<long long>(std::ceil(c * g.total_volume())),
                        static_cast<long long>(std::floor((1.0 - c) * g.total_volume()))};
    std::optional<Cut> best;
    for (int t = 0; t < rounds; ++t) {
        Rng rng = Rng::stream(Rng::mix(master_seed, iteration), kTagRound, t);
        std::vector<double> dir = rng.unit_vector(e.k);
        std::vector<double> x(n);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < e.k; ++j)
                s += dir[j] * e.coords[static_cast<std::size_t>(i) * e.k + j];
            x[i] = sqrt_h * s;
            lo = std::min(lo, x[i]);
            hi = std::max(hi, x[i]);
        }
        // a projection with no spread carries no cut information
        if (hi - lo <= 1e-14 * std::max(std::abs(hi), std::abs(lo)) + 1e-300) continue;
        try {
            Cut cand = sweep_cut(g, x, window);
            if (!best || cand.conductance < best->conductance) best = std::move(cand);
        } catch (const std::runtime_error&) {
            // this direction had no sweep inside the window; try the next
        }
    }
    if (!best)
        throw std::runtime_error("proj_round: degenerate embedding, no balanced sweep exists");
    return *best;
}

FindCutResult find_cut(const Graph& g, double b, double gamma, const Embedding& e,
                       uint64_t master_seed, int iteration, const SeparatorConfig& cfg) {
    const int n = g.n();
    const double twom = static_cast<double>(g.total_volume());
    const double psi = e.psi;
    FindCutResult res;

    // Case 1: embedding energy across edges too large for rounding.
    double lx = 0;
    for (int v = 0; v < n; ++v) {
        for (int w : g.neighbors(v)) {
            if (w <= v) continue;
            double d2 = 0;
            for (int j = 0; j < e.k; ++j) {
                const double d = e.coords[static_cast<std::size_t>(v) * e.k + j] -
                                 e.coords[static_cast<std::size_t>(w) * e.k + j];
                d2 += d * d;
            }
            lx += d2;
        }
    }
    const double alpha = cfg.alpha_factor * gamma;
    if (lx > alpha * psi) {
        res.kind = FindCutResult::Kind::Fail;
        res.case_taken = 1;
        res.diagnostic = "objective " + std::to_string(lx) + " exceeds " +
                         std::to_string(alpha) + " * psi";
        return res;
    }

    // Case 2: enough deviation is spread over the low-radius set.
    const double radius_threshold = 32.0 * (1.0 - b) / b * psi / twom;
    std::vector<char> in_r(n, 0);
    double vol_r = 0;
    std::vector<double> sum_dv(e.k, 0.0);
    double sum_d_norm2 = 0;
    for (int i = 0; i < n; ++i) {
        if (e.radii[i] * e.radii[i] <= radius_threshold) {
            in_r[i] = 1;
            const double d = g.deg(i);
            vol_r += d;
            double norm2 = 0;
            for (int j = 0; j < e.k; ++j) {
                const double x = e.coords[static_cast<std::size_t>(i) * e.k + j];
                sum_dv[j] += d * x;
                norm2 += x * x;
            }
            sum_d_norm2 += d * norm2;
        }
    }
    double lkr = vol_r * sum_d_norm2;
    for (int j = 0; j < e.k; ++j) lkr -= sum_dv[j] * sum_dv[j];
    lkr /= twom;
    const double c = b / cfg.c_divisor;
    if (lkr >= psi / 128.0) {
        res.kind = FindCutResult::Kind::Cut;
        res.case_taken = 2;
        res.cut = proj_round(g, e, c, master_seed, iteration);
        return res;
    }

    // Case 3: radius sweep over the high-deviation prefix.
    const auto prefixes = sweep_prefixes(g, e.radii);
    const double vol_cap = (b / 4.0) * twom;
    const double phi_cap = 40.0 * std::sqrt(gamma);
    int best = -1;
    for (int i = 0; i < static_cast<int>(prefixes.size()); ++i) {
        if (static_cast<double>(prefixes[i].vol) >= vol_cap) break;  // reached z
        const long long small = std::min(prefixes[i].vol, g.total_volume() - prefixes[i].vol);
        if (small <= 0) break;
        const double phi =
            static_cast<double>(prefixes[i].boundary) / static_cast<double>(small);
        if (phi <= phi_cap) best = i;  // prefixes grow, so the last hit is most balanced
    }
    if (best < 0) {
        res.kind = FindCutResult::Kind::Fail;
        res.case_taken = 3;
        res.diagnostic = "no radius sweep below conductance " + std::to_string(phi_cap);
        return res;
    }
    res.kind = FindCutResult::Kind::Cut;
    res.case_taken = 3;
    res.cut = cut_from_prefix(g, prefixes, best);
    return res;
}

PartitionResult balanced_separator(const Graph& g, double b, double gamma, const SeparatorConfig& cfg) {
    const int n = g.n();
    if (!(b > 0 && b <= 0.5)) throw std::invalid_argument("balanced_separator: b must lie in (0, 1/2]");
    if (!(gamma >= 1.0 / (static_cast<double>(n) * n) && gamma < 1.0))
        throw std::invalid_argument("balanced_separator: gamma must lie in [1/n^2, 1)");

    const double tau = std::log(static_cast<double>(n)) / (12.0 * gamma);
    const int T = static_cast<int>(std::ceil(12.0 * std::log(static_cast<double>(n))));
    const int k_jl = std::min<long long>(
        n, static_cast<long long>(std::ceil(cfg.jl_constant * std::log(static_cast<double>(n)) /
                                            (kJlEps * kJlEps))));
    const double c = b / cfg.c_divisor;
    const double beta_bound = 72.0 * gamma;

    WalkState state;
    state.beta.assign(n, 0.0);
    state.removed.assign(n, 0);
    state.tau = tau;
    state.gamma = gamma;
    state.b = b;

    PartitionResult out;
    long long removed_vol = 0;

    for (int t = 1; t <= T; ++t) {
        const auto started = std::chrono::steady_clock::now();
        state.t = t;
        IterationRecord rec;
        rec.t = t;

        Embedding e = embed(g, state, k_jl, cfg.seed, cfg);
        rec.psi = e.psi;
        if (cfg.dense_oracle) rec.psi_dense = dense_potential(g, state.beta, tau);
        out.final_psi = e.psi;

        if (e.psi <= (1.0 + kJlEps) / n) {
            rec.case_taken = 0;
            rec.terminated = true;
            rec.millis = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
            out.trace.push_back(std::move(rec));
            out.kind = PartitionResult::Kind::NoCert;
            out.beta = state.beta;
            out.iterations = t;
            return out;
        }

        FindCutResult fc = find_cut(g, b, gamma, e, cfg.seed, t, cfg);
        rec.case_taken = fc.case_taken;
        if (fc.kind == FindCutResult::Kind::Fail) {
            rec.terminated = true;
            out.trace.push_back(std::move(rec));
            out.kind = PartitionResult::Kind::Fail;
            out.diagnostic = fc.diagnostic;
            out.beta = state.beta;
            out.iterations = t;
            return out;
        }
        rec.cut = fc.cut;
        if (e.psi > 0) {
            double share = 0;
            for (int v : fc.cut->side) share += g.deg(v) * e.radii[v] * e.radii[v];
            rec.cut_deviation_share = share / e.psi;
        }
        rec.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();

        if (fc.cut->balance >= c) {
            if (fc.cut->conductance > 40.0 * std::sqrt(gamma) + 1e-12)
                throw std::logic_error("balanced_separator: emitted cut violates the conductance bound");
            rec.terminated = true;
            out.trace.push_back(std::move(rec));
            out.kind = PartitionResult::Kind::BalancedCut;
            out.cut = fc.cut;
            out.beta = state.beta;
            out.iterations = t;
            return out;
        }

        for (int v : fc.cut->side) {
            if (!state.removed[v]) {
                state.removed[v] = 1;
                removed_vol += g.deg(v);
            }
        }
        const long long small = std::min(removed_vol, g.total_volume() - removed_vol);
        if (static_cast<double>(small) / g.total_volume() >= c && removed_vol > 0 &&
            removed_vol < g.total_volume()) {
            Cut unioned = g.cut_stats(state.removed);
            if (unioned.conductance > 40.0 * std::sqrt(gamma) + 1e-12)
                throw std::logic_error("balanced_separator: emitted union violates the conductance bound");
            rec.terminated = true;
            out.trace.push_back(std::move(rec));
            out.kind = PartitionResult::Kind::BalancedCut;
            out.cut = std::move(unioned);
            out.beta = state.beta;
            out.iterations = t;
            return out;
        }

        for (int v : fc.cut->side) {
            state.beta[v] += 72.0 * gamma / T;
            if (state.beta[v] > beta_bound + 1e-12)
                throw std::logic_error("balanced_separator: beta bound exceeded");
        }
        out.trace.push_back(std::move(rec));
    }

    out.kind = PartitionResult::Kind::NoCert;
    out.beta = state.beta;
    out.iterations = T;
    return out;
}

double dense_potential(const Graph& g, const std::vector<double>& beta, double tau) {
    ProjectedExponent p = ProjectedExponent::from_graph(g, beta, 2.0 * tau);
    SmallSymmetric dense = dense_projected_exponent(p);
    SymEigResult eig = sym_eig(dense);
    double trace = 0;
    for (double lam : eig.values) trace += std::exp(-lam);
    return trace - 1.0;
}

}  // namespace heatcut
