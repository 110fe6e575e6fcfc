// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "heatcut/expmv.hpp"
#include "heatcut/graph.hpp"
#include "heatcut/partition.hpp"
#include "heatcut/polyapprox.hpp"
#include "heatcut/report.hpp"
#include "heatcut/solvers.hpp"
#include "heatcut/vec.hpp"
#include "helpers.hpp"

using namespace heatcut;
using testing::dense_solve;
using testing::l2_dist;
using testing::random_psd;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void info(const std::string& detail) {
    std::printf("       note      : %s\n", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

double lambda2_of_exponent(const Graph& g) {
    ProjectedExponent p = ProjectedExponent::from_graph(g, std::vector<double>(g.n(), 0.0), 1.0);
    return sym_eig(dense_projected_exponent(p)).values[1];
}

// ---- criterion 1: expmv backends against the dense oracle ----------------
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    double worst_lanczos = 0, worst_rational = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double norm = 1.0 + 499.0 * trial / 49.0;
        SmallSymmetric a = random_psd(100, norm, rng);
        DenseSymOp op(100, a.a);
        std::vector<double> v = rng.unit_vector(100);
        std::vector<double> exact = dense_expmv(a, v);
        worst_lanczos = std::max(worst_lanczos, l2_dist(expmv_lanczos(op, v, 1e-8), exact));
        worst_rational =
            std::max(worst_rational, l2_dist(expmv_rational_shifted(op, v, 1e-8), exact));
    }
    const double secs = seconds_since(start);
    const bool pass = worst_lanczos <= 1e-7 && worst_rational <= 1e-7 && secs < 30.0;
    report(1, pass,
           fmt("expmv oracle agreement: worst lanczos %.2e, worst rational %.2e "
               "(tol 1e-7), %.1fs (limit 30s)",
               worst_lanczos, worst_rational, secs));
}

// ---- criterion 2: projected inversion against the dense inverse ----------
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1002);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = [&]() {
            switch (trial % 4) {
                case 0: return Graph::random_regular(60 + 20 * (trial / 4), 3, 500 + trial);
                case 1: return Graph::dumbbell(4 + trial / 4, 24 + 8 * (trial / 4));
                case 2: return Graph::planted_bisection(80 + 40 * (trial / 4), 4, 3, 600 + trial);
                default:
                    return testing::random_connected_graph(150 + 30 * (trial / 4), 0.02, rng);
            }
        }();
        std::vector<double> beta(g.n(), 0.0);
        for (int i = 0; i < g.n(); ++i)
            if (rng.uniform() < 0.2) beta[i] = 2.0 * rng.uniform();
        const double tau = 0.5 + 19.5 * rng.uniform();
        const int k = 5 + static_cast<int>(rng.below(36));
        ProjectedExponent p = ProjectedExponent::from_graph(g, beta, tau);
        SmallSymmetric a = dense_projected_exponent(p);
        std::vector<double> shifted = a.a;
        for (auto& x : shifted) x /= k;
        for (int i = 0; i < g.n(); ++i) shifted[static_cast<std::size_t>(i) * g.n() + i] += 1.0;
        std::vector<double> y = rng.unit_vector(g.n());
        std::vector<double> exact = dense_solve(std::move(shifted), g.n(), y);
        std::vector<double> got = invert_projected(p, k, 1e-8, y);
        worst = std::max(worst, l2_dist(exact, got));
    }
    const double secs = seconds_since(start);
    report(2, worst <= 1e-7,
           fmt("projected inversion vs dense inverse on 20 walk exponents: worst %.2e "
               "(tol 1e-7), %.1fs",
               worst, secs));
}

// ---- criterion 3: lanczos order scaling across norm decades --------------
void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    const int n = 1500;
    Rng rng(1003);
    std::vector<double> ks;
    for (double width : {100.0, 1000.0, 10000.0}) {
        std::vector<double> spectrum(n);
        for (int i = 0; i < n; ++i) spectrum[i] = width * i / (n - 1);
        DiagonalOp op(spectrum);
        std::vector<double> v = rng.unit_vector(n);
        std::vector<double> exact(n);
        for (int i = 0; i < n; ++i) exact[i] = std::exp(-spectrum[i]) * v[i];
        auto error_at = [&](int k) {
            std::vector<double> u = lanczos_fv(op, v, k, [](double x) { return std::exp(-x); });
            return l2_dist(u, exact);
        };
        // scan upward (accuracy degrades past stagnation, so no global bisect)
        int hi = 4;
        while (hi < n - 1 && error_at(hi) > 1e-6) hi = static_cast<int>(std::ceil(hi * 1.3));
        int lo = std::max(4, static_cast<int>(hi / 1.3) + 1);
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (error_at(mid) <= 1e-6)
                hi = mid;
            else
                lo = mid + 1;
        }
        ks.push_back(hi);
    }
    const double r01 = ks[1] / ks[0], r12 = ks[2] / ks[1], r02 = ks[2] / ks[0];
    const double secs = seconds_since(start);
    const bool pass = r01 <= 12.0 && r12 <= 12.0 && r02 <= 12.0 && secs < 60.0;
    report(3, pass,
           fmt("lanczos minimal orders %g/%g/%g at norms 1e2/1e3/1e4; ratios %.2f, %.2f, "
               "two-decade %.2f (limit 12), %.1fs (limit 60s)",
               ks[0], ks[1], ks[2], r01, r12, r02, secs));
}

// ---- criterion 4: interpolation degree sqrt-scaling -----------------------
void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    const int d16 = minimal_degree_empirical(0.0, 16.0, 1e-3);
    const int d64 = minimal_degree_empirical(0.0, 64.0, 1e-3);
    const int d256 = minimal_degree_empirical(0.0, 256.0, 1e-3);
    const double r1 = static_cast<double>(d64) / d16;
    const double r2 = static_cast<double>(d256) / d64;
    const double secs = seconds_since(start);
    const bool pass = r1 >= 1.5 && r1 <= 2.8 && r2 >= 1.5 && r2 <= 2.8 && secs < 30.0;
    report(4, pass,
           fmt("minimal interpolation degrees %d/%d/%d on widths 16/64/256; ratios %.2f, "
               "%.2f (window [1.5, 2.8]), %.1fs (limit 30s)",
               d16, d64, d256, r1, r2, secs));
}

// ---- criterion 5: lower bound and alternation witness --------------------
void criterion_5() {
    bool pass = true;
    std::string detail = "lower bounds:";
    for (double width : {16.0, 64.0, 256.0}) {
        const int lower = degree_lower_bound(0.0, width, 0.125).degree;
        const int empirical = minimal_degree_empirical(0.0, width, 0.125);
        const int probe_degree = lower - 1;
        // a certificate on any subinterval bounds the error on the full one;
        // shorter probes concentrate the alternation amplitudes
        double witness = 0;
        for (double sub = width; sub >= 2.0; sub /= 2.0) {
            PolynomialApprox probe = cheb_interpolate_exp(0.0, sub, probe_degree);
            witness = std::max(witness, lower_bound_witness(probe, probe_degree));
        }
        const double threshold = 0.125 * 1e-2;  // slack-adjusted, relative to exp(-0)
        pass = pass && empirical >= lower && witness > threshold;
        detail += fmt(" W=%g: empirical %d >= %d, witness %.2e > %.2e;", width, empirical,
                      lower, witness, threshold);
    }
    report(5, pass, detail);
}

// ---- criterion 6: inverse-approximation certificate -----------------------
void criterion_6() {
    Rng rng(1006);
    double worst_excess = 0;
    bool degrees_exact = true;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = std::pow(10.0, rng.uniform(-3, 2));
        const double ratio = std::pow(10.0, rng.uniform(0.05, 4.0));  // b/a <= 1e4
        const double eps = std::pow(10.0, rng.uniform(-5, -0.31));
        PolynomialApprox p = q_inverse(a, a * ratio, eps);
        worst_excess = std::max(worst_excess, p.measured_error / eps);
        const int want = static_cast<int>(std::ceil(std::sqrt(ratio) * std::log(2.0 / eps)));
        degrees_exact = degrees_exact && p.degree == want;
    }
    report(6, worst_excess <= 1.0 && degrees_exact,
           fmt("inverse-approx certificate on 100 random intervals: worst residual/eps "
               "%.3f (<= 1), degree formula exact: %s",
               worst_excess, degrees_exact ? "yes" : "no"));
}

// ---- criterion 7: planted bisection recovery ------------------------------
PartitionResult run_planted(uint64_t seed, Graph& out_graph, double& out_gamma,
                            SeparatorConfig& out_cfg) {
    Graph g = Graph::planted_bisection(200, 3, 4, 700 + seed);
    std::vector<int> half;
    for (int i = 0; i < 100; ++i) half.push_back(i);
    const double gamma = 2.0 * g.cut_stats(half).conductance;
    SeparatorConfig cfg;
    cfg.seed = seed;
    PartitionResult res = balanced_separator(g, 0.25, gamma, cfg);
    out_graph = std::move(g);
    out_gamma = gamma;
    out_cfg = cfg;
    return res;
}

void criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    const int t_bound = static_cast<int>(std::ceil(12.0 * std::log(200.0)));
    int ok = 0;
    std::string detail;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = Graph::clique(2);
        double gamma = 0;
        SeparatorConfig cfg;
        PartitionResult res = run_planted(seed, g, gamma, cfg);
        const bool good = res.kind == PartitionResult::Kind::BalancedCut &&
                          res.cut->conductance <= 40.0 * std::sqrt(gamma) &&
                          res.cut->balance >= 0.25 / 100.0 && res.iterations <= t_bound;
        if (good) ++ok;
        detail += fmt(" s%llu:%s(phi %.4f)", static_cast<unsigned long long>(seed),
                      res.kind == PartitionResult::Kind::BalancedCut ? "cut" : "other",
                      res.cut ? res.cut->conductance : -1.0);
    }
    const double secs = seconds_since(start);
    report(7, ok >= 4 && secs < 120.0,
           fmt("planted bisection recovery %d/5 seeds;%s %.1fs (limit 120s)", ok,
               detail.c_str(), secs));
}

// ---- criterion 8: expander certificate ------------------------------------
PartitionResult run_expander(uint64_t seed, double gamma_divisor, Graph& out_graph,
                             double& out_gamma, SeparatorConfig& out_cfg) {
    Graph g = Graph::random_regular(100, 3, 800 + seed);
    const double gamma = lambda2_of_exponent(g) / gamma_divisor;
    SeparatorConfig cfg;
    cfg.seed = 40 + seed;
    PartitionResult res = balanced_separator(g, 0.25, gamma, cfg);
    out_graph = std::move(g);
    out_gamma = gamma;
    out_cfg = cfg;
    return res;
}

void criterion_8() {
    const auto start = std::chrono::steady_clock::now();
    int nocert = 0;
    std::string detail;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = Graph::clique(2);
        double gamma = 0;
        SeparatorConfig cfg;
        PartitionResult res = run_expander(seed, 4.0, g, gamma, cfg);
        if (res.kind == PartitionResult::Kind::NoCert) ++nocert;
        detail += fmt(" s%llu:%s", static_cast<unsigned long long>(seed),
                      res.kind == PartitionResult::Kind::NoCert        ? "nocert"
                      : res.kind == PartitionResult::Kind::BalancedCut ? "cut"
                                                                       : "fail");
    }

    // small instances: whenever the certificate is emitted, verify it
    // exhaustively against every balanced cut
    int small_nocert = 0, small_sound = 0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = Graph::random_regular(16, 3, 900 + seed);
        const double gamma = lambda2_of_exponent(g) / 4.0;
        SeparatorConfig cfg;
        cfg.seed = 90 + seed;
        PartitionResult res = balanced_separator(g, 0.25, gamma, cfg);
        if (res.kind != PartitionResult::Kind::NoCert) continue;
        ++small_nocert;
        bool sound = true;
        const long long twom = g.total_volume();
        for (unsigned mask = 1; mask < (1u << 15); ++mask) {
            std::vector<int> side;
            long long vol = 0;
            for (int v = 0; v < 16; ++v)
                if (mask & (1u << v)) {
                    side.push_back(v);
                    vol += g.deg(v);
                }
            const long long small = std::min(vol, twom - vol);
            if (static_cast<double>(small) < 0.25 * twom) continue;
            if (g.cut_stats(side).conductance < gamma) {
                sound = false;
                break;
            }
        }
        if (sound) ++small_sound;
    }
    const double secs = seconds_since(start);
    report(8, nocert >= 4 && small_nocert == small_sound,
           fmt("expander certificate at gamma = lambda2/4: nocert %d/5 (need >= 4);%s; "
               "n=16 nocert %d, exhaustively sound %d; %.1fs",
               nocert, detail.c_str(), small_nocert, small_sound, secs));

    // diagnostic only: with a 2x smaller target the walk runs long enough to
    // mix below the certificate threshold
    int nocert8 = 0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = Graph::clique(2);
        double gamma = 0;
        SeparatorConfig cfg;
        PartitionResult res = run_expander(seed, 8.0, g, gamma, cfg);
        if (res.kind == PartitionResult::Kind::NoCert) ++nocert8;
    }
    info(fmt("diagnostic (not gated): at gamma = lambda2/8 the same seeds give nocert %d/5",
             nocert8));
}

// ---- criterion 9: potential decay on unbalanced iterations ----------------
void criterion_9() {
    const auto start = std::chrono::steady_clock::now();
    int unbalanced = 0, decayed = 0, share_ok = 0;
    for (int seed = 0; seed < 10; ++seed) {
        const int pendant = 3 + (seed % 2);
        const int bulk = 36 + 2 * (seed % 5);
        Graph g = Graph::dumbbell(pendant, bulk);
        SeparatorConfig cfg;
        cfg.seed = 200 + seed;
        cfg.c_divisor = 4.0;  // stricter output balance so unbalanced cuts recur
        cfg.dense_oracle = true;
        PartitionResult res = balanced_separator(g, 0.25, 0.03, cfg);
        for (std::size_t i = 0; i + 1 < res.trace.size(); ++i) {
            const auto& rec = res.trace[i];
            if (rec.case_taken < 2 || rec.terminated) continue;
            ++unbalanced;
            if (*res.trace[i + 1].psi_dense <= (5.0 / 6.0) * *rec.psi_dense) ++decayed;
            if (rec.cut_deviation_share >= 0.5) ++share_ok;
        }
    }
    const double secs = seconds_since(start);
    const bool pass = unbalanced > 0 && decayed >= 0.8 * unbalanced;
    report(9, pass,
           fmt("potential decay on %d unbalanced iterations: %d decayed by 5/6 (need 80%%), "
               "%d carried half the deviation; c = b/4 config override; %.1fs",
               unbalanced, decayed, share_ok, secs));
}

// ---- criterion 10: sketch fidelity at the dimension cap -------------------
void criterion_10() {
    Graph g = Graph::random_regular(64, 3, 777);
    const double gamma = 0.05;
    const double tau = std::log(64.0) / (12.0 * gamma);
    WalkState s;
    s.beta.assign(64, 0.0);
    s.removed.assign(64, 0);
    s.tau = tau;
    s.gamma = gamma;
    s.b = 0.25;
    s.t = 1;
    SeparatorConfig cfg;
    cfg.seed = 555;
    const int k_jl = std::min<long long>(
        64, static_cast<long long>(std::ceil(24.0 * std::log(64.0) / (kJlEps * kJlEps))));
    Embedding e = embed(g, s, k_jl, cfg.seed, cfg);

    // exact distances through the dense walk matrix (3-regular: uniform scale)
    ProjectedExponent p = ProjectedExponent::from_graph(g, s.beta, tau);
    SymEigResult eig = sym_eig(dense_projected_exponent(p));
    std::vector<double> walk(64 * 64, 0.0);
    for (int l = 0; l < 64; ++l) {
        const double f = std::exp(-eig.values[l]);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j)
                walk[static_cast<std::size_t>(i) * 64 + j] +=
                    f * eig.vector_entry(i, l) * eig.vector_entry(j, l);
    }
    Rng rng(556);
    int ok = 0, total = 0;
    for (int trial = 0; trial < 600; ++trial) {
        const int i = static_cast<int>(rng.below(64));
        const int j = static_cast<int>(rng.below(64));
        if (i == j) continue;
        double exact = 0, sketched = 0;
        for (int r = 0; r < 64; ++r) {
            const double di = (walk[static_cast<std::size_t>(r) * 64 + i] -
                               walk[static_cast<std::size_t>(r) * 64 + j]) /
                              std::sqrt(3.0);
            exact += di * di;
            const double ds = e.coords[static_cast<std::size_t>(i) * k_jl + r] -
                              e.coords[static_cast<std::size_t>(j) * k_jl + r];
            sketched += ds * ds;
        }
        ++total;
        if (sketched >= (1.0 - kJlEps) * exact && sketched <= (1.0 + kJlEps) * exact) ++ok;
    }
    const double rate = static_cast<double>(ok) / total;
    report(10, rate >= 0.99,
           fmt("sketch dimension %d (cap n = 64): %.1f%% of %d sampled pairs within 1 +/- 1/7",
               k_jl, 100.0 * rate, total));
}

// ---- criterion 11: byte-identical reruns -----------------------------------
void criterion_11() {
    Graph g1 = Graph::clique(2), g2 = Graph::clique(2);
    double gamma1 = 0, gamma2 = 0;
    SeparatorConfig cfg1, cfg2;
    PartitionResult a = run_planted(0, g1, gamma1, cfg1);
    PartitionResult b = run_planted(0, g2, gamma2, cfg2);
    const std::string sa = partition_report(g1, "planted", 0.25, gamma1, cfg1, a).dump();
    const std::string sb = partition_report(g2, "planted", 0.25, gamma2, cfg2, b).dump();

    Graph e1 = Graph::clique(2), e2 = Graph::clique(2);
    PartitionResult c = run_expander(0, 4.0, e1, gamma1, cfg1);
    PartitionResult d = run_expander(0, 4.0, e2, gamma2, cfg2);
    const std::string sc = partition_report(e1, "expander", 0.25, gamma1, cfg1, c).dump();
    const std::string sd = partition_report(e2, "expander", 0.25, gamma2, cfg2, d).dump();

    report(11, sa == sb && sc == sd,
           fmt("identical seeds serialize identically: planted %s (%zu bytes), expander %s "
               "(%zu bytes)",
               sa == sb ? "yes" : "no", sa.size(), sc == sd ? "yes" : "no", sc.size()));
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("================\n%d of 11 criteria failed\n", failures);
    return failures;
}
