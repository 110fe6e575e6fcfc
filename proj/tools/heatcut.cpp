#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heatcut/expmv.hpp"
#include "heatcut/graph.hpp"
#include "heatcut/json_writer.hpp"
#include "heatcut/partition.hpp"
#include "heatcut/polyapprox.hpp"
#include "heatcut/report.hpp"
#include "heatcut/solvers.hpp"

namespace {

using namespace heatcut;

void emit(const Json& j, const std::string& out_path) {
    const std::string text = j.dump();
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + out_path);
        out << text << '\n';
    }
}

ExpmvBackend parse_backend(const std::string& name) {
    if (name == "rational") return ExpmvBackend::Rational;
    if (name == "lanczos") return ExpmvBackend::Lanczos;
    throw CLI::ValidationError("--backend must be rational or lanczos");
}

void apply_config_file(const std::string& path, SeparatorConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const char* ws = " \t\r";
            s.erase(0, s.find_first_not_of(ws));
            const auto last = s.find_last_not_of(ws);
            s.erase(last == std::string::npos ? 0 : last + 1);
        };
        trim(key);
        trim(value);
        if (key.empty()) continue;
        if (key == "alpha_factor") cfg.alpha_factor = std::stod(value);
        else if (key == "c_divisor") cfg.c_divisor = std::stod(value);
        else if (key == "jl_constant") cfg.jl_constant = std::stod(value);
        else if (key == "backend") cfg.backend = parse_backend(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "threads") cfg.threads = std::stoi(value);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

int cmd_gen(const std::string& type, int n, int d, int cross, int p, int q, uint64_t seed,
            const std::string& out_path, const std::string& json_path) {
    Graph g = [&] {
        if (type == "clique") return Graph::clique(n);
        if (type == "path") return Graph::path(n);
        if (type == "regular") return Graph::random_regular(n, d, seed);
        if (type == "planted") return Graph::planted_bisection(n, d, cross, seed);
        if (type == "dumbbell") return Graph::dumbbell(p, q);
        throw CLI::ValidationError("--type must be clique|path|regular|planted|dumbbell");
    }();
    if (out_path.empty()) {
        g.write_edge_list(std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        g.write_edge_list(out);
    }
    Json j = Json::object();
    j.set("schema", 1);
    j.set("command", "gen");
    j.set("type", type);
    j.set("n", g.n());
    j.set("m", g.m());
    j.set("seed", seed);
    if (!out_path.empty()) {
        j.set("path", out_path);
        emit(j, json_path);
    }
    return 0;
}

int cmd_partition(const std::string& input, double b, double gamma, SeparatorConfig cfg,
                  const std::string& out_path, bool timing, bool require_cut,
                  bool require_nocert) {
    Graph g = Graph::load_edge_list_file(input);
    const double n = g.n();
    if (!(gamma >= 1.0 / (n * n) && gamma < 1.0))
        throw CLI::ValidationError("--gamma must lie in [1/n^2, 1)");
    if (!(b > 0 && b <= 0.5)) throw CLI::ValidationError("-b must lie in (0, 1/2]");
    if (g.n() > 2048 && cfg.dense_oracle)
        throw CLI::ValidationError("--dense-oracle needs a small graph");

    PartitionResult res = balanced_separator(g, b, gamma, cfg);
    emit(partition_report(g, input, b, gamma, cfg, res, timing), out_path);

    if (res.kind == PartitionResult::Kind::Fail) return 2;
    if (require_cut && res.kind != PartitionResult::Kind::BalancedCut) return 2;
    if (require_nocert && res.kind != PartitionResult::Kind::NoCert) return 2;
    return 0;
}

int cmd_expmv(const std::string& input, double tau, double delta, const std::string& backend,
              uint64_t seed, const std::string& out_path) {
    Graph g = Graph::load_edge_list_file(input);
    if (!(tau >= 0)) throw CLI::ValidationError("--tau must be >= 0");
    if (!(delta > 0 && delta <= 1)) throw CLI::ValidationError("--delta must lie in (0,1]");
    std::vector<double> beta(g.n(), 0.0);
    ProjectedExponent p = ProjectedExponent::from_graph(g, beta, tau);
    Rng rng = Rng::stream(seed, 0xe197u);
    std::vector<double> v = rng.unit_vector(g.n());
    std::vector<double> u;
    Json j = Json::object();
    j.set("schema", 1);
    j.set("command", "expmv");
    j.set("input", input);
    j.set("n", g.n());
    j.set("tau", tau);
    j.set("delta", delta);
    j.set("backend", backend);
    j.set("seed", seed);
    if (backend == "rational") {
        ExpmParams params = choose_params(ExponentOperator(p).norm_hint()->value, delta);
        j.set("k", params.k);
        j.set("eps1", params.eps1);
        u = expmv_rational_projected(p, v, delta);
    } else if (backend == "lanczos") {
        ExponentOperator op(p);
        u = expmv_lanczos(op, v, delta);
    } else {
        throw CLI::ValidationError("--backend must be rational or lanczos");
    }
    double norm = 0, checksum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        norm += u[i] * u[i];
        checksum += u[i] * static_cast<double>(i + 1);
    }
    j.set("result_norm", std::sqrt(norm));
    j.set("checksum", checksum);
    emit(j, out_path);
    return 0;
}

int cmd_polyfit(double a, double b, double delta, const std::string& out_path) {
    if (!(b > a)) throw CLI::ValidationError("need --b > --a");
    if (!(delta > 0 && delta < 1)) throw CLI::ValidationError("--delta must lie in (0,1)");
    const int degree = minimal_degree_empirical(a, b, delta);
    PolynomialApprox p = cheb_interpolate_exp(a, b, degree);
    const double witness = lower_bound_witness(p, degree);
    const LowerBound lb = degree_lower_bound(a, b, delta);
    Json j = Json::object();
    j.set("schema", 1);
    j.set("command", "polyfit");
    Json interval = Json::array();
    interval.push_back(a);
    interval.push_back(b);
    j.set("interval", std::move(interval));
    j.set("delta", delta);
    j.set("degree", degree);
    j.set("measured_error", p.measured_error);
    j.set("lower_bound", witness);
    j.set("degree_lower_bound", lb.applicable ? Json(lb.degree) : Json());
    j.set("degree_upper_bound", degree_upper_bound(a, b, delta));
    j.set("grid_size", p.grid_size);
    emit(j, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatcut: spectral balanced-separator toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a test graph as an edge list");
    std::string gen_type = "clique";
    int gen_n = 4, gen_d = 3, gen_cross = 2, gen_p = 4, gen_q = 20;
    uint64_t gen_seed = 1;
    std::string gen_out, gen_json;
    gen->add_option("--type", gen_type, "clique|path|regular|planted|dumbbell");
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--d", gen_d, "degree (regular, planted)");
    gen->add_option("--cross", gen_cross, "cross edges (planted)");
    gen->add_option("--p", gen_p, "first clique size (dumbbell)");
    gen->add_option("--q", gen_q, "second clique size (dumbbell)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--output", gen_out, "edge-list output path (default stdout)");
    gen->add_option("--json", gen_json, "write the summary JSON here instead of stdout");

    // partition
    auto* part = app.add_subcommand("partition", "run the balanced-separator search");
    std::string part_in, part_out, part_cfg;
    double part_b = 0.25, part_gamma = 0.01;
    SeparatorConfig cfg;
    std::string part_backend = "rational";
    bool part_timing = false, req_cut = false, req_nocert = false;
    part->add_option("-i,--input", part_in, "edge-list file")->required();
    part->add_option("-b,--balance", part_b, "target balance in (0, 1/2]");
    part->add_option("--gamma", part_gamma, "target conductance in [1/n^2, 1)");
    part->add_option("--seed", cfg.seed, "master seed");
    part->add_option("--backend", part_backend, "rational|lanczos");
    part->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    part->add_option("--config", part_cfg, "key=value config file");
    part->add_option("--alpha-factor", cfg.alpha_factor, "objective threshold factor");
    part->add_option("--c-divisor", cfg.c_divisor, "output balance divisor (c = b/divisor)");
    part->add_option("--jl-constant", cfg.jl_constant, "sketch dimension constant");
    part->add_flag("--dense-oracle", cfg.dense_oracle, "record the exact potential (small n)");
    part->add_flag("--timing", part_timing, "include per-iteration timings in the report");
    part->add_flag("--require-cut", req_cut, "exit 2 unless a balanced cut is found");
    part->add_flag("--require-nocert", req_nocert, "exit 2 unless a certificate is found");
    part->add_option("-o,--output", part_out, "JSON output path (default stdout)");

    // expmv
    auto* expv = app.add_subcommand("expmv", "walk-exponential product on a graph");
    std::string exp_in, exp_out, exp_backend = "rational";
    double exp_tau = 1.0, exp_delta = 1e-8;
    uint64_t exp_seed = 1;
    expv->add_option("-i,--input", exp_in, "edge-list file")->required();
    expv->add_option("--tau", exp_tau, "walk time");
    expv->add_option("--delta", exp_delta, "accuracy target");
    expv->add_option("--backend", exp_backend, "rational|lanczos");
    expv->add_option("--seed", exp_seed, "seed for the probe vector");
    expv->add_option("-o,--output", exp_out, "JSON output path (default stdout)");

    // polyfit
    auto* poly = app.add_subcommand("polyfit", "minimal interpolation degree for exp(-x)");
    double poly_a = 0.0, poly_b = 64.0, poly_delta = 1e-3;
    std::string poly_out;
    poly->add_option("--a", poly_a, "interval left end");
    poly->add_option("--b", poly_b, "interval right end");
    poly->add_option("--delta", poly_delta, "relative error target");
    poly->add_option("-o,--output", poly_out, "JSON output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_type, gen_n, gen_d, gen_cross, gen_p, gen_q, gen_seed, gen_out,
                           gen_json);
        if (part->parsed()) {
            if (!part_cfg.empty()) apply_config_file(part_cfg, cfg);
            if (part->count("--backend")) cfg.backend = parse_backend(part_backend);
            return cmd_partition(part_in, part_b, part_gamma, cfg, part_out, part_timing,
                                 req_cut, req_nocert);
        }
        if (expv->parsed()) return cmd_expmv(exp_in, exp_tau, exp_delta, exp_backend, exp_seed, exp_out);
        if (poly->parsed()) return cmd_polyfit(poly_a, poly_b, poly_delta, poly_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
