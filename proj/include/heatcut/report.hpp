#pragma once

#include <string>

#include "heatcut/graph.hpp"
#include "heatcut/json_writer.hpp"
#include "heatcut/partition.hpp"

namespace heatcut {

inline Json cut_to_json(const Cut& c) {
    Json side = Json::array();
    for (int v : c.side) side.push_back(v);
    Json j = Json::object();
    j.set("side", std::move(side));
    j.set("conductance", c.conductance);
    j.set("balance", c.balance);
    j.set("boundary", c.boundary);
    j.set("vol", c.vol);
    return j;
}

// The partition run report. Timings are left out unless requested so that
// identical seeded runs serialize byte-identically.
inline Json partition_report(const Graph& g, const std::string& input, double b, double gamma,
                             const SeparatorConfig& cfg, const PartitionResult& res,
                             bool timing = false) {
    Json j = Json::object();
    j.set("schema", 1);
    j.set("command", "partition");
    if (!input.empty()) j.set("input", input);
    j.set("n", g.n());
    j.set("m", g.m());
    j.set("b", b);
    j.set("gamma", gamma);
    j.set("seed", cfg.seed);
    j.set("backend", cfg.backend == ExpmvBackend::Rational ? "rational" : "lanczos");
    Json cfgj = Json::object();
    cfgj.set("alpha_factor", cfg.alpha_factor);
    cfgj.set("c_divisor", cfg.c_divisor);
    cfgj.set("jl_constant", cfg.jl_constant);
    j.set("config", std::move(cfgj));
    Json iters = Json::array();
    for (const auto& rec : res.trace) {
        Json it = Json::object();
        it.set("t", rec.t);
        it.set("psi", rec.psi);
        if (rec.psi_dense) it.set("psi_dense", *rec.psi_dense);
        it.set("case", rec.case_taken);
        if (rec.cut) it.set("cut", cut_to_json(*rec.cut));
        if (timing) it.set("millis", rec.millis);
        iters.push_back(std::move(it));
    }
    j.set("iterations", std::move(iters));
    const char* kind = res.kind == PartitionResult::Kind::BalancedCut ? "balanced_cut"
                       : res.kind == PartitionResult::Kind::NoCert    ? "no_cert"
                                                                      : "fail";
    j.set("result", kind);
    if (res.cut) j.set("cut", cut_to_json(*res.cut));
    j.set("final_psi", res.final_psi);
    j.set("iterations_run", res.iterations);
    if (!res.diagnostic.empty()) j.set("diagnostic", res.diagnostic);
    return j;
}

}  // namespace heatcut
