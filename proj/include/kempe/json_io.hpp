#pragma once

// JSON views of reports, extension outcomes and traces.

#include <string>

#include <json.hpp>

#include "kempe/extension.hpp"
#include "kempe/verify.hpp"

namespace kempe {

inline nlohmann::json edge_list_json(const Multigraph& g) {
    nlohmann::json out = nlohmann::json::array();
    const int n = g.vertex_count();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int m = g.multiplicity(u, v);
            if (m > 0) out.push_back({u, v, m});
        }
    return out;
}

// One JSONL record per verified (graph, ell, s, t).
inline nlohmann::json report_record(const VerificationReport& report,
                                    const std::string& graph_key_hex) {
    nlohmann::json rec{
        {"graph_key", graph_key_hex},
        {"edge_list", edge_list_json(report.instance.graph)},
        {"ell", report.instance.ell},
        {"s", report.instance.s},
        {"t", report.instance.t},
        {"outcome", verify_outcome_name(report.outcome)},
        {"cliques_tested", report.cliques_tested},
        {"solver_nodes", report.solver_nodes},
        {"ms", report.wall.count()},
    };
    if (report.outcome == VerifyOutcome::Witness) {
        rec["witness_edges"] = report.witness->edge_ids;
        rec["chi_after"] = report.chi_after;
    }
    return rec;
}

inline nlohmann::json trace_step_json(const TraceStep& step) {
    nlohmann::json out{{"kind", trace_kind_name(step.kind)}};
    if (!step.text.empty()) out["text"] = step.text;
    if (!step.edge_colors.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (auto [e, c] : step.edge_colors) pairs.push_back({e, c});
        out["edge_colors"] = pairs;
    }
    if (!step.ints.empty()) out["ints"] = step.ints;
    return out;
}

inline nlohmann::json extension_json(const ExtensionOutcome& outcome) {
    nlohmann::json out{
        {"outcome", outcome.extended ? "extended" : "failed"},
        {"color_limit", outcome.color_limit},
    };
    if (outcome.coloring) {
        out["colors_used"] = outcome.coloring->distinct_colors();
        nlohmann::json assign = nlohmann::json::object();
        for (const auto& [e, c] : outcome.coloring->assignments())
            assign[std::to_string(e)] = c;
        out["coloring"] = assign;
    }
    nlohmann::json steps = nlohmann::json::array();
    for (const TraceStep& step : outcome.trace) steps.push_back(trace_step_json(step));
    out["trace"] = steps;
    return out;
}

}  // namespace kempe
