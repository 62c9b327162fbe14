#pragma once

// Constructive coloring-extension engine: pivot choice, round-robin edge
// selection at the pivot, palette split into reused missing colors and fresh
// colors, helper bipartite graph with Hall matchings, and Kempe-swap repair
// sequences. Packaged as an attempt to turn a (t+ell-1)-coloring of G minus a
// pivot star selection into an (s+t-2)-coloring of G.
//
// The engine is best effort, not total: a Failed outcome on a graph that
// does admit an (s+t-2)-coloring is acceptable and logged; the exact solver
// stays the ground truth. Every Extended outcome is validated.

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kempe/admissible.hpp"
#include "kempe/chromatic.hpp"
#include "kempe/coloring.hpp"
#include "kempe/multigraph.hpp"

namespace kempe {

struct SolverBudgetExceeded : std::runtime_error {
    SolverBudgetExceeded() : std::runtime_error("solver node budget exceeded") {}
};

// ---------------------------------------------------------------------------
// Pivot selection

struct PivotSelection {
    int pivot = -1;
    std::vector<int> neighbor_order;             // by multiplicity desc, index asc
    std::vector<int> counts;                     // edges picked per neighbor
    std::vector<std::vector<int>> picked;        // picked edge ids per neighbor, asc
    std::vector<int> s_v;                        // all picked edge ids, in pick order
    std::vector<int> support_vertices;           // neighbors with counts >= 1
};

// Max-degree vertex maximizing neighbor count, smallest index on ties.
inline int choose_pivot(const Multigraph& g) {
    if (g.edge_count() == 0) throw std::invalid_argument("choose_pivot on an edgeless graph");
    int best = -1, best_deg = -1, best_nbrs = -1;
    for (int v = 0; v < g.vertex_count(); ++v) {
        int d = g.degree(v);
        if (d == 0) continue;
        int nb = static_cast<int>(g.neighbors(v).size());
        if (d > best_deg || (d == best_deg && nb > best_nbrs)) {
            best = v;
            best_deg = d;
            best_nbrs = nb;
        }
    }
    return best;
}

// Round-robin pick of s edges at v: neighbors ordered by multiplicity
// descending (ties by vertex index), one edge per pass per neighbor with
// edges left, lowest edge id first.
inline PivotSelection select_S_v(const Multigraph& g, int v, int s) {
    int d = g.degree(v);
    if (s < 1 || s > d) throw std::invalid_argument("selection size must be in [1, d(v)]");
    PivotSelection sel;
    sel.pivot = v;
    std::vector<std::pair<int, int>> order;  // (-multiplicity, neighbor)
    for (int u : g.neighbors(v)) order.push_back({-g.multiplicity(u, v), u});
    std::sort(order.begin(), order.end());
    std::vector<std::vector<int>> pools;
    for (const auto& [negm, u] : order) {
        sel.neighbor_order.push_back(u);
        pools.push_back(g.edges_between(u, v));
    }
    sel.counts.assign(sel.neighbor_order.size(), 0);
    sel.picked.assign(sel.neighbor_order.size(), {});
    int taken = 0;
    while (taken < s) {
        bool progressed = false;
        for (std::size_t i = 0; i < pools.size() && taken < s; ++i) {
            if (sel.counts[i] < static_cast<int>(pools[i].size())) {
                int id = pools[i][sel.counts[i]];
                sel.picked[i].push_back(id);
                sel.s_v.push_back(id);
                ++sel.counts[i];
                ++taken;
                progressed = true;
            }
        }
        if (!progressed) throw std::logic_error("select_S_v ran out of edges");
    }
    for (std::size_t i = 0; i < sel.neighbor_order.size(); ++i)
        if (sel.counts[i] >= 1) sel.support_vertices.push_back(sel.neighbor_order[i]);
    return sel;
}

// ---------------------------------------------------------------------------
// Palette split

enum class SplitStrategy { SpreadNeighbors, SingleStar, HalfFill };

inline const char* strategy_name(SplitStrategy s) {
    switch (s) {
        case SplitStrategy::SpreadNeighbors: return "spread";
        case SplitStrategy::SingleStar: return "star";
        case SplitStrategy::HalfFill: return "half";
    }
    return "?";
}

struct SplitInfeasible : std::runtime_error {
    explicit SplitInfeasible(const std::string& why) : std::runtime_error(why) {}
};

struct PaletteSplit {
    int pivot = -1;
    SplitStrategy strategy = SplitStrategy::SpreadNeighbors;
    std::vector<int> s0;                       // uncolored edges, ascending
    std::vector<std::pair<int, int>> t0;       // (edge id, alpha color), alpha order
    std::vector<int> c_colors;                 // missing colors at pivot, one per s0 edge
    int base_size = 0;                         // alphas are base_size, base_size+1, ...
};

namespace detail {

// Fresh colors go to T_0 edges one per distinct neighbor first (neighbor
// order), then ascending edge id.
inline std::vector<int> alpha_order(const PivotSelection& sel, const std::set<int>& t0_edges) {
    std::vector<int> order;
    std::set<int> placed;
    for (const auto& pool : sel.picked)
        for (int id : pool)
            if (t0_edges.count(id)) {
                order.push_back(id);
                placed.insert(id);
                break;
            }
    std::vector<int> rest;
    for (int id : t0_edges)
        if (!placed.count(id)) rest.push_back(id);
    std::sort(rest.begin(), rest.end());
    order.insert(order.end(), rest.begin(), rest.end());
    return order;
}

}  // namespace detail

// Splits the pivot selection into ell+1 edges that will reuse colors missing
// at the pivot (S_0) and the rest, which take fresh colors (T_0). Strategies:
//   SpreadNeighbors - reserve one edge per neighbor for fresh colors, then
//                     pick S_0 among the rest hitting as many distinct
//                     neighbors as possible;
//   SingleStar      - S_0 inside the largest neighbor class;
//   HalfFill        - at least floor(count/2) of each leading class in S_0.
inline PaletteSplit split_palette(const Multigraph& g, const PivotSelection& sel, int ell,
                                  const EdgeColoring& residual, const Palette& base,
                                  SplitStrategy strategy) {
    if (ell < 0) throw std::invalid_argument("ell must be nonnegative");
    const int s = static_cast<int>(sel.s_v.size());
    if (s < ell + 1) throw SplitInfeasible("selection smaller than ell+1");
    std::vector<int> missing = missing_colors(g, residual, sel.pivot, base);
    if (static_cast<int>(missing.size()) < ell + 1)
        throw SplitInfeasible("fewer than ell+1 colors missing at the pivot");

    const std::size_t classes = sel.neighbor_order.size();
    std::vector<int> s0;
    const int alphas = s - ell - 1;

    switch (strategy) {
        case SplitStrategy::SpreadNeighbors: {
            // Pin one edge per nonempty class for fresh colors, while fresh
            // colors last.
            std::set<int> pinned;
            int pins = 0;
            for (std::size_t i = 0; i < classes && pins < alphas; ++i)
                if (!sel.picked[i].empty()) {
                    pinned.insert(sel.picked[i].front());
                    ++pins;
                }
            // Greedy spread over the unpinned edges.
            std::set<int> chosen;
            for (std::size_t i = 0; i < classes && static_cast<int>(chosen.size()) < ell + 1;
                 ++i)
                for (int id : sel.picked[i])
                    if (!pinned.count(id)) {
                        chosen.insert(id);
                        break;
                    }
            for (int id : sel.s_v) {
                if (static_cast<int>(chosen.size()) >= ell + 1) break;
                if (!pinned.count(id)) chosen.insert(id);
            }
            s0.assign(chosen.begin(), chosen.end());
            break;
        }
        case SplitStrategy::SingleStar: {
            std::size_t top = 0;
            while (top < classes && sel.picked[top].empty()) ++top;
            if (top == classes || static_cast<int>(sel.picked[top].size()) < ell + 1)
                throw SplitInfeasible("largest class smaller than ell+1");
            s0.assign(sel.picked[top].begin(), sel.picked[top].begin() + ell + 1);
            break;
        }
        case SplitStrategy::HalfFill: {
            std::set<int> chosen;
            if (ell == 0) {
                chosen.insert(sel.picked[0].front());
            } else {
                if (sel.counts[0] == ell) {
                    chosen.insert(sel.picked[0].begin(), sel.picked[0].end());
                } else {
                    std::size_t i0 = 0;
                    int prefix = 0;
                    while (i0 < classes && prefix + sel.counts[i0] < ell)
                        prefix += sel.counts[i0++];
                    if (i0 == classes) throw SplitInfeasible("classes exhausted before ell");
                    for (std::size_t i = 0; i <= i0; ++i) {
                        int take = sel.counts[i] / 2;
                        for (int j = 0; j < take; ++j) chosen.insert(sel.picked[i][j]);
                    }
                    for (std::size_t i = 0; i <= i0 && static_cast<int>(chosen.size()) < ell;
                         ++i)
                        for (int id : sel.picked[i]) {
                            if (static_cast<int>(chosen.size()) >= ell) break;
                            chosen.insert(id);
                        }
                }
                // One more edge to pair every fresh color with a T_0 edge.
                for (int id : sel.s_v) {
                    if (static_cast<int>(chosen.size()) >= ell + 1) break;
                    chosen.insert(id);
                }
            }
            s0.assign(chosen.begin(), chosen.end());
            break;
        }
    }
    if (static_cast<int>(s0.size()) != ell + 1)
        throw SplitInfeasible("could not assemble an S_0 of size ell+1");

    PaletteSplit split;
    split.pivot = sel.pivot;
    split.strategy = strategy;
    split.s0 = s0;
    split.base_size = base.base_size();
    split.c_colors.assign(missing.begin(), missing.begin() + ell + 1);
    std::set<int> t0_edges(sel.s_v.begin(), sel.s_v.end());
    for (int id : s0) t0_edges.erase(id);
    std::vector<int> order = detail::alpha_order(sel, t0_edges);
    assert(static_cast<int>(order.size()) == alphas);
    for (int j = 0; j < alphas; ++j) split.t0.push_back({order[j], split.base_size + j});
    return split;
}

// ---------------------------------------------------------------------------
// Helper bipartite graph and Hall matchings

struct HelperBipartite {
    std::vector<int> left;                // S_0 edge ids
    std::vector<int> right;               // T_0 edge ids, alpha order
    std::vector<std::vector<bool>> adj;   // adj[i][j]
};

// left i ~ right j iff no edge colored c_i joins the non-pivot endpoints of
// e_i and e_alpha_j under the current coloring.
inline HelperBipartite build_helper(const Multigraph& g, const EdgeColoring& coloring,
                                    const PaletteSplit& split) {
    HelperBipartite h;
    h.left = split.s0;
    for (const auto& [id, alpha] : split.t0) h.right.push_back(id);
    auto other_end = [&](int edge_id) {
        const Edge& e = g.edge(edge_id);
        return e.a == split.pivot ? e.b : e.a;
    };
    h.adj.assign(h.left.size(), std::vector<bool>(h.right.size(), true));
    for (std::size_t i = 0; i < h.left.size(); ++i) {
        int x = other_end(h.left[i]);
        int c = split.c_colors[i];
        for (std::size_t j = 0; j < h.right.size(); ++j) {
            int y = other_end(h.right[j]);
            if (x == y) continue;  // no loopless edge can join x with itself
            for (int id : g.edges_between(x, y))
                if (coloring.color_of(id) == std::optional<int>(c)) {
                    h.adj[i][j] = false;
                    break;
                }
        }
    }
    return h;
}

struct HallMatching {
    std::vector<int> right_for_left;  // index into right, per left vertex
};

struct HallViolator {
    std::vector<int> left_indices;  // inclusion-minimal subset with |N(W)| < |W|
};

// Saturating matching of the left side via augmenting paths, or the smallest
// (by size, then lexicographic) left subset violating Hall's condition.
inline std::variant<HallMatching, HallViolator> hall_matching(const HelperBipartite& t) {
    const int nl = static_cast<int>(t.left.size());
    const int nr = static_cast<int>(t.right.size());
    std::vector<int> match_right(nr, -1);
    std::vector<int> match_left(nl, -1);
    auto augment = [&](auto&& self, int i, std::vector<bool>& seen) -> bool {
        for (int j = 0; j < nr; ++j) {
            if (!t.adj[i][j] || seen[j]) continue;
            seen[j] = true;
            if (match_right[j] < 0 || self(self, match_right[j], seen)) {
                match_right[j] = i;
                match_left[i] = j;
                return true;
            }
        }
        return false;
    };
    bool saturated = true;
    for (int i = 0; i < nl; ++i) {
        std::vector<bool> seen(nr, false);
        if (!augment(augment, i, seen)) saturated = false;
    }
    if (saturated) return HallMatching{match_left};

    if (nl > 20) throw std::invalid_argument("hall_matching violator search capped at 20");
    std::vector<std::vector<int>> by_size(nl + 1);
    for (int mask = 1; mask < (1 << nl); ++mask)
        by_size[__builtin_popcount(mask)].push_back(mask);
    for (int size = 1; size <= nl; ++size)
        for (int mask : by_size[size]) {
            std::set<int> nbrs;
            for (int i = 0; i < nl; ++i)
                if ((mask >> i) & 1)
                    for (int j = 0; j < nr; ++j)
                        if (t.adj[i][j]) nbrs.insert(j);
            if (static_cast<int>(nbrs.size()) < size) {
                HallViolator w;
                for (int i = 0; i < nl; ++i)
                    if ((mask >> i) & 1) w.left_indices.push_back(i);
                return w;
            }
        }
    throw std::logic_error("no saturating matching and no Hall violator");
}

struct RepairError : std::runtime_error {
    explicit RepairError(const std::string& why) : std::runtime_error(why) {}
};

// Colors every S_0 edge with its missing color; whenever that color sits on
// an edge at the non-pivot endpoint, that blocker is recolored with the fresh
// color of the matched T_0 edge. Validates before returning.
inline EdgeColoring apply_matching_repair(const Multigraph& g, const EdgeColoring& coloring,
                                          const PaletteSplit& split,
                                          const HallMatching& matching) {
    EdgeColoring out = coloring;
    for (std::size_t i = 0; i < split.s0.size(); ++i) {
        int e_i = split.s0[i];
        int c_i = split.c_colors[i];
        const Edge& e = g.edge(e_i);
        int x = e.a == split.pivot ? e.b : e.a;
        std::optional<int> blocker;
        for (int id : g.edges_at(x))
            if (id != e_i && out.color_of(id) == std::optional<int>(c_i)) {
                blocker = id;
                break;
            }
        if (blocker) {
            int j = matching.right_for_left[i];
            if (j < 0) throw RepairError("matching does not saturate S_0");
            out.set(*blocker, split.t0[static_cast<std::size_t>(j)].second);
        }
        out.set(e_i, c_i);
    }
    if (!validate(g, out)) throw RepairError("matching repair produced an improper coloring");
    return out;
}

// Colors of the palette absent from the pivot's colored edges and from the
// edges between x and y, ascending.
inline std::vector<int> available_pair_colors(const Multigraph& g, const EdgeColoring& coloring,
                                              int pivot, int x, int y, const Palette& palette) {
    std::set<int> present;
    for (int id : g.edges_at(pivot))
        if (auto c = coloring.color_of(id)) present.insert(*c);
    for (int id : g.edges_between(x, y))
        if (auto c = coloring.color_of(id)) present.insert(*c);
    std::vector<int> out;
    for (int c : palette.colors)
        if (!present.count(c)) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Extension attempt with a replayable trace

struct TraceStep {
    enum class Kind {
        Pivot,
        Selection,
        ResidualSolved,
        StrategyStart,
        AlphaAssign,
        ChooseColors,
        HelperBuilt,
        MatchingFound,
        HallViolation,
        Assign,
        Recolor,
        KempeSwap,
        GreedyAssign,
        FullRecolor,
        Note,
        StrategyFailed,
        Extended,
    };
    Kind kind;
    std::string text;
    std::vector<std::pair<int, int>> edge_colors;  // applied on replay
    std::vector<int> ints;
};

inline const char* trace_kind_name(TraceStep::Kind k) {
    switch (k) {
        case TraceStep::Kind::Pivot: return "pivot";
        case TraceStep::Kind::Selection: return "selection";
        case TraceStep::Kind::ResidualSolved: return "residual_solved";
        case TraceStep::Kind::StrategyStart: return "strategy_start";
        case TraceStep::Kind::AlphaAssign: return "alpha_assign";
        case TraceStep::Kind::ChooseColors: return "choose_colors";
        case TraceStep::Kind::HelperBuilt: return "helper_built";
        case TraceStep::Kind::MatchingFound: return "matching_found";
        case TraceStep::Kind::HallViolation: return "hall_violation";
        case TraceStep::Kind::Assign: return "assign";
        case TraceStep::Kind::Recolor: return "recolor";
        case TraceStep::Kind::KempeSwap: return "kempe_swap";
        case TraceStep::Kind::GreedyAssign: return "greedy_assign";
        case TraceStep::Kind::FullRecolor: return "full_recolor";
        case TraceStep::Kind::Note: return "note";
        case TraceStep::Kind::StrategyFailed: return "strategy_failed";
        case TraceStep::Kind::Extended: return "extended";
    }
    return "?";
}

using ExtensionTrace = std::vector<TraceStep>;

// Replays recoloring steps: ResidualSolved fixes the base coloring,
// StrategyStart resets to it, FullRecolor replaces the assignment wholesale,
// and every other color-bearing step applies its (edge, color) pairs.
inline EdgeColoring replay_trace(const ExtensionTrace& trace) {
    EdgeColoring base, work;
    for (const TraceStep& step : trace) {
        switch (step.kind) {
            case TraceStep::Kind::ResidualSolved:
                base = EdgeColoring{};
                for (auto [e, c] : step.edge_colors) base.set(e, c);
                work = base;
                break;
            case TraceStep::Kind::StrategyStart:
                work = base;
                break;
            case TraceStep::Kind::FullRecolor:
                work = EdgeColoring{};
                for (auto [e, c] : step.edge_colors) work.set(e, c);
                break;
            case TraceStep::Kind::AlphaAssign:
            case TraceStep::Kind::Assign:
            case TraceStep::Kind::Recolor:
            case TraceStep::Kind::KempeSwap:
            case TraceStep::Kind::GreedyAssign:
                for (auto [e, c] : step.edge_colors) work.set(e, c);
                break;
            default:
                break;
        }
    }
    return work;
}

struct ExtensionOutcome {
    bool extended = false;
    std::optional<EdgeColoring> coloring;  // proper, at most s+t-2 colors
    int color_limit = 0;
    ExtensionTrace trace;
};

struct ExtensionOptions {
    std::vector<SplitStrategy> strategy_order{SplitStrategy::SpreadNeighbors,
                                              SplitStrategy::SingleStar,
                                              SplitStrategy::HalfFill};
    SolverOptions solver;
};

namespace detail {

struct ExtensionRun {
    const Multigraph& g;
    int s, t, ell;
    ExtensionOptions opts;
    ExtensionTrace trace;

    int other_end(int pivot, int edge_id) const {
        const Edge& e = g.edge(edge_id);
        return e.a == pivot ? e.b : e.a;
    }

    void note(const std::string& text) {
        trace.push_back({TraceStep::Kind::Note, text, {}, {}});
    }

    std::optional<int> color_holder_at(const EdgeColoring& w, int vertex, int color,
                                       int skip) const {
        for (int id : g.edges_at(vertex))
            if (id != skip && w.color_of(id) == std::optional<int>(color)) return id;
        return std::nullopt;
    }

    // One blocked S_0 edge: direct color, matched repair against the live
    // coloring, then Kempe swaps at the blocked endpoint.
    bool resolve_edge(EdgeColoring& work, const PaletteSplit& split, std::size_t i,
                      const Palette& base) {
        const int e_i = split.s0[i];
        const int c_i = split.c_colors[i];
        const int x = other_end(split.pivot, e_i);

        if (!color_holder_at(work, x, c_i, e_i)) {
            work.set(e_i, c_i);
            trace.push_back({TraceStep::Kind::Assign, "", {{e_i, c_i}}, {}});
            return true;
        }

        // Matched repair, re-evaluated against the current coloring.
        for (std::size_t j = 0; j < split.t0.size(); ++j) {
            const auto [ej, alpha] = split.t0[j];
            int y = other_end(split.pivot, ej);
            bool adjacent = true;
            if (x != y)
                for (int id : g.edges_between(x, y))
                    if (work.color_of(id) == std::optional<int>(c_i)) {
                        adjacent = false;
                        break;
                    }
            if (!adjacent) continue;
            auto blocker = color_holder_at(work, x, c_i, e_i);
            EdgeColoring cand = work;
            cand.set(*blocker, alpha);
            cand.set(e_i, c_i);
            if (validate(g, cand)) {
                trace.push_back({TraceStep::Kind::Recolor, "", {{*blocker, alpha}}, {}});
                trace.push_back({TraceStep::Kind::Assign, "", {{e_i, c_i}}, {}});
                work = std::move(cand);
                return true;
            }
        }

        // Kempe fallback: swap the two-color chain at x for a color available
        // against some other pivot neighbor, then clear any surviving holder
        // of c_i at x with a fresh color.
        std::set<int> tried;
        std::vector<int> partners;
        for (int u : g.neighbors(x))
            if (u != split.pivot) partners.push_back(u);
        for (int y : partners) {
            for (int alpha : available_pair_colors(g, work, split.pivot, x, y, base)) {
                if (alpha == c_i || tried.count(alpha)) continue;
                tried.insert(alpha);
                KempeComponent comp = kempe_component(g, work, c_i, alpha, x);
                if (comp.empty()) continue;
                EdgeColoring swapped = kempe_swap(g, work, comp);
                TraceStep swap_step{TraceStep::Kind::KempeSwap, "", {}, {c_i, alpha, x}};
                for (int id : comp.edge_ids) swap_step.edge_colors.push_back({id, *swapped.color_of(id)});
                auto survivor = color_holder_at(swapped, x, c_i, e_i);
                if (!survivor) {
                    EdgeColoring cand = swapped;
                    cand.set(e_i, c_i);
                    if (validate(g, cand)) {
                        trace.push_back(std::move(swap_step));
                        trace.push_back({TraceStep::Kind::Assign, "", {{e_i, c_i}}, {}});
                        work = std::move(cand);
                        return true;
                    }
                    continue;
                }
                const Edge& f = g.edge(*survivor);
                for (const auto& [ek, alpha_k] : split.t0) {
                    const Edge& ea = g.edge(ek);
                    if (ea.a == f.a || ea.a == f.b || ea.b == f.a || ea.b == f.b) continue;
                    EdgeColoring cand = swapped;
                    cand.set(*survivor, alpha_k);
                    cand.set(e_i, c_i);
                    if (validate(g, cand)) {
                        trace.push_back(std::move(swap_step));
                        trace.push_back({TraceStep::Kind::Recolor, "", {{*survivor, alpha_k}}, {}});
                        trace.push_back({TraceStep::Kind::Assign, "", {{e_i, c_i}}, {}});
                        work = std::move(cand);
                        return true;
                    }
                }
            }
        }
        return false;
    }
};

}  // namespace detail

// Tries to build a proper coloring of g with at most s+t-2 colors by the
// selection / split / matching / swap pipeline; falls back to a relaxed
// completion when the strict residual bound cannot be met. Throws
// SolverBudgetExceeded if the exact solver runs out of nodes.
inline ExtensionOutcome attempt_extension(const Multigraph& g, int s, int t, int ell,
                                          ExtensionOptions opts = {}) {
    if (ell < 0 || s > t || !admissible_pair(s, t, ell))
        throw std::invalid_argument("inadmissible (s, t, ell)");
    if (s + t - 1 <= g.stats().omega_prime)
        throw std::invalid_argument("s+t-1 must exceed omega'(G)");

    detail::ExtensionRun run{g, s, t, ell, std::move(opts), {}};
    ExtensionOutcome out;
    out.color_limit = s + t - 2;

    const int pivot = choose_pivot(g);
    run.trace.push_back({TraceStep::Kind::Pivot, "", {}, {pivot}});
    if (s > g.degree(pivot)) {
        run.note("selection size exceeds the pivot degree");
        out.trace = std::move(run.trace);
        return out;
    }
    PivotSelection sel = select_S_v(g, pivot, s);
    {
        TraceStep st{TraceStep::Kind::Selection, "", {}, {}};
        st.ints = sel.s_v;
        run.trace.push_back(std::move(st));
    }
    Multigraph residual = g.remove_edges(sel.s_v);
    const Palette base = Palette::first(t + ell - 1);

    auto record_assignment = [](const EdgeColoring& c, TraceStep::Kind kind,
                                const std::string& text) {
        TraceStep st{kind, text, {}, {}};
        for (const auto& [e, col] : c.assignments()) st.edge_colors.push_back({e, col});
        return st;
    };

    SolveResult strict = chromatic_index_at_most(residual, t + ell - 1, run.opts.solver);
    if (strict.status == SolveStatus::BudgetExceeded) throw SolverBudgetExceeded{};
    if (strict.status == SolveStatus::Found) {
        const EdgeColoring& phi = *strict.coloring;
        run.trace.push_back(record_assignment(phi, TraceStep::Kind::ResidualSolved, ""));
        for (SplitStrategy strat : run.opts.strategy_order) {
            run.trace.push_back(
                {TraceStep::Kind::StrategyStart, strategy_name(strat), {}, {}});
            PaletteSplit split;
            try {
                split = split_palette(g, sel, ell, phi, base, strat);
            } catch (const SplitInfeasible& e) {
                run.note(std::string("split infeasible: ") + e.what());
                continue;
            }
            EdgeColoring hat = phi;
            TraceStep alpha_step{TraceStep::Kind::AlphaAssign, "", {}, {}};
            for (const auto& [id, alpha] : split.t0) {
                hat.set(id, alpha);
                alpha_step.edge_colors.push_back({id, alpha});
            }
            run.trace.push_back(std::move(alpha_step));
            run.trace.push_back(
                {TraceStep::Kind::ChooseColors, "", {}, split.c_colors});

            HelperBipartite helper = build_helper(g, hat, split);
            {
                TraceStep st{TraceStep::Kind::HelperBuilt, "", {}, {}};
                for (std::size_t i = 0; i < helper.left.size(); ++i)
                    for (std::size_t j = 0; j < helper.right.size(); ++j)
                        if (helper.adj[i][j])
                            st.edge_colors.push_back({helper.left[i], helper.right[j]});
                run.trace.push_back(std::move(st));
            }
            auto hall = hall_matching(helper);
            if (auto* m = std::get_if<HallMatching>(&hall)) {
                TraceStep st{TraceStep::Kind::MatchingFound, "", {}, {}};
                for (std::size_t i = 0; i < helper.left.size(); ++i)
                    st.edge_colors.push_back(
                        {helper.left[i], helper.right[static_cast<std::size_t>(m->right_for_left[i])]});
                run.trace.push_back(std::move(st));
                try {
                    EdgeColoring repaired = apply_matching_repair(g, hat, split, *m);
                    // Record the repair as replayable steps (diff in id order).
                    for (const auto& [e, c] : repaired.assignments()) {
                        auto before = hat.color_of(e);
                        if (!before)
                            run.trace.push_back({TraceStep::Kind::Assign, "", {{e, c}}, {}});
                        else if (*before != c)
                            run.trace.push_back({TraceStep::Kind::Recolor, "", {{e, c}}, {}});
                    }
                    run.trace.push_back({TraceStep::Kind::Extended, "", {}, {}});
                    out.extended = true;
                    out.coloring = std::move(repaired);
                    out.trace = std::move(run.trace);
                    return out;
                } catch (const RepairError& e) {
                    run.note(std::string("repair failed: ") + e.what());
                }
            } else {
                auto& w = std::get<HallViolator>(hall);
                TraceStep st{TraceStep::Kind::HallViolation, "", {}, w.left_indices};
                run.trace.push_back(std::move(st));
            }

            // Sequential resolution with Kempe fallbacks.
            EdgeColoring work = hat;
            bool ok = true;
            for (std::size_t i = 0; i < split.s0.size(); ++i)
                if (!run.resolve_edge(work, split, i, base)) {
                    run.trace.push_back({TraceStep::Kind::StrategyFailed,
                                         "blocked on edge " + std::to_string(split.s0[i]),
                                         {},
                                         {split.s0[i]}});
                    ok = false;
                    break;
                }
            if (ok && validate(g, work) && work.distinct_colors() <= out.color_limit) {
                run.trace.push_back({TraceStep::Kind::Extended, "", {}, {}});
                out.extended = true;
                out.coloring = std::move(work);
                out.trace = std::move(run.trace);
                return out;
            }
        }
    } else {
        run.note("residual needs more than t+ell-1 colors");
    }

    // Relaxed completion: color the residual within the full budget of
    // s+t-2 colors and finish the selection by exhaustive completion.
    SolveResult relaxed = chromatic_index_at_most(residual, s + t - 2, run.opts.solver);
    if (relaxed.status == SolveStatus::BudgetExceeded) throw SolverBudgetExceeded{};
    if (relaxed.status == SolveStatus::Found) {
        run.trace.push_back(
            record_assignment(*relaxed.coloring, TraceStep::Kind::ResidualSolved, "relaxed"));
        EdgeColoring work = *relaxed.coloring;
        std::vector<int> todo = sel.s_v;
        std::sort(todo.begin(), todo.end());
        std::vector<int> chosen(todo.size(), -1);
        auto dfs = [&](auto&& self, std::size_t pos) -> bool {
            if (pos == todo.size()) return true;
            const Edge& e = g.edge(todo[pos]);
            for (int c = 0; c <= out.color_limit - 1; ++c) {
                bool free = true;
                for (int id : g.edges_at(e.a))
                    if (id != todo[pos] && work.color_of(id) == std::optional<int>(c)) {
                        free = false;
                        break;
                    }
                if (free)
                    for (int id : g.edges_at(e.b))
                        if (id != todo[pos] && work.color_of(id) == std::optional<int>(c)) {
                            free = false;
                            break;
                        }
                if (!free) continue;
                work.set(todo[pos], c);
                chosen[pos] = c;
                if (self(self, pos + 1)) return true;
                work.unset(todo[pos]);
                chosen[pos] = -1;
            }
            return false;
        };
        if (dfs(dfs, 0)) {
            TraceStep st{TraceStep::Kind::GreedyAssign, "", {}, {}};
            for (std::size_t i = 0; i < todo.size(); ++i) st.edge_colors.push_back({todo[i], chosen[i]});
            run.trace.push_back(std::move(st));
            run.trace.push_back({TraceStep::Kind::Extended, "", {}, {}});
            out.extended = true;
            out.coloring = std::move(work);
            out.trace = std::move(run.trace);
            return out;
        }
        run.note("relaxed completion blocked");
    }

    SolveResult full = chromatic_index_at_most(g, s + t - 2, run.opts.solver);
    if (full.status == SolveStatus::BudgetExceeded) throw SolverBudgetExceeded{};
    if (full.status == SolveStatus::Found) {
        run.trace.push_back(
            record_assignment(*full.coloring, TraceStep::Kind::FullRecolor, ""));
        run.trace.push_back({TraceStep::Kind::Extended, "", {}, {}});
        out.extended = true;
        out.coloring = std::move(*full.coloring);
        out.trace = std::move(run.trace);
        return out;
    }

    run.trace.push_back(
        {TraceStep::Kind::StrategyFailed, "no strategy produced an extension", {}, {}});
    out.trace = std::move(run.trace);
    return out;
}

}  // namespace kempe
