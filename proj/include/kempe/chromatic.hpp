#pragma once

// Exact chromatic-index solver for multigraphs, with certificates and
// classical bounds. Complete backtracking over edges ordered by descending
// line-graph degree, color-symmetry breaking (a new color index may exceed
// the current maximum by at most one), and per-vertex residual pruning.
// Budget exhaustion is a distinct outcome, never conflated with "no
// coloring".

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kempe/coloring.hpp"
#include "kempe/multigraph.hpp"

namespace kempe {

struct SolverOptions {
    std::uint64_t node_budget = 10'000'000;
};

enum class SolveStatus { Found, NoColoring, BudgetExceeded };

struct SolveResult {
    SolveStatus status = SolveStatus::NoColoring;
    std::optional<EdgeColoring> coloring;
    std::uint64_t nodes = 0;
};

struct ChiResult {
    SolveStatus status = SolveStatus::Found;  // Found or BudgetExceeded
    int value = 0;
    std::optional<EdgeColoring> coloring;
    std::uint64_t nodes = 0;
};

// max(Delta, tau, ceil(|E| / floor(|V|/2))): certified lower bounds on the
// chromatic index (star clique, triangle clique, matching capacity).
inline int lower_bound(const Multigraph& g) {
    GraphStats s = g.stats();
    int bound = std::max(s.max_degree, s.tau);
    if (g.vertex_count() >= 2 && s.edge_count > 0) {
        int cap = g.vertex_count() / 2;
        bound = std::max(bound, (s.edge_count + cap - 1) / cap);
    }
    return bound;
}

inline int shannon_upper(const Multigraph& g) { return 3 * g.stats().max_degree / 2; }

namespace detail {

struct LocalEdge {
    int id;
    int u;
    int v;
};

// Any color class restricted to a vertex set W is a matching there, so a
// k-coloring forces m(W) <= k * floor(|W|/2) for every W. Returns the largest
// ceil(m(W)/floor(|W|/2)) over subsets of the (small) component.
inline int subset_density_bound(const std::vector<LocalEdge>& edges, int nc) {
    if (nc < 2 || nc > 16) return 0;
    std::vector<std::uint32_t> edge_mask(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        edge_mask[i] = (1u << edges[i].u) | (1u << edges[i].v);
    int best = 0;
    for (std::uint32_t sub = 3; sub < (1u << nc); ++sub) {
        int size = __builtin_popcount(sub);
        if (size < 2) continue;
        int m = 0;
        for (auto em : edge_mask)
            if ((em & sub) == em) ++m;
        if (m == 0) continue;
        int cap = size / 2;
        best = std::max(best, (m + cap - 1) / cap);
    }
    return best;
}

struct ComponentSolver {
    const std::vector<LocalEdge>& edges;  // already in search order
    int nc;
    int k;
    std::uint64_t budget;
    std::uint64_t& nodes;

    std::vector<std::uint64_t> used;  // per-vertex color mask
    std::vector<int> rem;             // per-vertex uncolored incident edges
    std::vector<int> unc;             // uncolored multiplicity per vertex pair
    std::vector<int> chosen;          // color per edge position, -1 if none
    std::vector<int> prev_parallel;   // earlier position with the same endpoints
    bool exhausted = false;

    ComponentSolver(const std::vector<LocalEdge>& e, int nc_, int k_, std::uint64_t budget_,
                    std::uint64_t& nodes_)
        : edges(e), nc(nc_), k(k_), budget(budget_), nodes(nodes_) {
        used.assign(nc, 0);
        rem.assign(nc, 0);
        unc.assign(static_cast<std::size_t>(nc) * nc, 0);
        chosen.assign(edges.size(), -1);
        prev_parallel.assign(edges.size(), -1);
        for (const auto& e2 : edges) {
            ++rem[e2.u];
            ++rem[e2.v];
            ++unc[e2.u * nc + e2.v];
            ++unc[e2.v * nc + e2.u];
        }
        for (std::size_t i = 0; i < edges.size(); ++i)
            for (std::size_t j = i + 1; j < edges.size(); ++j)
                if ((edges[i].u == edges[j].u && edges[i].v == edges[j].v) ||
                    (edges[i].u == edges[j].v && edges[i].v == edges[j].u)) {
                    prev_parallel[j] = static_cast<int>(i);
                    break;
                }
    }

    bool vertex_ok(int v) const {
        return rem[v] <= k - __builtin_popcountll(used[v]);
    }

    // Uncolored edges between x and any w need that many colors free at both.
    bool pairs_ok(int x) const {
        for (int w = 0; w < nc; ++w) {
            int m = unc[x * nc + w];
            if (m > 0 && m > k - __builtin_popcountll(used[x] | used[w])) return false;
        }
        return true;
    }

    bool solve(std::size_t pos, int max_used) {
        if (pos == edges.size()) return true;
        const LocalEdge& e = edges[pos];
        std::uint64_t avail = ~(used[e.u] | used[e.v]);
        int limit = std::min(k - 1, max_used + 1);
        // Parallel edges are interchangeable; forcing ascending colors along
        // each bundle removes the permutation symmetry.
        int lo = prev_parallel[pos] >= 0 ? chosen[prev_parallel[pos]] + 1 : 0;
        for (int c = lo; c <= limit; ++c) {
            if (!((avail >> c) & 1)) continue;
            if (++nodes > budget) {
                exhausted = true;
                return false;
            }
            used[e.u] |= std::uint64_t{1} << c;
            used[e.v] |= std::uint64_t{1} << c;
            --rem[e.u];
            --rem[e.v];
            --unc[e.u * nc + e.v];
            --unc[e.v * nc + e.u];
            chosen[pos] = c;
            if (vertex_ok(e.u) && vertex_ok(e.v) && pairs_ok(e.u) && pairs_ok(e.v) &&
                solve(pos + 1, std::max(max_used, c)))
                return true;
            chosen[pos] = -1;
            used[e.u] &= ~(std::uint64_t{1} << c);
            used[e.v] &= ~(std::uint64_t{1} << c);
            ++rem[e.u];
            ++rem[e.v];
            ++unc[e.u * nc + e.v];
            ++unc[e.v * nc + e.u];
            if (exhausted) return false;
        }
        return false;
    }
};

// Component edge lists (only components that have edges), vertices relabeled
// locally; deterministic order.
inline std::vector<std::pair<std::vector<LocalEdge>, int>> edge_components(const Multigraph& g) {
    std::vector<std::pair<std::vector<LocalEdge>, int>> out;
    for (const auto& comp : connected_components(g)) {
        std::vector<int> local(g.vertex_count(), -1);
        for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
        std::vector<LocalEdge> edges;
        for (const Edge& e : g.edges())
            if (local[e.a] >= 0) edges.push_back({e.id, local[e.a], local[e.b]});
        if (!edges.empty()) out.push_back({std::move(edges), static_cast<int>(comp.size())});
    }
    return out;
}

inline void order_for_search(std::vector<LocalEdge>& edges, int nc) {
    std::vector<int> deg(nc, 0);
    std::vector<std::vector<int>> mult(nc, std::vector<int>(nc, 0));
    for (const auto& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
        ++mult[e.u][e.v];
        ++mult[e.v][e.u];
    }
    std::stable_sort(edges.begin(), edges.end(), [&](const LocalEdge& x, const LocalEdge& y) {
        int lx = deg[x.u] + deg[x.v] - mult[x.u][x.v] - 1;
        int ly = deg[y.u] + deg[y.v] - mult[y.u][y.v] - 1;
        if (lx != ly) return lx > ly;
        return x.id < y.id;
    });
}

}  // namespace detail

// A proper total k-edge-coloring if one exists (validated before return),
// otherwise NoColoring; BudgetExceeded when the node cap ran out first.
inline SolveResult chromatic_index_at_most(const Multigraph& g, int k,
                                           SolverOptions opts = {}) {
    if (k < 0) throw std::invalid_argument("negative color count");
    if (k > 64) throw std::invalid_argument("palette too large for this solver (max 64)");
    SolveResult result;
    if (g.edge_count() == 0) {
        result.status = SolveStatus::Found;
        result.coloring = EdgeColoring{};
        return result;
    }
    if (k == 0) {
        result.status = SolveStatus::NoColoring;
        return result;
    }
    EdgeColoring merged;
    for (auto& [edges, nc] : detail::edge_components(g)) {
        int max_deg = 0;
        {
            std::vector<int> deg(nc, 0);
            for (const auto& e : edges) {
                ++deg[e.u];
                ++deg[e.v];
            }
            max_deg = *std::max_element(deg.begin(), deg.end());
        }
        if (max_deg > k || detail::subset_density_bound(edges, nc) > k) {
            result.status = SolveStatus::NoColoring;
            return result;
        }
        detail::order_for_search(edges, nc);
        detail::ComponentSolver solver(edges, nc, k, opts.node_budget, result.nodes);
        bool ok = solver.solve(0, -1);
        if (solver.exhausted) {
            result.status = SolveStatus::BudgetExceeded;
            return result;
        }
        if (!ok) {
            result.status = SolveStatus::NoColoring;
            return result;
        }
        for (std::size_t i = 0; i < edges.size(); ++i) merged.set(edges[i].id, solver.chosen[i]);
    }
    if (!validate(g, merged)) throw std::logic_error("solver produced an improper coloring");
    result.status = SolveStatus::Found;
    result.coloring = std::move(merged);
    return result;
}

// Least k admitting a proper k-edge-coloring. Components are solved
// independently and the maximum is returned; the merged coloring is a
// certificate.
inline ChiResult chromatic_index(const Multigraph& g, SolverOptions opts = {}) {
    ChiResult out;
    out.coloring = EdgeColoring{};
    if (g.edge_count() == 0) return out;

    GraphStats st = g.stats();
    int mu = g.max_multiplicity();
    const int hard_upper = std::min(3 * st.max_degree / 2, st.max_degree + mu);

    for (auto& [edges, nc] : detail::edge_components(g)) {
        std::vector<int> ids;
        ids.reserve(edges.size());
        for (const auto& e : edges) ids.push_back(e.id);
        std::vector<int> others;
        for (const Edge& e : g.edges())
            if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) others.push_back(e.id);
        Multigraph comp = g.remove_edges(others);

        int k = std::max(lower_bound(comp), detail::subset_density_bound(edges, nc));
        while (true) {
            SolverOptions sub = opts;
            if (opts.node_budget <= out.nodes) {
                out.status = SolveStatus::BudgetExceeded;
                return out;
            }
            sub.node_budget = opts.node_budget - out.nodes;
            SolveResult r = chromatic_index_at_most(comp, k, sub);
            out.nodes += r.nodes;
            if (r.status == SolveStatus::BudgetExceeded) {
                out.status = SolveStatus::BudgetExceeded;
                return out;
            }
            if (r.status == SolveStatus::Found) {
                for (const auto& [id, c] : r.coloring->assignments()) out.coloring->set(id, c);
                out.value = std::max(out.value, k);
                break;
            }
            ++k;
            if (k > hard_upper)
                throw std::logic_error("chromatic index exceeded its theoretical upper bound");
        }
    }
    return out;
}

}  // namespace kempe
