#pragma once

// Explicit line-graph construction, an exhaustive max-clique oracle, and
// structured enumeration of line-graph cliques via their supports (stars and
// triangles).

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kempe/multigraph.hpp"

namespace kempe {

// Simple undirected graph, adjacency-matrix backed. Capped at 64 vertices,
// which covers every line graph this toolkit builds.
class SimpleGraph {
public:
    explicit SimpleGraph(int n = 0) : n_(n), rows_(n, 0) {
        if (n < 0 || n > 64) throw std::invalid_argument("SimpleGraph supports 0..64 vertices");
    }

    int vertex_count() const { return n_; }

    void add_edge(int u, int v) {
        check(u);
        check(v);
        if (u == v) throw std::invalid_argument("SimpleGraph is irreflexive");
        rows_[u] |= (std::uint64_t{1} << v);
        rows_[v] |= (std::uint64_t{1} << u);
    }

    bool adjacent(int u, int v) const {
        check(u);
        check(v);
        return (rows_[u] >> v) & 1;
    }

    std::uint64_t row(int v) const {
        check(v);
        return rows_[v];
    }

    int edge_count() const {
        int total = 0;
        for (auto r : rows_) total += __builtin_popcountll(r);
        return total / 2;
    }

private:
    int n_;
    std::vector<std::uint64_t> rows_;

    void check(int v) const {
        if (v < 0 || v >= n_) throw std::out_of_range("SimpleGraph vertex out of range");
    }
};

// One line-graph vertex per edge id (in ascending id order); two vertices are
// adjacent iff the edges share an endpoint in g.
inline SimpleGraph build_line_graph(const Multigraph& g) {
    const auto& edges = g.edges();
    if (edges.size() > 64) throw std::invalid_argument("line graph exceeds 64 vertices");
    SimpleGraph lg(static_cast<int>(edges.size()));
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const Edge& e = edges[i];
            const Edge& f = edges[j];
            if (e.a == f.a || e.a == f.b || e.b == f.a || e.b == f.b)
                lg.add_edge(static_cast<int>(i), static_cast<int>(j));
        }
    return lg;
}

// Exact maximum clique size by exhaustive branch and bound. Oracle scale:
// at most 24 vertices.
inline int max_clique_bruteforce(const SimpleGraph& h) {
    const int n = h.vertex_count();
    if (n > 24) throw std::invalid_argument("max_clique_bruteforce capped at 24 vertices");
    if (n == 0) return 0;
    int best = 0;
    // expand(current clique size, candidate set)
    auto expand = [&](auto&& self, int size, std::uint64_t cand) -> void {
        if (size + __builtin_popcountll(cand) <= best) return;
        if (!cand) {
            best = std::max(best, size);
            return;
        }
        while (cand) {
            if (size + __builtin_popcountll(cand) <= best) return;
            int v = __builtin_ctzll(cand);
            cand &= cand - 1;
            self(self, size + 1, cand & h.row(v));
        }
        best = std::max(best, size);
    };
    std::uint64_t all = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    expand(expand, 0, all);
    return best;
}

// A maximal edge set whose members are pairwise adjacent in L(G): either the
// full star E(v) at a vertex, or the full edge set among a triangle's three
// vertices. Every clique of L(G) is a subset of some support.
struct CliqueSupport {
    enum class Kind { Star, Triangle };
    Kind kind = Kind::Star;
    int center = -1;                     // star
    std::array<int, 3> triple{-1, -1, -1};  // triangle
    std::vector<int> edge_ids;           // ascending
};

struct Clique {
    CliqueSupport support;
    std::vector<int> edge_ids;  // ascending subset of support.edge_ids
    int size = 0;
};

// All maximal supports: stars first (descending degree, ties by center
// index), then triangles in lexicographic triple order. This is also the
// search order used by the verification module.
inline std::vector<CliqueSupport> clique_supports(const Multigraph& g) {
    std::vector<CliqueSupport> out;
    std::vector<std::pair<int, int>> stars;  // (-degree, vertex)
    for (int v = 0; v < g.vertex_count(); ++v) {
        int d = g.degree(v);
        if (d >= 1) stars.push_back({-d, v});
    }
    std::sort(stars.begin(), stars.end());
    for (const auto& [negd, v] : stars) {
        CliqueSupport s;
        s.kind = CliqueSupport::Kind::Star;
        s.center = v;
        s.edge_ids = g.edges_at(v);
        out.push_back(std::move(s));
    }
    for (const auto& tri : g.triangles()) {
        CliqueSupport s;
        s.kind = CliqueSupport::Kind::Triangle;
        s.triple = tri;
        std::vector<int> ids = g.edges_between(tri[0], tri[1]);
        auto more = g.edges_between(tri[1], tri[2]);
        ids.insert(ids.end(), more.begin(), more.end());
        more = g.edges_between(tri[0], tri[2]);
        ids.insert(ids.end(), more.begin(), more.end());
        std::sort(ids.begin(), ids.end());
        s.edge_ids = std::move(ids);
        out.push_back(std::move(s));
    }
    return out;
}

// Streams every clique of size s exactly once: supports in clique_supports
// order, s-subsets of each support in lexicographic edge-id order. A subset
// contained in several supports is owned by the first support containing it,
// so no global seen-set is needed. Lazy: callers can stop at the first hit.
class CliqueStream {
public:
    CliqueStream(const Multigraph& g, int s) : graph_(g), size_(s) {
        if (s < 1) throw std::invalid_argument("clique size must be >= 1");
        supports_ = clique_supports(graph_);
        advance_support(0);
    }

    std::optional<Clique> next() {
        while (support_idx_ < supports_.size()) {
            const CliqueSupport& sup = supports_[support_idx_];
            if (!combo_done_) {
                std::vector<int> subset(static_cast<std::size_t>(size_));
                for (int i = 0; i < size_; ++i)
                    subset[i] = sup.edge_ids[static_cast<std::size_t>(combo_[i])];
                bool mine = owner_index(subset) == support_idx_;
                step_combo();
                if (mine) {
                    Clique q;
                    q.support = sup;
                    q.edge_ids = std::move(subset);
                    q.size = size_;
                    return q;
                }
            } else {
                advance_support(support_idx_ + 1);
            }
        }
        return std::nullopt;
    }

    std::vector<Clique> all() {
        std::vector<Clique> out;
        while (auto q = next()) out.push_back(std::move(*q));
        return out;
    }

private:
    Multigraph graph_;
    int size_;
    std::vector<CliqueSupport> supports_;
    std::size_t support_idx_ = 0;
    std::vector<int> combo_;  // positions into the current support's edge list
    bool combo_done_ = true;

    void advance_support(std::size_t from) {
        support_idx_ = from;
        while (support_idx_ < supports_.size() &&
               static_cast<int>(supports_[support_idx_].edge_ids.size()) < size_)
            ++support_idx_;
        if (support_idx_ < supports_.size()) {
            combo_.resize(static_cast<std::size_t>(size_));
            for (int i = 0; i < size_; ++i) combo_[i] = i;
            combo_done_ = false;
        } else {
            combo_done_ = true;
        }
    }

    void step_combo() {
        const int m = static_cast<int>(supports_[support_idx_].edge_ids.size());
        int i = size_ - 1;
        while (i >= 0 && combo_[i] == m - size_ + i) --i;
        if (i < 0) {
            combo_done_ = true;
            return;
        }
        ++combo_[i];
        for (int j = i + 1; j < size_; ++j) combo_[j] = combo_[j - 1] + 1;
    }

    std::size_t owner_index(const std::vector<int>& subset) const {
        for (std::size_t k = 0; k < supports_.size(); ++k) {
            const auto& ids = supports_[k].edge_ids;
            if (static_cast<int>(ids.size()) < size_) continue;
            if (std::includes(ids.begin(), ids.end(), subset.begin(), subset.end())) return k;
        }
        return supports_.size();
    }
};

inline CliqueStream cliques_of_size(const Multigraph& g, int s) { return CliqueStream(g, s); }

}  // namespace kempe
