#pragma once

// Loopless undirected multigraph with stable edge identities.
//
// Values are immutable after construction: every mutating operation returns
// a new graph. Edge ids are dense integers assigned in construction order
// and survive removal of other edges, so searches can refer to edges of a
// subgraph by the parent graph's ids.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kempe {

struct Edge {
    int id;
    int a;
    int b;
};

inline bool operator==(const Edge& x, const Edge& y) {
    return x.id == y.id && x.a == y.a && x.b == y.b;
}

struct GraphStats {
    int max_degree = 0;
    int tau = 0;          // max of m(uv)+m(vw)+m(uw) over triangles, 0 if none
    int omega_prime = 0;  // max(tau, max_degree)
    int edge_count = 0;
};

class Multigraph {
public:
    Multigraph() = default;

    // Builds a graph from (u, v, multiplicity) triples. Edge ids are assigned
    // in input order, multiplicity copies consecutively.
    static Multigraph from_edge_list(const std::vector<std::array<int, 3>>& pairs,
                                     std::optional<int> vertex_count = std::nullopt) {
        Multigraph g;
        int max_vertex = -1;
        int next_id = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto [u, v, m] = pairs[i];
            if (u < 0 || v < 0)
                throw std::invalid_argument("negative vertex index in edge list entry " +
                                            std::to_string(i));
            if (u == v)
                throw std::invalid_argument("loop at vertex " + std::to_string(u) +
                                            " in edge list entry " + std::to_string(i));
            if (m < 1)
                throw std::invalid_argument("multiplicity < 1 in edge list entry " +
                                            std::to_string(i));
            max_vertex = std::max({max_vertex, u, v});
            for (int c = 0; c < m; ++c) g.edges_.push_back(Edge{next_id++, u, v});
        }
        g.vertex_count_ = vertex_count ? *vertex_count : max_vertex + 1;
        if (g.vertex_count_ <= max_vertex)
            throw std::invalid_argument("vertex_count smaller than max vertex index");
        return g;
    }

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(int id) const { return find(id) != nullptr; }

    const Edge& edge(int id) const {
        const Edge* e = find(id);
        if (!e) throw std::out_of_range("unknown edge id " + std::to_string(id));
        return *e;
    }

    int degree(int v) const {
        check_vertex(v);
        int d = 0;
        for (const Edge& e : edges_)
            if (e.a == v || e.b == v) ++d;
        return d;
    }

    int multiplicity(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("multiplicity of a vertex with itself");
        int m = 0;
        for (const Edge& e : edges_)
            if ((e.a == u && e.b == v) || (e.a == v && e.b == u)) ++m;
        return m;
    }

    std::vector<int> neighbors(int v) const {
        check_vertex(v);
        std::set<int> out;
        for (const Edge& e : edges_) {
            if (e.a == v) out.insert(e.b);
            if (e.b == v) out.insert(e.a);
        }
        return {out.begin(), out.end()};
    }

    // Edge ids incident with v, ascending.
    std::vector<int> edges_at(int v) const {
        check_vertex(v);
        std::vector<int> out;
        for (const Edge& e : edges_)
            if (e.a == v || e.b == v) out.push_back(e.id);
        return out;
    }

    // Edge ids joining u and v, ascending.
    std::vector<int> edges_between(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        std::vector<int> out;
        for (const Edge& e : edges_)
            if ((e.a == u && e.b == v) || (e.a == v && e.b == u)) out.push_back(e.id);
        return out;
    }

    Multigraph remove_edges(const std::vector<int>& ids) const {
        std::set<int> gone(ids.begin(), ids.end());
        for (int id : gone)
            if (!has_edge(id)) throw std::out_of_range("unknown edge id " + std::to_string(id));
        Multigraph g;
        g.vertex_count_ = vertex_count_;
        for (const Edge& e : edges_)
            if (!gone.count(e.id)) g.edges_.push_back(e);
        return g;
    }

    // Unordered triples {u,v,w} with all three pairs adjacent, lexicographic.
    std::vector<std::array<int, 3>> triangles() const {
        const auto mult = multiplicity_matrix();
        std::vector<std::array<int, 3>> out;
        for (int u = 0; u < vertex_count_; ++u)
            for (int v = u + 1; v < vertex_count_; ++v) {
                if (!mult[idx(u, v)]) continue;
                for (int w = v + 1; w < vertex_count_; ++w)
                    if (mult[idx(u, w)] && mult[idx(v, w)]) out.push_back({u, v, w});
            }
        return out;
    }

    GraphStats stats() const {
        GraphStats s;
        s.edge_count = edge_count();
        for (int v = 0; v < vertex_count_; ++v) s.max_degree = std::max(s.max_degree, degree(v));
        const auto mult = multiplicity_matrix();
        for (const auto& [u, v, w] : triangles())
            s.tau = std::max(s.tau, mult[idx(u, v)] + mult[idx(v, w)] + mult[idx(u, w)]);
        s.omega_prime = std::max(s.tau, s.max_degree);
        return s;
    }

    int max_multiplicity() const {
        int best = 0;
        for (int m : multiplicity_matrix()) best = std::max(best, m);
        return best;
    }

    // Isomorphism-invariant byte key for graphs with at most kCanonicalMaxVertices
    // vertices, computed by minimizing the upper-triangle multiplicity matrix over
    // all vertex permutations. Larger graphs fall back to the identity labeling:
    // still deterministic and injective on labeled graphs, so usable as a memo
    // key, but without the isomorphism guarantee.
    static constexpr int kCanonicalMaxVertices = 7;

    std::string canonical_key() const {
        const int n = vertex_count_;
        std::vector<int> mult = multiplicity_matrix();
        std::string best;
        best.push_back(static_cast<char>(n));
        auto append_perm = [&](const std::vector<int>& perm, std::string& out) {
            out.resize(1 + mult.size());
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    int m = mult[idx(u, v)];
                    if (m > 255) throw std::invalid_argument("multiplicity exceeds key range");
                    out[1 + idx_of(perm[u], perm[v], n)] = static_cast<char>(m);
                }
        };
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        if (n <= kCanonicalMaxVertices) {
            std::string cand;
            cand.push_back(static_cast<char>(n));
            bool first = true;
            do {
                append_perm(perm, cand);
                cand[0] = static_cast<char>(n);
                if (first || cand < best) best = cand;
                first = false;
            } while (std::next_permutation(perm.begin(), perm.end()));
        } else {
            append_perm(perm, best);
            best[0] = static_cast<char>(n);
        }
        return best;
    }

    // Exact equality: same vertex count, same edge ids with same endpoints.
    friend bool operator==(const Multigraph& x, const Multigraph& y) {
        return x.vertex_count_ == y.vertex_count_ && x.edges_ == y.edges_;
    }

    // Equality as labeled multigraphs: same vertex count and multiplicity
    // function, ignoring edge identities.
    bool structurally_equal(const Multigraph& other) const {
        return vertex_count_ == other.vertex_count_ &&
               multiplicity_matrix() == other.multiplicity_matrix();
    }

    // Upper-triangle multiplicity matrix in row-major pair order.
    std::vector<int> multiplicity_matrix() const {
        std::vector<int> mult(static_cast<std::size_t>(vertex_count_) *
                                  std::max(0, vertex_count_ - 1) / 2,
                              0);
        for (const Edge& e : edges_) ++mult[idx(std::min(e.a, e.b), std::max(e.a, e.b))];
        return mult;
    }

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;  // ascending by id

    const Edge* find(int id) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                                   [](const Edge& e, int key) { return e.id < key; });
        return (it != edges_.end() && it->id == id) ? &*it : nullptr;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count_)
            throw std::out_of_range("vertex index " + std::to_string(v) + " out of range");
    }

    static std::size_t idx_of(int u, int v, int n) {
        if (u > v) std::swap(u, v);
        return static_cast<std::size_t>(u) * (2 * n - u - 1) / 2 + (v - u - 1);
    }
    std::size_t idx(int u, int v) const { return idx_of(u, v, vertex_count_); }
};

// Connected components as vertex sets (vertices with no edges form singleton
// components). Ascending within and across components.
inline std::vector<std::vector<int>> connected_components(const Multigraph& g) {
    const int n = g.vertex_count();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto root = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const Edge& e : g.edges()) parent[root(e.a)] = root(e.b);
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(n, -1);
    for (int v = 0; v < n; ++v) {
        int r = root(v);
        if (comp_of[r] < 0) {
            comp_of[r] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[comp_of[r]].push_back(v);
    }
    return comps;
}

inline std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

}  // namespace kempe
