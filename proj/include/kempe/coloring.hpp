#pragma once

// Partial edge colorings, palettes, missing-color queries, and Kempe-chain
// machinery (two-color components and swaps).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kempe/multigraph.hpp"

namespace kempe {

// Ordered finite set of color identifiers.
struct Palette {
    std::vector<int> colors;

    static Palette first(int k) {
        Palette p;
        p.colors.resize(k);
        for (int i = 0; i < k; ++i) p.colors[i] = i;
        return p;
    }
    int base_size() const { return static_cast<int>(colors.size()); }
    bool contains(int c) const {
        return std::find(colors.begin(), colors.end(), c) != colors.end();
    }
};

// Partial map edge_id -> color. Value type; properness is checked by
// validate(), not enforced on every mutation.
class EdgeColoring {
public:
    bool has(int edge_id) const { return assign_.count(edge_id) != 0; }

    std::optional<int> color_of(int edge_id) const {
        auto it = assign_.find(edge_id);
        if (it == assign_.end()) return std::nullopt;
        return it->second;
    }

    void set(int edge_id, int color) { assign_[edge_id] = color; }
    void unset(int edge_id) { assign_.erase(edge_id); }

    const std::map<int, int>& assignments() const { return assign_; }
    std::size_t size() const { return assign_.size(); }

    int distinct_colors() const {
        std::set<int> s;
        for (const auto& [e, c] : assign_) s.insert(c);
        return static_cast<int>(s.size());
    }

    friend bool operator==(const EdgeColoring& x, const EdgeColoring& y) {
        return x.assign_ == y.assign_;
    }

private:
    std::map<int, int> assign_;
};

// True iff no two colored edges sharing an endpoint have equal colors.
// Parallel edges share both endpoints, so they count.
inline bool validate(const Multigraph& g, const EdgeColoring& coloring) {
    std::map<std::pair<int, int>, int> seen;  // (vertex, color) -> count
    for (const auto& [edge_id, color] : coloring.assignments()) {
        const Edge& e = g.edge(edge_id);
        if (++seen[{e.a, color}] > 1) return false;
        if (++seen[{e.b, color}] > 1) return false;
    }
    return true;
}

// Colors of the palette not appearing on colored edges at x, ascending.
inline std::vector<int> missing_colors(const Multigraph& g, const EdgeColoring& coloring, int x,
                                       const Palette& palette) {
    std::set<int> present;
    for (int id : g.edges_at(x))
        if (auto c = coloring.color_of(id)) present.insert(*c);
    std::vector<int> out;
    for (int c : palette.colors)
        if (!present.count(c)) out.push_back(c);
    return out;
}

struct KempeComponent {
    enum class Shape { Path, EvenCycle };
    std::vector<int> edge_ids;  // ordered along the walk
    Shape shape = Shape::Path;
    std::pair<int, int> colors{0, 0};  // (c, alpha)

    bool empty() const { return edge_ids.empty(); }
};

// Component of the subgraph induced by colors {c, alpha} that contains x.
// Under a proper coloring each vertex meets at most one c-edge and one
// alpha-edge, so components are paths or even cycles. Empty path if x meets
// neither color. The walk starts along x's c-edge when present.
inline KempeComponent kempe_component(const Multigraph& g, const EdgeColoring& coloring, int c,
                                      int alpha, int x) {
    if (c == alpha) throw std::invalid_argument("kempe_component requires two distinct colors");
    KempeComponent comp;
    comp.colors = {c, alpha};

    auto edge_with_color_at = [&](int v, int color, int skip_edge) -> std::optional<int> {
        for (int id : g.edges_at(v))
            if (id != skip_edge && coloring.color_of(id) == std::optional<int>(color)) return id;
        return std::nullopt;
    };

    // Walk from x starting with `first_color`; returns edge ids in walk order.
    auto walk = [&](int first_color, bool* closed) -> std::vector<int> {
        std::vector<int> out;
        *closed = false;
        int at = x;
        int want = first_color;
        int prev_edge = -1;
        while (true) {
            auto next = edge_with_color_at(at, want, prev_edge);
            if (!next) return out;
            out.push_back(*next);
            const Edge& e = g.edge(*next);
            at = (e.a == at) ? e.b : e.a;
            prev_edge = *next;
            want = (want == c) ? alpha : c;
            if (at == x) {
                *closed = true;
                return out;
            }
        }
    };

    bool closed = false;
    std::vector<int> forward = walk(c, &closed);
    if (closed) {
        comp.edge_ids = forward;
        comp.shape = KempeComponent::Shape::EvenCycle;
        return comp;
    }
    bool closed_back = false;
    std::vector<int> backward = walk(alpha, &closed_back);
    // A walk that did not close going forward cannot close going backward.
    std::reverse(backward.begin(), backward.end());
    comp.edge_ids = std::move(backward);
    comp.edge_ids.insert(comp.edge_ids.end(), forward.begin(), forward.end());
    comp.shape = KempeComponent::Shape::Path;
    return comp;
}

// Interchanges colors c and alpha on the component's edges. The component
// must be a genuine component of the coloring under (c, alpha); otherwise the
// swap would break properness and this throws.
inline EdgeColoring kempe_swap(const Multigraph& g, const EdgeColoring& coloring,
                               const KempeComponent& comp) {
    if (comp.empty()) return coloring;
    const auto [c, alpha] = comp.colors;
    const Edge& anchor = g.edge(comp.edge_ids.front());
    KempeComponent recomputed = kempe_component(g, coloring, c, alpha, anchor.a);
    std::set<int> want(comp.edge_ids.begin(), comp.edge_ids.end());
    std::set<int> have(recomputed.edge_ids.begin(), recomputed.edge_ids.end());
    if (want != have)
        throw std::invalid_argument("kempe_swap: not a genuine (c,alpha) component");
    EdgeColoring out = coloring;
    for (int id : comp.edge_ids) {
        int cur = *coloring.color_of(id);
        out.set(id, cur == c ? alpha : c);
    }
    return out;
}

}  // namespace kempe
