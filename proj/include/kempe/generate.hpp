#pragma once

// Graph families for tests and batch runs: Shannon triangles, multiplied
// cycles, the Petersen graph, seed-deterministic random multigraphs, and
// exhaustive enumeration of small multigraphs up to isomorphism.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kempe/multigraph.hpp"

namespace kempe {

struct FamilySpec {
    enum class Kind { ShannonTriangle, MultiCycle, Petersen, Random, Enumerate };
    Kind kind = Kind::Petersen;
    int k = 1;           // multiplicity (ShannonTriangle, MultiCycle)
    int n = 3;           // cycle length / random vertex count
    int max_mult = 1;    // Random, Enumerate
    double edge_prob = 0.5;
    std::uint64_t seed = 0;
    int max_n = 4;       // Enumerate
    int max_edges = 6;   // Enumerate
};

inline Multigraph shannon_triangle(int k) {
    if (k < 1) throw std::invalid_argument("shannon triangle needs multiplicity >= 1");
    return Multigraph::from_edge_list({{0, 1, k}, {1, 2, k}, {0, 2, k}});
}

inline Multigraph multi_cycle(int n, int k) {
    if (n < 3 || k < 1) throw std::invalid_argument("multi cycle needs n >= 3, k >= 1");
    std::vector<std::array<int, 3>> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({i, (i + 1) % n, k});
    return Multigraph::from_edge_list(pairs);
}

inline Multigraph petersen() {
    std::vector<std::array<int, 3>> pairs;
    for (int i = 0; i < 5; ++i) pairs.push_back({i, (i + 1) % 5, 1});           // outer cycle
    for (int i = 0; i < 5; ++i) pairs.push_back({5 + i, 5 + (i + 2) % 5, 1});   // pentagram
    for (int i = 0; i < 5; ++i) pairs.push_back({i, 5 + i, 1});                 // spokes
    return Multigraph::from_edge_list(pairs);
}

// Seed-deterministic: each pair is included with probability edge_prob, with
// a uniform multiplicity in [1, max_mult]. Draws come straight from
// mt19937_64 outputs, so results are identical across platforms.
inline Multigraph random_multigraph(int n, int max_mult, double edge_prob, std::uint64_t seed) {
    if (n < 1 || max_mult < 1 || edge_prob < 0.0 || edge_prob > 1.0)
        throw std::invalid_argument("bad random multigraph parameters");
    std::mt19937_64 gen(seed);
    auto unit = [&]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<std::array<int, 3>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            bool present = unit() < edge_prob;
            std::uint64_t draw = gen();  // always drawn, to keep streams aligned
            if (present)
                pairs.push_back({u, v, 1 + static_cast<int>(draw % static_cast<std::uint64_t>(
                                                                max_mult))});
        }
    return Multigraph::from_edge_list(pairs, n);
}

namespace detail {

// Exhaustive enumeration of multigraphs with n = 1..max_n vertices, at most
// max_edges edges counting multiplicity and per-pair multiplicity at most
// max_mult, one representative per isomorphism class (first labeled graph in
// odometer order wins). Capped at 7 vertices where canonical keys are exact.
class Enumerator {
public:
    Enumerator(int max_n, int max_edges, int max_mult)
        : max_n_(max_n), max_edges_(max_edges), max_mult_(max_mult) {
        if (max_n < 1 || max_n > Multigraph::kCanonicalMaxVertices)
            throw std::invalid_argument("enumeration supports 1..7 vertices");
        if (max_edges < 0 || max_mult < 1)
            throw std::invalid_argument("bad enumeration bounds");
        start_vertex_count(1);
    }

    std::optional<Multigraph> next() {
        while (n_ <= max_n_) {
            if (!exhausted_) {
                Multigraph g = build();
                std::string key = g.canonical_key();
                advance();
                if (seen_.insert(key).second) return g;
            } else if (n_ < max_n_) {
                start_vertex_count(n_ + 1);
            } else {
                break;
            }
        }
        return std::nullopt;
    }

private:
    int max_n_, max_edges_, max_mult_;
    int n_ = 0;
    std::vector<int> mult_;  // per pair, lexicographic pair order
    bool exhausted_ = false;
    std::set<std::string> seen_;

    void start_vertex_count(int n) {
        n_ = n;
        mult_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
        exhausted_ = false;
    }

    int total() const {
        int t = 0;
        for (int m : mult_) t += m;
        return t;
    }

    void advance() {
        // Odometer with a running sum cap.
        for (std::size_t i = 0; i < mult_.size(); ++i) {
            if (mult_[i] < max_mult_ && total() < max_edges_) {
                ++mult_[i];
                return;
            }
            mult_[i] = 0;
        }
        exhausted_ = true;
    }

    Multigraph build() const {
        std::vector<std::array<int, 3>> pairs;
        std::size_t idx = 0;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v, ++idx)
                if (mult_[idx] > 0) pairs.push_back({u, v, mult_[idx]});
        return Multigraph::from_edge_list(pairs, n_);
    }
};

}  // namespace detail

struct GraphStream {
    std::function<std::optional<Multigraph>()> next;
};

inline GraphStream generate(const FamilySpec& spec) {
    using Kind = FamilySpec::Kind;
    switch (spec.kind) {
        case Kind::ShannonTriangle:
        case Kind::MultiCycle:
        case Kind::Petersen:
        case Kind::Random: {
            auto once = std::make_shared<std::optional<Multigraph>>();
            switch (spec.kind) {
                case Kind::ShannonTriangle: *once = shannon_triangle(spec.k); break;
                case Kind::MultiCycle: *once = multi_cycle(spec.n, spec.k); break;
                case Kind::Petersen: *once = petersen(); break;
                default: *once = random_multigraph(spec.n, spec.max_mult, spec.edge_prob, spec.seed);
            }
            return {[once]() {
                std::optional<Multigraph> out = std::move(*once);
                once->reset();
                return out;
            }};
        }
        case Kind::Enumerate: {
            auto e = std::make_shared<detail::Enumerator>(spec.max_n, spec.max_edges,
                                                          spec.max_mult);
            return {[e]() { return e->next(); }};
        }
    }
    throw std::logic_error("unknown family kind");
}

// Compact family grammar: shannon:K | multicycle:N,K | petersen |
// random:N,MAX_MULT,EDGE_PROB,SEED | enumerate:MAX_N,MAX_EDGES,MAX_MULT
inline FamilySpec parse_family(const std::string& text) {
    FamilySpec spec;
    std::string kind = text;
    std::string args;
    if (auto pos = text.find(':'); pos != std::string::npos) {
        kind = text.substr(0, pos);
        args = text.substr(pos + 1);
    }
    std::vector<std::string> parts;
    {
        std::istringstream in(args);
        std::string p;
        while (std::getline(in, p, ',')) parts.push_back(p);
    }
    auto want = [&](std::size_t count) {
        if (parts.size() != count)
            throw std::invalid_argument("family `" + kind + "` expects " +
                                        std::to_string(count) + " parameters");
    };
    try {
        if (kind == "shannon") {
            want(1);
            spec.kind = FamilySpec::Kind::ShannonTriangle;
            spec.k = std::stoi(parts[0]);
        } else if (kind == "multicycle") {
            want(2);
            spec.kind = FamilySpec::Kind::MultiCycle;
            spec.n = std::stoi(parts[0]);
            spec.k = std::stoi(parts[1]);
        } else if (kind == "petersen") {
            want(0);
            spec.kind = FamilySpec::Kind::Petersen;
        } else if (kind == "random") {
            want(4);
            spec.kind = FamilySpec::Kind::Random;
            spec.n = std::stoi(parts[0]);
            spec.max_mult = std::stoi(parts[1]);
            spec.edge_prob = std::stod(parts[2]);
            spec.seed = std::stoull(parts[3]);
        } else if (kind == "enumerate") {
            want(3);
            spec.kind = FamilySpec::Kind::Enumerate;
            spec.max_n = std::stoi(parts[0]);
            spec.max_edges = std::stoi(parts[1]);
            spec.max_mult = std::stoi(parts[2]);
        } else {
            throw std::invalid_argument("unknown family `" + kind + "`");
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed family parameters in `" + text + "`");
    }
    return spec;
}

inline std::string family_name(const FamilySpec& spec) {
    std::ostringstream out;
    switch (spec.kind) {
        case FamilySpec::Kind::ShannonTriangle: out << "shannon_" << spec.k; break;
        case FamilySpec::Kind::MultiCycle: out << "multicycle_" << spec.n << "_" << spec.k; break;
        case FamilySpec::Kind::Petersen: out << "petersen"; break;
        case FamilySpec::Kind::Random:
            out << "random_" << spec.n << "_" << spec.max_mult << "_" << spec.seed;
            break;
        case FamilySpec::Kind::Enumerate:
            out << "enumerate_" << spec.max_n << "_" << spec.max_edges << "_" << spec.max_mult;
            break;
    }
    return out.str();
}

}  // namespace kempe
